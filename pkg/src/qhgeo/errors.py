"""Exception taxonomy. The CLI maps these onto exit codes."""


class QhgeoError(Exception):
    """Base class for all package errors."""


class ParseError(QhgeoError):
    """Malformed domain JSON; message names the offending path."""


class ConstraintError(QhgeoError):
    """Parameter outside its documented range (e.g. beta/alpha ordering)."""


class GeometryError(QhgeoError):
    """Degenerate or inconsistent geometry (empty interior, overlapping fingers, ...)."""


class DomainError(QhgeoError):
    """A query point lies outside the domain."""


class AnchorError(QhgeoError):
    """Unknown boundary anchor name."""


class ResolutionError(QhgeoError):
    """Grid parameters admit no nodes."""


class UnreachableError(QhgeoError):
    """Endpoints fall in different graph components."""


class SampleError(QhgeoError):
    """Not enough samples to run a statistical check."""


class FunctionError(QhgeoError):
    """Invalid growth function (non-monotone, out of tabulated range, ...)."""


class InternalInvariantError(QhgeoError):
    """A printed result violated a required metric inequality."""


class DisconnectedDomainError(GeometryError, UnreachableError):
    """Compiled interior splits into well-separated components."""
