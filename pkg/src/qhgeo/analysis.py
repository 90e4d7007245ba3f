"""Gromov products, hyperbolicity estimates, and boundary probes.

All probes are read-only over a GridGraph and deterministic for a fixed
seed. Endpoint selection near an anchor is "admissible node nearest the
anchor within the scale radius", ties to the lowest node index, restricted
to the component of the probe basepoint; approach arcs additionally
restrict candidates to a 25-degree cone around the arc direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domains import Anchor
from .errors import (ConstraintError, GeometryError, ResolutionError,
                     SampleError)
from .geometry import Point2, as_point
from .grid import GridGraph

_CONE_COS = math.cos(math.radians(25.0))


def gromov_product(g: GridGraph, o, x, y) -> float:
    """(x|y)_o = (k(x,o) + k(o,y) - k(x,y)) / 2 in the grid metric."""
    return 0.5 * (g.qh_distance(x, o) + g.qh_distance(o, y) - g.qh_distance(x, y))


# ---------------------------------------------------------------------------
# delta-hyperbolicity estimation


@dataclass(frozen=True)
class DeltaEstimate:
    method: str
    value: float
    samples: int
    seed: int
    worst_configuration: tuple

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "value": self.value,
            "samples": self.samples,
            "seed": self.seed,
            "worst_configuration": [list(p) for p in self.worst_configuration],
        }


def _main_component(g: GridGraph) -> int:
    return int(np.bincount(g.labels).argmax())


def _sample_pool(g: GridGraph, size: int, rng: np.random.Generator) -> np.ndarray:
    """Pool of distinct node ids near rejection-sampled interior points.

    Points (not nodes) are sampled so the pool is stable under grid
    refinement with the same seed; a delta floor of 2% of the domain scale
    keeps endpoint stubs small relative to the distances compared.
    """
    dom = g.domain
    lo, hi = np.asarray(dom.bbox_lo), np.asarray(dom.bbox_hi)
    floor = 0.02 * dom.scale
    label = _main_component(g)
    seen: set[int] = set()
    pool: list[int] = []
    for _ in range(200 * size):
        p = lo + rng.random(2) * (hi - lo)
        if not dom.contains_many(p[None])[0]:
            continue
        if float(dom.delta_many(p[None])[0]) < floor:
            continue
        try:
            u, _, _ = g.attach(p)
        except ResolutionError:
            continue
        if g.labels[u] != label or u in seen:
            continue
        seen.add(u)
        pool.append(u)
        if len(pool) >= size:
            break
    if len(pool) < 4:
        raise SampleError(
            f"could only place {len(pool)} distinct pool nodes; refine the grid")
    return np.asarray(pool, dtype=np.int64)


def estimate_delta_four_point(g: GridGraph, n_samples: int, seed: int,
                              pool_size: int = 180) -> DeltaEstimate:
    """Max four-point defect [min((x|y)_p,(y|z)_p) - (x|z)_p]+ over quadruples.

    The pool is fixed by the seed; quadruple rows are drawn in one stream,
    so the estimate is monotone nondecreasing in n_samples for a fixed seed.
    """
    if n_samples < 1:
        raise SampleError("n_samples must be >= 1")
    if g.node_count < 4:
        raise SampleError("need at least 4 nodes")
    rng = np.random.default_rng(seed)
    pool = _sample_pool(g, pool_size, rng)
    dmat = g.node_distance_matrix(pool)
    quads = rng.integers(0, len(pool), size=(n_samples, 4))
    x, y, z, p = quads[:, 0], quads[:, 1], quads[:, 2], quads[:, 3]

    def gp(a, b):
        return 0.5 * (dmat[a, p] + dmat[b, p] - dmat[a, b])

    defect = np.minimum(gp(x, y), gp(y, z)) - gp(x, z)
    np.clip(defect, 0.0, None, out=defect)
    best = int(defect.argmax())
    worst_nodes = pool[quads[best]]
    worst = tuple(tuple(map(float, g.centers[u])) for u in worst_nodes)
    return DeltaEstimate("four_point", float(defect[best]), n_samples, seed, worst)


def estimate_delta_thin_triangles(g: GridGraph, n_samples: int, seed: int,
                                  pool_size: int = 60) -> DeltaEstimate:
    """Max one-sided Hausdorff gap of geodesic triangle sides (thinness)."""
    if n_samples < 1:
        raise SampleError("n_samples must be >= 1")
    if g.node_count < 3:
        raise SampleError("need at least 3 nodes")
    rng = np.random.default_rng(seed)
    pool = _sample_pool(g, pool_size, rng)
    triples = rng.integers(0, len(pool), size=(n_samples, 3))
    runs: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def run(u: int):
        if u not in runs:
            runs[u] = g.node_field_with_pred(u)
        return runs[u]

    best_val = 0.0
    best_triple = triples[0]
    for row in triples:
        a, b, c = (int(pool[i]) for i in row)
        _, pred_a = run(a)
        _, pred_b = run(b)
        side_ab = np.asarray(GridGraph._chain(pred_a, a, b) if a != b else [a])
        side_ac = np.asarray(GridGraph._chain(pred_a, a, c) if a != c else [a])
        side_bc = np.asarray(GridGraph._chain(pred_b, b, c) if b != c else [b])
        val = 0.0
        for side, others in ((side_ab, (side_ac, side_bc)),
                             (side_ac, (side_ab, side_bc)),
                             (side_bc, (side_ab, side_ac))):
            union = np.unique(np.concatenate(others))
            dist = g.multi_source_field(union)
            val = max(val, float(dist[side].max()))
        if val > best_val:
            best_val = val
            best_triple = row
    worst_nodes = pool[best_triple]
    worst = tuple(tuple(map(float, g.centers[u])) for u in worst_nodes)
    return DeltaEstimate("thin_triangle", best_val, n_samples, seed, worst)


# ---------------------------------------------------------------------------
# scale-ladder probes


@dataclass
class ProbeReport:
    kind: str
    p: tuple
    q: tuple
    x0: tuple
    scales: list[float]
    endpoints: list[tuple]       # ((x_k), (y_k)) node coordinates per scale
    m: list[float]               # inf over the geodesic of k(x0, .)
    clearance: list[float]       # max delta over the geodesic
    gromov_products: list[float]
    k_xy: list[float]            # endpoint-to-endpoint distance per scale
    verdict: str
    divergence_slope: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "p": list(self.p),
            "q": list(self.q),
            "scales": self.scales,
            "m": self.m,
            "clearance": self.clearance,
            "gromov_products": self.gromov_products,
            "verdict": self.verdict,
            "divergence_slope": self.divergence_slope,
            "x0": list(self.x0),
            "endpoints": [[list(a), list(b)] for a, b in self.endpoints],
            "k_xy": self.k_xy,
        }
        out.update(self.extra)
        return out


def _as_anchor(a) -> Anchor:
    if isinstance(a, Anchor):
        return a
    return Anchor(as_point(a))


def _check_scales(scales) -> list[float]:
    scales = [float(t) for t in scales]
    if len(scales) < 2:
        raise ConstraintError("need at least two probe scales")
    if any(t <= 0 for t in scales):
        raise ConstraintError("scales must be positive")
    if any(b >= a for a, b in zip(scales, scales[1:])):
        raise ConstraintError("scales must be strictly decreasing")
    return scales


def _check_boundary(g: GridGraph, pt: Point2, what: str) -> None:
    d = float(g.domain.delta_many(np.array([[pt.x, pt.y]]))[0])
    if d > 1e-9 * g.domain.scale:
        raise ConstraintError(f"{what} must lie on the boundary (delta={d:.3e})")


def _select_node(g: GridGraph, pt: Point2, t: float, label: int,
                 direction=None) -> int | None:
    """Deepest admissible node within radius t of pt.

    Depth (max delta) makes the endpoint track the scale: in a comb the
    t-ball's deepest node sits in the widest corridor the ball reaches, so
    shrinking t walks the endpoints through successively finer corridors,
    while near a smooth boundary it just picks a point at depth ~t. Ties go
    to the node nearest pt, then to the lowest index.
    """
    ids = g._tree.query_ball_point([pt.x, pt.y], r=t)
    if not ids:
        return None
    ids = np.asarray(sorted(ids), dtype=np.int64)
    ids = ids[g.labels[ids] == label]
    if len(ids) == 0:
        return None
    off = g.centers[ids] - [pt.x, pt.y]
    dist = np.hypot(off[:, 0], off[:, 1])
    if direction is not None:
        with np.errstate(invalid="ignore"):
            cosang = (off @ direction) / np.where(dist > 0, dist, np.inf)
        keep = cosang >= _CONE_COS
        ids, dist = ids[keep], dist[keep]
        if len(ids) == 0:
            return None
    pick = np.lexsort((ids, dist, -g.deltas[ids]))[0]
    return int(ids[pick])


def _divergence_slope(scales: list[float], m: list[float]) -> float:
    if len(scales) < 2:
        return 0.0
    xs = np.log2(scales[0] / np.asarray(scales))
    return float(np.polyfit(xs, np.asarray(m), 1)[0])


def _probe_ladder(g: GridGraph, p: Anchor, q: Anchor, x0, scales: list[float],
                  dir_p=None, dir_q=None, distinct: bool = False):
    """Shared endpoint-ladder engine for the three boundary probes."""
    x0pt = as_point(x0)
    u0, stub0, _ = g.attach(x0pt)
    label = int(g.labels[u0])
    field = g.node_field(u0) + stub0
    rows = []
    for t in scales:
        xk = _select_node(g, p.point, t, label, dir_p)
        if xk is None:
            raise ResolutionError(
                f"no admissible node within t={t:g} of anchor ({p.point.x:g}, {p.point.y:g})")
        yk = _select_node(g, q.point, t, label, dir_q)
        if yk is None:
            raise ResolutionError(
                f"no admissible node within t={t:g} of anchor ({q.point.x:g}, {q.point.y:g})")
        if distinct and xk == yk:
            raise GeometryError(f"approach arcs are not disjoint at scale t={t:g}")
        dist, pred = g.node_field_with_pred(xk)
        chain = np.asarray(GridGraph._chain(pred, xk, yk) if xk != yk else [xk])
        k_xy = float(dist[yk]) if xk != yk else 0.0
        m_k = float(field[chain].min())
        clear_k = float(g.deltas[chain].max())
        prod = 0.5 * (float(field[xk]) + float(field[yk]) - k_xy)
        rows.append((t, xk, yk, m_k, clear_k, prod, k_xy))
    return rows


def _rising_window(m: list[float], min_len: int = 3, rise: float = 2.0) -> bool:
    """True if some >= min_len consecutive scales increase with total >= rise."""
    n = len(m)
    for i in range(n - min_len + 1):
        j = i
        while j + 1 < n and m[j + 1] > m[j]:
            j += 1
        if j - i + 1 >= min_len and m[j] - m[i] >= rise:
            return True
    return False


def visibility_probe(g: GridGraph, p, q, x0, scales) -> ProbeReport:
    """Probe whether geodesics between p- and q-approaching points stay deep.

    Verdict rules: visible iff the last three m-increments are all < 0.1 and
    the final clearance stays above half the first; not_visible iff m rises
    monotonically over >= 3 consecutive scales with total rise >= 2, or the
    final clearance drops below a tenth of the first; else inconclusive.
    """
    p, q = _as_anchor(p), _as_anchor(q)
    if p.point.x == q.point.x and p.point.y == q.point.y:
        raise ConstraintError("p and q coincide; use loop_probe for one point")
    scales = _check_scales(scales)
    _check_boundary(g, p.point, "anchor p")
    _check_boundary(g, q.point, "anchor q")
    rows = _probe_ladder(g, p, q, x0, scales)
    m = [r[3] for r in rows]
    clear = [r[4] for r in rows]
    incs = [b - a for a, b in zip(m, m[1:])]
    vis = max(incs[-3:]) < 0.1 and clear[-1] > 0.5 * clear[0] if len(incs) >= 3 else False
    notvis = _rising_window(m) or clear[-1] < 0.1 * clear[0]
    if vis and not notvis:
        verdict = "visible"
    elif notvis and not vis:
        verdict = "not_visible"
    else:
        verdict = "inconclusive"
    return ProbeReport(
        kind="visibility",
        p=p.point.as_tuple(), q=q.point.as_tuple(), x0=as_point(x0).as_tuple(),
        scales=scales,
        endpoints=[(tuple(map(float, g.centers[r[1]])),
                    tuple(map(float, g.centers[r[2]]))) for r in rows],
        m=m, clearance=clear,
        gromov_products=[r[5] for r in rows],
        k_xy=[r[6] for r in rows],
        verdict=verdict,
        divergence_slope=_divergence_slope(scales, m),
    )


def gromov_product_boundary_probe(g: GridGraph, p, q, o, scales) -> ProbeReport:
    """Gromov products (x_k|y_k)_o of the visibility endpoint sequences.

    Verdict bounded iff the last three product increments are all < 0.1.
    """
    p, q = _as_anchor(p), _as_anchor(q)
    if p.point.x == q.point.x and p.point.y == q.point.y:
        raise ConstraintError("p and q coincide; use loop_probe for one point")
    scales = _check_scales(scales)
    _check_boundary(g, p.point, "anchor p")
    _check_boundary(g, q.point, "anchor q")
    rows = _probe_ladder(g, p, q, o, scales)
    prods = [r[5] for r in rows]
    incs = [b - a for a, b in zip(prods, prods[1:])]
    bounded = len(incs) >= 3 and max(incs[-3:]) < 0.1
    return ProbeReport(
        kind="gromov_boundary",
        p=p.point.as_tuple(), q=q.point.as_tuple(), x0=as_point(o).as_tuple(),
        scales=scales,
        endpoints=[(tuple(map(float, g.centers[r[1]])),
                    tuple(map(float, g.centers[r[2]]))) for r in rows],
        m=[r[3] for r in rows],
        clearance=[r[4] for r in rows],
        gromov_products=prods,
        k_xy=[r[6] for r in rows],
        verdict="bounded" if bounded else "unbounded",
        divergence_slope=_divergence_slope(scales, prods),
    )


def loop_probe(g: GridGraph, p, x0, scales, arcs) -> ProbeReport:
    """Probe for a geodesic loop: both endpoint families approach one point p.

    arcs gives two interior approach directions at p (unit vectors or
    Anchors whose inward normals are used). Verdict loop_suspected iff m
    varies by < 0.25 over the last three scales while the endpoints stay
    >= 4 apart; well_behaved iff m rises by >= 1 over the last three scales.
    """
    p = _as_anchor(p)
    scales = _check_scales(scales)
    if len(scales) < 3:
        raise ConstraintError("loop_probe needs at least three scales")
    if g.domain.contains(p.point):
        raise ConstraintError("loop_probe needs a boundary point, got an interior one")
    _check_boundary(g, p.point, "anchor p")
    if len(arcs) != 2:
        raise ConstraintError("arcs must give exactly two approach directions")
    dirs = []
    for a in arcs:
        if isinstance(a, Anchor):
            if a.inward is None:
                raise ConstraintError("arc anchor has no inward direction")
            v = np.asarray(a.inward, dtype=float)
        else:
            v = np.asarray(a, dtype=float)
        n = float(np.hypot(v[0], v[1]))
        if not n > 0:
            raise ConstraintError("arc direction must be a nonzero vector")
        dirs.append(v / n)
    rows = _probe_ladder(g, p, p, x0, scales, dir_p=dirs[0], dir_q=dirs[1],
                         distinct=True)
    m = [r[3] for r in rows]
    k_xy = [r[6] for r in rows]
    suspected = (max(m[-3:]) - min(m[-3:]) < 0.25) and k_xy[-1] >= 4.0
    behaved = m[-1] - m[-3] >= 1.0
    if suspected and not behaved:
        verdict = "loop_suspected"
    elif behaved and not suspected:
        verdict = "well_behaved"
    else:
        verdict = "inconclusive"
    return ProbeReport(
        kind="loop",
        p=p.point.as_tuple(), q=p.point.as_tuple(), x0=as_point(x0).as_tuple(),
        scales=scales,
        endpoints=[(tuple(map(float, g.centers[r[1]])),
                    tuple(map(float, g.centers[r[2]]))) for r in rows],
        m=m,
        clearance=[r[4] for r in rows],
        gromov_products=[r[5] for r in rows],
        k_xy=k_xy,
        verdict=verdict,
        divergence_slope=_divergence_slope(scales, m),
        extra={"arcs": [list(map(float, d)) for d in dirs]},
    )
