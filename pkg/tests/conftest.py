"""Session-scoped grids plus shared sampling helpers.

Grid construction dominates test time, so every test module draws from the
same cached fixtures. Helpers live here (not in a package module) because
tests import them directly via the conftest path hook.
"""
import numpy as np
import pytest

from qhgeo import GridParams, build_grid, compile_domain


def sample_interior(domain, n, seed, min_delta=0.0):
    """Rejection-sample n interior points from the bounding box."""
    rng = np.random.default_rng(seed)
    lo = np.asarray(domain.bbox_lo)
    hi = np.asarray(domain.bbox_hi)
    out = []
    while len(out) < n:
        cand = rng.uniform(lo, hi, size=(max(4 * n, 64), 2))
        keep = domain.contains_many(cand)
        if min_delta > 0.0:
            keep &= domain.delta_many(cand) > min_delta
        out.extend(map(tuple, cand[keep]))
    return out[:n]


def batched_k(g, sources, targets):
    """k(x, y) for every source-target combination, one field per source.

    Mirrors GridGraph.qh_distance (attach stubs plus node-to-node distance)
    but runs a single shortest-path sweep per source instead of one per pair.
    """
    t_att = [g.attach(p) for p in targets]
    out = np.empty((len(sources), len(targets)))
    for i, s in enumerate(sources):
        u, stub_u, _ = g.attach(s)
        field = g.node_field(u)
        for j, (v, stub_v, _) in enumerate(t_att):
            out[i, j] = stub_u + (0.0 if u == v else float(field[v])) + stub_v
    return out


def eq1_lower_bounds(domain, x, y):
    """The two distance lower bounds: log(1 + gap/min delta), |log ratio|."""
    pts = np.asarray([x, y], float)
    dx, dy = domain.delta_many(pts)
    gap = float(np.hypot(*(pts[1] - pts[0])))
    return float(np.log1p(gap / min(dx, dy))), abs(float(np.log(dy / dx)))


@pytest.fixture(scope="session")
def disk_domain():
    return compile_domain({"type": "disk", "center": [0, 0], "radius": 1.0})


@pytest.fixture(scope="session")
def square_domain():
    return compile_domain({"type": "rect", "min": [-0.5, -0.5], "max": [0.5, 0.5]})


@pytest.fixture(scope="session")
def comb_domain():
    return compile_domain({"type": "comb", "teeth": 8})


@pytest.fixture(scope="session")
def slit_domain():
    return compile_domain({
        "type": "slits",
        "base": {"type": "disk", "center": [0, 0], "radius": 1.0},
        "segments": [[[0, 0], [1, 0]]],
    })


@pytest.fixture(scope="session")
def disk64(disk_domain):
    return build_grid(disk_domain, GridParams(h=1 / 64, boundary_layer=1))


@pytest.fixture(scope="session")
def disk128(disk_domain):
    return build_grid(disk_domain, GridParams(h=1 / 128, boundary_layer=1))


@pytest.fixture(scope="session")
def disk256(disk_domain):
    return build_grid(disk_domain, GridParams(h=1 / 256, boundary_layer=1))


@pytest.fixture(scope="session")
def square128(square_domain):
    return build_grid(square_domain, GridParams(h=1 / 128, boundary_layer=1))


@pytest.fixture(scope="session")
def comb_grid(comb_domain):
    return build_grid(comb_domain, GridParams(h=1 / 64, boundary_layer=3))


@pytest.fixture(scope="session")
def slit_grid(slit_domain):
    return build_grid(slit_domain, GridParams(h=1 / 64, boundary_layer=2))
