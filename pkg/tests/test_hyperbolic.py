"""Closed-form hyperbolic geometry on the unit disk and graph comparison."""
import numpy as np
import pytest
from scipy.spatial import cKDTree

from qhgeo import (MINUS_FOUR, MINUS_ONE, bh_quasigeodesic_check,
                   compare_metrics_disk, disk_automorphism, hyp_density,
                   hyp_distance_disk, hyp_geodesic_disk, hyp_polyline_length,
                   path_csv_with_hyp)
from qhgeo.errors import ConstraintError, DomainError


def test_density_normalizations():
    assert hyp_density((0, 0)) == 2.0
    assert hyp_density((0, 0), MINUS_FOUR) == 1.0
    # 1/(1-r) <= 2/(1-r^2) <= 2/(1-r) pointwise
    for r in (0.0, 0.3, 0.7, 0.95):
        dens = hyp_density((r, 0))
        assert 1.0 / (1.0 - r) <= dens <= 2.0 / (1.0 - r) + 1e-15


def test_distance_closed_forms():
    assert np.isclose(hyp_distance_disk((0, 0), (0.5, 0)), np.log(3), atol=1e-14)
    assert np.isclose(hyp_distance_disk((0, 0), (0.5, 0), MINUS_FOUR),
                      np.log(3) / 2, atol=1e-14)
    assert np.isclose(hyp_distance_disk((0, 0), (0.9, 0)), np.log(19), atol=1e-12)
    assert hyp_distance_disk((0.3, -0.2), (0.3, -0.2)) == 0.0


def test_distance_rejects_outside():
    with pytest.raises(DomainError):
        hyp_distance_disk((0, 0), (1.0, 0.0))


def test_mobius_invariance():
    rng = np.random.default_rng(4)
    z1, z2 = (0.37, -0.21), (-0.55, 0.4)
    d0 = hyp_distance_disk(z1, z2)
    for _ in range(20):
        a = rng.uniform(-0.6, 0.6, 2)
        if np.hypot(*a) >= 0.9:
            continue
        t = disk_automorphism(tuple(a), rng.uniform(0, 2 * np.pi))
        assert abs(hyp_distance_disk(t(z1), t(z2)) - d0) < 1e-12


def test_automorphism_identity_and_range():
    ident = disk_automorphism((0, 0), 0.0)
    assert ident((0.3, 0.4)) == (0.3, 0.4)
    t = disk_automorphism((0.5, 0.1), 1.2)
    w = t((0.9, 0.0))
    assert np.hypot(*w) < 1.0


def test_geodesic_diameter_is_straight():
    g = hyp_geodesic_disk((-0.7, 0), (0.7, 0))
    assert np.abs(g.points[:, 1]).max() < 1e-14
    assert np.allclose(g.deltas, 1.0 - np.abs(g.points[:, 0]), atol=1e-14)


def test_geodesic_bows_toward_center():
    g = hyp_geodesic_disk((0.9, 0), (0, 0.9))
    r = np.hypot(g.points[:, 0], g.points[:, 1])
    # circular arc dips well inside the chord (chord midpoint is at 0.636)
    assert r.min() < 0.45
    assert np.allclose(g.points[0], [0.9, 0.0], atol=1e-15)
    assert np.allclose(g.points[-1], [0.0, 0.9], atol=1e-15)


def test_geodesic_swap_symmetry():
    a = hyp_geodesic_disk((0.9, 0), (0, 0.9), 256)
    b = hyp_geodesic_disk((0, 0.9), (0.9, 0), 8192)
    d, _ = cKDTree(b.points).query(a.points)
    assert d.max() < 2e-3


def test_geodesic_validation():
    with pytest.raises(ConstraintError):
        hyp_geodesic_disk((0, 0), (0.5, 0), 1)
    with pytest.raises(DomainError):
        hyp_geodesic_disk((0, 0), (1.0, 0))
    assert len(hyp_geodesic_disk((0.9, 0), (0, 0.9), 2).points) == 2


def test_polyline_length_convergence():
    want = hyp_distance_disk((0.9, 0), (0, 0.9))
    errs = {}
    for n in (64, 128, 256):
        g = hyp_geodesic_disk((0.9, 0), (0, 0.9), n)
        got = float(hyp_polyline_length(g.points)[-1])
        errs[n] = abs(got - want) / want
    assert errs[256] < 1e-3
    # midpoint rule: halving the step at most ~quadruples the accuracy
    assert errs[64] <= 4.5 * errs[128] + 1e-15
    assert errs[128] <= 4.5 * errs[256] + 1e-15


def test_polyline_length_minus_four_halves():
    g = hyp_geodesic_disk((0, 0), (0.5, 0), 128)
    full = hyp_polyline_length(g.points)
    half = hyp_polyline_length(g.points, MINUS_FOUR)
    assert np.allclose(half, 0.5 * full, rtol=1e-14)


def test_compare_metrics_disk(disk128):
    rep = compare_metrics_disk(disk128, [((0, 0), (0.5, 0)), ((0, 0), (0.9, 0)),
                                         ((0.3, 0.3), (0.3, 0.3))])
    assert rep.all_hold
    k, h = rep.rows[0][2], rep.rows[0][3]
    assert abs(k - np.log(2)) < 0.02 * np.log(2)
    assert abs(h - np.log(3)) < 1e-12


def test_compare_metrics_preconditions(disk128, square128):
    with pytest.raises(ConstraintError):
        compare_metrics_disk(disk128, [], MINUS_FOUR)
    with pytest.raises(ConstraintError):
        compare_metrics_disk(square128, [])


def test_bh_quasigeodesic_small_set(disk128):
    rep = bh_quasigeodesic_check(disk128, [((-0.5, 0.0), (0.5, 0.0)),
                                           ((0.9, 0), (0, 0.9)),
                                           ((0.2, 0.2), (0.2, 0.2))])
    assert rep.k_hat <= 3.0 and rep.h_hat <= 3.0
    assert len(rep.notes) == 1   # the coincident pair is skipped with a note
    diam = rep.rows[0]
    assert abs(diam[2] / diam[3] - 1) < 0.03
    assert abs(diam[4] / diam[5] - 1) < 0.03


def test_csv_with_hyp_column():
    csv = path_csv_with_hyp(hyp_geodesic_disk((0, 0), (0.5, 0), 16))
    lines = csv.strip().split("\n")
    assert lines[0] == "x,y,delta,cum_qh_length,cum_euc_length,hyp_cum_length"
    assert len(lines) == 17
    last = [float(v) for v in lines[-1].split(",")]
    assert abs(last[5] - np.log(3)) < 1e-3
