"""Domain parsing, membership, boundary distance, anchors."""
import json

import numpy as np
import pytest

from qhgeo import (compile_domain, domain_to_json, make_foot_fingers,
                   parse_domain)
from qhgeo.domains import foot_fingers_layout
from qhgeo.errors import (ConstraintError, DisconnectedDomainError,
                          DomainError, ParseError)


def test_parse_round_trip():
    spec = parse_domain(json.dumps({"type": "disk", "center": [0.5, -1], "radius": 2}))
    obj = domain_to_json(spec)
    assert obj["type"] == "disk"
    assert tuple(obj["center"]) == (0.5, -1.0)
    assert obj["radius"] == 2.0
    assert parse_domain(obj) == spec


def test_parse_accepts_decoded_dict():
    spec = parse_domain({"type": "rect", "min": [0, 0], "max": [2, 1]})
    d = compile_domain(spec)
    assert d.contains((1.0, 0.5))
    assert not d.contains((1.0, 1.5))


@pytest.mark.parametrize("bad, err", [
    ("not json", ParseError),
    ('{"type": "disk", "center": [0, 0]}', ParseError),            # missing radius
    ('{"type": "disk", "center": [0, 0], "radius": -1}', ParseError),
    ('{"type": "nonagon"}', ParseError),
    ('{"type": "rect", "min": [1, 0], "max": [0, 1]}', ConstraintError),
    ('{"type": "polygon", "vertices": [[0, 0], [1, 0]]}', ParseError),
    ('{"type": "slits", "base": {"type": "disk", "center": [0, 0], "radius": 1},'
     ' "segments": []}', ParseError),
    ('{"type": "slits", "base": {"type": "disk", "center": [0, 0], "radius": 1},'
     ' "segments": [[[0, 0], [0, 0]]]}', ConstraintError),
    ('{"type": "comb", "teeth": 0}', ConstraintError),
])
def test_parse_rejects(bad, err):
    with pytest.raises(err):
        parse_domain(bad)


def test_disk_membership_and_delta(disk_domain):
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1.2, 1.2, size=(512, 2))
    r = np.hypot(pts[:, 0], pts[:, 1])
    inside = disk_domain.contains_many(pts)
    assert np.array_equal(inside, r < 1.0)
    d = disk_domain.delta_many(pts[inside])
    assert np.allclose(d, 1.0 - r[inside], atol=1e-12)


def test_rect_delta(square_domain):
    # distance to the nearest of the four sides
    pts = np.array([[0.0, 0.0], [0.4, 0.0], [0.3, -0.45], [-0.49, 0.49]])
    want = np.array([0.5, 0.1, 0.05, 0.01])
    assert np.allclose(square_domain.delta_many(pts), want, atol=1e-12)


def test_boundary_distance_rejects_outside(disk_domain):
    with pytest.raises(DomainError):
        disk_domain.boundary_distance((2.0, 0.0))


def test_disk_anchors(disk_domain):
    assert sorted(disk_domain.anchors) == [
        "center", "rim_east", "rim_north", "rim_south", "rim_west"]
    east = disk_domain.anchor("rim_east")
    assert east.point.as_tuple() == (1.0, 0.0)
    assert east.inward is not None
    assert disk_domain.anchor("center").inward is None


def test_polygon_membership():
    tri = compile_domain({"type": "polygon",
                          "vertices": [[0, 0], [2, 0], [0, 2]]})
    assert tri.contains((0.5, 0.5))
    assert not tri.contains((1.5, 1.5))
    # delta at the incenter-ish point equals distance to the hypotenuse
    d = float(tri.delta_many(np.array([[0.5, 0.5]]))[0])
    assert np.isclose(d, 0.5)


def test_union_and_difference():
    dumbbell = compile_domain({
        "type": "union",
        "parts": [{"type": "disk", "center": [-1, 0], "radius": 0.8},
                  {"type": "disk", "center": [1, 0], "radius": 0.8},
                  {"type": "rect", "min": [-1, -0.1], "max": [1, 0.1]}],
    })
    assert dumbbell.contains((0.0, 0.0))
    assert dumbbell.contains((-1.5, 0.0))
    assert not dumbbell.contains((0.0, 0.5))

    annulus_like = compile_domain({
        "type": "difference",
        "base": {"type": "rect", "min": [-1, -1], "max": [1, 1]},
        "holes": [{"type": "disk", "center": [0, 0], "radius": 0.4}],
    }, check_connectivity=True)
    assert annulus_like.contains((0.7, 0.7))
    assert not annulus_like.contains((0.0, 0.0))
    # delta near the hole rim is the distance to the circle
    d = float(annulus_like.delta_many(np.array([[0.5, 0.0]]))[0])
    assert np.isclose(d, 0.1, atol=1e-12)


def test_difference_hole_outside_base_rejected():
    with pytest.raises(ConstraintError):
        parse_domain({"type": "difference",
                      "base": {"type": "rect", "min": [0, 0], "max": [1, 1]},
                      "holes": [{"type": "disk", "center": [2, 0], "radius": 0.2}]})


def test_slit_delta_and_crossings(slit_domain):
    # near the slit the boundary distance is to the segment, not the rim
    d = float(slit_domain.delta_many(np.array([[0.5, 0.1]]))[0])
    assert np.isclose(d, 0.1, atol=1e-12)
    p0 = np.array([[0.5, 0.05], [0.5, 0.05]])
    p1 = np.array([[0.5, -0.05], [0.6, 0.05]])
    crosses = slit_domain.crossings(p0, p1)
    assert crosses[0] and not crosses[1]
    assert sorted(slit_domain.anchors)[:2] == ["center", "rim_east"]
    assert "slit_mid_top" in slit_domain.anchors
    assert "slit_mid_bottom" in slit_domain.anchors


def test_full_slit_disconnects():
    spec = {"type": "slits",
            "base": {"type": "disk", "center": [0, 0], "radius": 1},
            "segments": [[[-1, 0], [1, 0]]]}
    with pytest.raises(DisconnectedDomainError):
        compile_domain(spec)
    d = compile_domain(spec, check_connectivity=False)
    assert d.contains((0.0, 0.5)) and d.contains((0.0, -0.5))


def test_comb_geometry(comb_domain):
    assert sorted(comb_domain.anchors)[:3] == [
        "comb_left_low", "comb_left_mid", "comb_upper"]
    tips = [n for n in comb_domain.anchors if n.startswith("tooth_tip_")]
    assert len(tips) == 8
    # teeth accumulate toward the left edge; upper chamber stays open
    assert comb_domain.contains((0.75, 0.75))
    assert comb_domain.contains(comb_domain.anchors["comb_upper"].point)


def test_foot_fingers_layout():
    spec = make_foot_fingers(2.25, 1.0, 3, r0=0.125)
    fingers = foot_fingers_layout(spec)
    assert [f.m for f in fingers] == [1, 2, 3]
    rs = np.array([f.r for f in fingers])
    assert np.allclose(rs, [0.125, 0.0625, 0.03125])
    # widths r^alpha shrink much faster than depths r^beta
    for f in fingers:
        assert np.isclose(f.w, f.r ** 2.25, rtol=1e-12)
        assert f.w < f.r
    dom = compile_domain(spec)
    for f in fingers:
        assert dom.contains(dom.anchors[f"toe_center_{f.m}"].point)
    assert dom.contains(dom.anchors["foot_center"].point)


def test_foot_fingers_validation():
    with pytest.raises(ConstraintError):
        make_foot_fingers(1.0, 2.0, 3)      # needs beta < alpha
    with pytest.raises(ConstraintError):
        make_foot_fingers(2.25, 1.0, 3, r0=0.9)
    with pytest.raises(ConstraintError):
        make_foot_fingers(2.25, 1.0, 3, decay=1.5)
