"""Shipped suite registry and parameter file."""
import pytest

from qhgeo import SUITE_NAMES, load_suite_params, run_suite
from qhgeo.errors import ConstraintError


def test_suite_params_shape():
    params = load_suite_params()
    assert set(params) == set(SUITE_NAMES)
    ex8 = params["example8"]
    assert ex8["domain"]["type"] == "foot_fingers"
    assert ex8["h"] > 0 and ex8["layers"] >= 1
    assert params["comb"]["domain"]["teeth"] == 8
    for name in SUITE_NAMES:
        assert "seed" in params[name]


def test_unknown_suite_rejected():
    with pytest.raises(ConstraintError):
        run_suite("nosuite")
