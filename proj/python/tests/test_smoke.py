import json
import math

import pytest

import finsler


def test_builtins_listed():
    names = finsler.builtins()
    assert "funk2" in names
    assert "euclidean2" in names
    assert json.loads(finsler.builtin_spec("funk2"))["kind"] == "funk"


def test_euclidean_norm_and_tensor():
    F = finsler.instantiate({"schema": 1, "kind": "euclidean", "n": 2})
    assert F.F([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)
    g = F.fundamental_tensor([0.1, 0.2], [1.0, 2.0])
    assert g == [[1.0, 0.0], [0.0, 1.0]]


def test_funk_curvature():
    F = finsler.builtin("funk2")
    assert F.flag_curvature([0.2, 0.1], [1.0, 0.3], [0.2, 1.0]) == pytest.approx(-0.25, abs=1e-5)
    scan = finsler.constancy_scan(F, 20, 0)
    assert scan["mean"] == pytest.approx(-0.25, abs=1e-5)
    assert len(scan["values"]) == 20


def test_sphere_spray_is_geodesic():
    F = finsler.builtin("sphere_polar2")
    G = F.spray([math.pi / 2, 0.0], [1.0, 0.0])
    assert max(abs(v) for v in G) < 1e-12


def test_spec_errors_raise():
    with pytest.raises(finsler.FinslerError, match="beta"):
        finsler.instantiate(
            {"schema": 1, "kind": "randers", "n": 2, "alpha": [[1, 0], [0, 1]], "beta": [1.2, 0]}
        )


def test_acceptance_subset():
    results = finsler.acceptance([2, 7])
    assert [r["id"] for r in results] == [2, 7]
    assert all(r["pass"] for r in results)


def test_cli_exit_codes():
    assert finsler.cli(["metrics", "--out", "/dev/null"]) == 0
    assert finsler.cli(["validate", "--no-such-flag"]) == 2
