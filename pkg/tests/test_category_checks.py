import numpy as np
import pytest

from numpy.testing import assert_allclose

from kzdk.kzdk_utils.category_checks import (
    AXIOM_GROUPS,
    beta,
    beta_braid_residual,
    braiding_equivariance_residual,
    equivariance_residual,
    hexagon_residual,
    pentagon_residual,
    run_axioms,
    triangle_residual,
)
from kzdk.kzdk_utils.exceptions import VerificationException


KAPPA = 1.0
TOL = 1e-7
FOUR = ("T:0.3,0", "T:0.2,0", "T:0.15,0", "T:0.1,0")


@pytest.mark.parametrize(
    "specs",
    [
        ("T:0.3,0", "T:0.2,0", "T:0.15,0"),
        ("T:0.3,0", "P:0", "T:-0.2,1"),
        ("Pi*T:0.25,0", "T:0.2,0.5", "A:1"),
    ],
)
def test_hexagons(specs):
    for sign in (1, -1):
        report = hexagon_residual(*specs, KAPPA, sign, tol=TOL)
        assert report.passed, report
        assert report.axiom == ("hexagonPlus" if sign == 1 else "hexagonMinus")


def test_hexagon_rejects_bad_sign():
    with pytest.raises(VerificationException):
        hexagon_residual(*FOUR[:3], KAPPA, 2)


def test_pentagon():
    report = pentagon_residual(*FOUR, KAPPA, tol=TOL)
    assert report.passed, report
    assert report.operands == FOUR


def test_pentagon_with_projective_factor():
    report = pentagon_residual("T:0.3,0", "P:0", "T:0.2,0", "T:0.15,0", KAPPA, tol=TOL)
    assert report.passed, report


def test_beta_inverse_and_braid_relation():
    report = beta_braid_residual(*FOUR, KAPPA, tol=TOL)
    assert report.passed, report
    assert set(report.details) == {"inverse_plus", "inverse_minus", "braid_plus", "braid_minus"}


def test_beta_maps_between_the_right_spaces():
    b = beta("T:0.3,0", "P:0", "A:1", KAPPA)
    assert b.shape == (8, 8)
    assert np.linalg.cond(b) < 1e6


def test_triangle():
    assert triangle_residual("T:0.3,0", "P:0", KAPPA, tol=TOL).passed


def test_equivariance_detects_non_intertwiners():
    rng = np.random.default_rng(0)
    bogus = rng.normal(size=(8, 8))
    report = equivariance_residual(bogus, ["T:0.3,0", "T:0.2,0", "T:0.15,0"])
    assert not report.passed
    assert report.residual > 1e-3
    with pytest.raises(VerificationException):
        equivariance_residual(np.eye(3), ["T:0.3,0", "T:0.2,0"])


def test_braiding_equivariance():
    assert braiding_equivariance_residual("T:0.3,0", "P:1", KAPPA).passed
    assert braiding_equivariance_residual("Pi*P:0", "P:0", KAPPA).passed


def test_tolerance_must_be_positive():
    with pytest.raises(VerificationException):
        triangle_residual("T:0.3,0", "T:0.2,0", KAPPA, tol=0)


def test_run_axioms_all_on_three_modules_skips_four_point_groups():
    reports = run_axioms(FOUR[:3], KAPPA, tol=TOL)
    axioms = [r.axiom for r in reports]
    assert "pentagon" not in axioms and "betaBraid" not in axioms
    assert {"hexagonPlus", "hexagonMinus", "equivariance", "unitality"} <= set(axioms)
    assert all(r.passed for r in reports)


def test_run_axioms_validation():
    with pytest.raises(VerificationException):
        run_axioms(FOUR, KAPPA, ("hexagons",))
    with pytest.raises(VerificationException):
        run_axioms(FOUR[:3], KAPPA, ("pentagon",))
    with pytest.raises(VerificationException):
        run_axioms(FOUR[:2], KAPPA, ("hexagon",))
    assert set(AXIOM_GROUPS) == {"pentagon", "hexagon", "beta", "equivariance", "triangle"}


def test_report_record():
    record = triangle_residual("T:0.3,0", "T:0.2,0", KAPPA, tol=TOL).to_record()
    assert record["axiom"] == "unitality"
    assert record["operands"] == ["T:0.3,0", "A:0", "T:0.2,0"]
    assert record["passed"] is True
    assert_allclose(record["tolerance"], TOL)
