import math

import pytest

from ellipsoid_measures.ledger import VERIFIED_TOL, formula_ledger


@pytest.fixture(scope="module")
def ledger():
    return {r["id"]: r for r in formula_ledger(mc_samples=100_000)}


def test_record_shape(ledger):
    for r in ledger.values():
        assert r["status"] in {"verified", "print_error", "ill_defined", "notation"}
        assert r["printed"] and r["implemented"]


@pytest.mark.parametrize("key, factor", [
    ("ball_volume_constant", 3.0),
    ("hypergeometric_ratio_printed", 4 / math.pi),
    ("curvature_ratio_printed", 2 * math.pi),
    ("squared_volume_constant", 1 / math.pi),
    ("complement_minor_form_constant", 4.0),
    ("line_projection_length", 1.5),
    ("hyperplane_projection_area", 1 / 3),
    ("normalized_ratio_peak", math.pi ** -0.25),
])
def test_deviation_factors(ledger, key, factor):
    assert ledger[key]["status"] == "print_error"
    assert ledger[key]["deviation_factor"] == pytest.approx(factor, rel=1e-3 if key == "normalized_ratio_peak" else 1e-9)


@pytest.mark.parametrize("key", ["hypergeometric_ratio_corrected", "hypergeometric_ratio_corrected_ball", "curvature_ratio_direct"])
def test_verified(ledger, key):
    assert ledger[key]["status"] == "verified"
    assert ledger[key]["deviation"] <= VERIFIED_TOL


def test_moment_integral_repair(ledger):
    assert ledger["moment_integral_printed"]["status"] == "ill_defined"
    assert ledger["moment_integral_laplace"]["status"] == "verified"


def test_extremal_ball_radius(ledger):
    # n=6, k=1: m=4, C(6, 4) = 15; radius 15^(-1/8) vs printed 15^(-1/4)
    r = ledger["extremal_ball_radius"]
    assert r["reference_value"] == pytest.approx(15 ** -0.125)
    assert r["printed_value"] == pytest.approx(15 ** -0.25)


def test_remark_limit(ledger):
    assert ledger["bound_ratio_limit_label"]["reference_value"] == pytest.approx(math.sqrt(2 / math.pi), abs=1e-4)
