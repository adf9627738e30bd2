"""Geometry checks, identity suites, and empirical constants.

Straight-segment traces (constant drivers) make most constants exactly 1 or
closed-form; a synthetic three-quarter circle pins the quasi-arc scanner
against an O(n^3) brute force and the known ratio sqrt(2); raster helpers
are checked on hand-built masks.
"""

import numpy as np
import pytest

from cloewner.analysis import (
    VerificationReport,
    _dilate,
    _quasi_arc_scan,
    _rotate_mask_by_i,
    continuity_constant,
    derivative_formula,
    diameter_of_endpoints,
    hull_property_suite,
    hull_trace_consistency,
    injectivity_check,
    quasi_arc_constant,
    raster_mismatch,
    round_trip_check,
    run_verification,
)
from cloewner.backward import TraceSamples, trace_curve, trace_point
from cloewner.drivers import ConstantDriver, LinearDriver, SqrtDriver, transform_driver
from cloewner.errors import DomainError

from conftest import budget_sin_driver, diameter_ensemble


# --- quasi-arc constant -------------------------------------------------------


def test_quasi_arc_segment_is_one(zero_driver, const_driver):
    for d in (zero_driver, const_driver):
        est = quasi_arc_constant(trace_curve(d, 16))
        assert est.constant == pytest.approx(1.0, abs=1e-6)
        history = [c for _, c in est.refinement_history]
        assert all(b >= a - 1e-12 for a, b in zip(history, history[1:]))


def _brute_force_quasi_arc(points):
    best = 0.0
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            chord = abs(points[j] - points[i])
            if chord <= 1e-10:
                continue
            seg = points[i : j + 1]
            diam = np.max(np.abs(seg[:, None] - seg[None, :]))
            best = max(best, diam / chord)
    return best


def test_quasi_arc_three_quarter_circle():
    angles = np.linspace(0.0, 1.5 * np.pi, 33)
    pts = np.exp(1j * angles)
    params = np.linspace(-1.0, 1.0, 33)
    scan, _ = _quasi_arc_scan(params, pts)
    assert scan == pytest.approx(_brute_force_quasi_arc(pts), rel=1e-12)
    # a subarc spanning half a turn has diameter 2 against a chord of
    # sqrt(2) between the quarter-turn endpoints
    assert scan == pytest.approx(np.sqrt(2.0), rel=0.02)


def test_quasi_arc_refinement_stability():
    d = budget_sin_driver()
    lo = quasi_arc_constant(trace_curve(d, 24))
    hi = quasi_arc_constant(trace_curve(d, 48))
    assert abs(hi.constant - lo.constant) / hi.constant <= 0.05


def test_quasi_arc_needs_samples(zero_driver):
    tr = trace_curve(zero_driver, 2)
    with pytest.raises(DomainError):
        quasi_arc_constant(tr)


# --- derivative of the trace ----------------------------------------------------


def test_derivative_driverless(zero_driver):
    for t in (0.25, -0.25):
        deriv = derivative_formula(zero_driver, t)
        assert abs(deriv - 2j) <= 1e-9


def test_derivative_constant_driver(const_driver):
    deriv = derivative_formula(const_driver, 0.25)
    assert abs(deriv - 2j) <= 1e-9


def test_derivative_against_finite_difference():
    d = LinearDriver(0.2)
    t, h = 0.49, 1e-4
    deriv = derivative_formula(d, t)
    hi, _ = trace_point(d, t + h)
    lo, _ = trace_point(d, t - h)
    fd = (hi - lo) / (2.0 * h)
    assert abs(deriv - fd) <= 1e-3 * abs(deriv)


def test_derivative_validation(zero_driver):
    with pytest.raises(DomainError):
        derivative_formula(zero_driver, 0.0)
    with pytest.raises(DomainError):
        derivative_formula(zero_driver, 1.0)
    with pytest.raises(DomainError):
        derivative_formula(budget_sin_driver(), 0.5)  # sampled kind


# --- round trip -----------------------------------------------------------------


def test_round_trip_examples(zero_driver, sqrt_complex_driver, weier_budget_driver):
    assert round_trip_check(zero_driver, 1.0) <= 1e-3
    assert round_trip_check(sqrt_complex_driver, 0.5) <= 1e-3
    assert round_trip_check(weier_budget_driver, 0.7) <= 1e-3


def test_round_trip_validation(zero_driver):
    with pytest.raises(DomainError):
        round_trip_check(zero_driver, 0.0)
    with pytest.raises(DomainError):
        round_trip_check(zero_driver, 1.5)


# --- injectivity ----------------------------------------------------------------


def test_injectivity_driverless_closed_form(zero_driver):
    """On the quadratic grid with n = 24 and separation 0.1 the minimum is
    2*2/24 = 1/6, attained by the same-side pairs (k/24)^2 vs ((k+2)/24)^2
    for every k >= 14 (below that the parameters are closer than 0.1)."""
    rep = injectivity_check(trace_curve(zero_driver, 24), separation=0.1)
    assert rep["passed"]
    assert rep["min_distance"] == pytest.approx(1.0 / 6.0, abs=1e-9)
    p_lo, p_hi = sorted(abs(p) for p in rep["pair"])
    k_lo = 24.0 * np.sqrt(p_lo)
    k_hi = 24.0 * np.sqrt(p_hi)
    assert k_lo == pytest.approx(round(k_lo), abs=1e-9)
    assert k_hi - k_lo == pytest.approx(2.0, abs=1e-9)
    assert round(k_lo) >= 14
    assert np.sign(rep["pair"][0]) == np.sign(rep["pair"][1])


def test_injectivity_budget_driver(weier_budget_driver):
    rep = injectivity_check(trace_curve(weier_budget_driver, 20), separation=0.05)
    assert rep["passed"]
    assert rep["min_distance"] > rep["error_bound"]


def test_injectivity_validation(zero_driver):
    small = trace_curve(zero_driver, 8)
    with pytest.raises(DomainError):
        injectivity_check(small, 0.1)
    big = trace_curve(zero_driver, 16)
    with pytest.raises(DomainError):
        injectivity_check(big, 0.0)
    with pytest.raises(DomainError):
        injectivity_check(big, 3.0)  # no pairs that far apart


# --- raster helpers -------------------------------------------------------------


def test_dilate_unit():
    mask = np.zeros((7, 7), dtype=bool)
    mask[3, 3] = True
    out = _dilate(mask)
    assert out.sum() == 9
    assert out[2:5, 2:5].all()


def test_raster_mismatch_units():
    a = np.zeros((8, 8), dtype=bool)
    b = np.zeros((8, 8), dtype=bool)
    a[3, 3] = True
    b[4, 3] = True
    assert raster_mismatch(a, a) == 0.0
    assert raster_mismatch(a, b) == 0.0  # one-pixel slack
    c = np.zeros((8, 8), dtype=bool)
    c[5, 3] = True
    assert raster_mismatch(a, c) == 1.0  # both pixels unmatched, union of 2


def test_rotate_mask_by_i_index_algebra():
    arr = np.array([[1, 2, 3], [4, 5, 6]])
    np.testing.assert_array_equal(
        _rotate_mask_by_i(arr), np.array([[3, 6], [2, 5], [1, 4]])
    )


# --- hull vs trace --------------------------------------------------------------


def test_hull_matches_trace_within_a_pixel(zero_driver):
    metric = hull_trace_consistency(zero_driver, 1.0, resolution=96, n=64, threads=2)
    assert metric <= 1.0


# --- identity suite and report plumbing -----------------------------------------


def test_hull_property_suite_passes(zero_driver):
    report = hull_property_suite(zero_driver, 0.5, 0.25, resolution=64, threads=2)
    assert isinstance(report, VerificationReport)
    assert report.all_passed
    names = [e["check"] for e in report.entries]
    assert names == sorted(names)
    assert set(names) == {
        "hull-concatenation",
        "hull-duality",
        "hull-scaling",
        "hull-symmetry",
        "hull-translation",
        "trace-concatenation",
    }
    for e in report.entries:
        assert set(e) == {"check", "metric", "pass", "tolerance", "runtime"}
        assert e["pass"] == (e["metric"] <= e["tolerance"])


def test_report_thread_invariance_and_config_echo(const_driver):
    quick = "budget,tip-asymptotics,semigroup"
    one = run_verification(const_driver, suite=quick, threads=1)
    many = run_verification(const_driver, suite=quick, threads=4)
    strip = lambda r: [  # noqa: E731
        {k: v for k, v in e.items() if k != "runtime"} for e in r.entries
    ]
    assert strip(one) == strip(many)
    assert one.config == many.config
    assert "threads" not in one.config
    assert one.driver_fingerprint == many.driver_fingerprint
    assert one.all_passed


def test_report_flags_over_budget_driver(weier_budget_driver):
    heavy = transform_driver(weier_budget_driver, "multiply", alpha=3.0)
    report = run_verification(heavy, suite="budget")
    assert not report.all_passed
    assert report.entries[0]["metric"] > report.entries[0]["tolerance"]


def test_suite_selection(zero_driver):
    report = run_verification(zero_driver, suite="hull-t")
    assert [e["check"] for e in report.entries] == ["hull-translation"]
    with pytest.raises(DomainError):
        run_verification(zero_driver, suite="nope")
    with pytest.raises(DomainError):
        run_verification(zero_driver, suite="budget", t=0.9, s=0.3)


# --- empirical constants ---------------------------------------------------------


def test_continuity_constant_translation_is_one(zero_driver, const_driver):
    ratio = continuity_constant(zero_driver, const_driver)
    assert ratio == pytest.approx(1.0, rel=1e-6)


def test_continuity_constant_sqrt_pair():
    ratio = continuity_constant(SqrtDriver(0.3), SqrtDriver(0.31))
    assert ratio == pytest.approx(0.786810, abs=1e-3)
    finer = continuity_constant(SqrtDriver(0.3), SqrtDriver(0.31), n=64)
    assert abs(finer - ratio) <= 0.1 * ratio


def test_continuity_constant_rejects_equal_drivers(zero_driver):
    with pytest.raises(DomainError):
        continuity_constant(zero_driver, ConstantDriver(0.0))


def test_diameter_of_endpoints_basics(zero_driver, const_driver):
    assert diameter_of_endpoints([zero_driver]) == 0.0
    diam = diameter_of_endpoints([zero_driver, const_driver])
    assert diam == pytest.approx(abs(0.2 + 0.1j), abs=1e-6)
    with pytest.raises(DomainError):
        diameter_of_endpoints([])


def test_diameter_ensemble_scales_linearly():
    """Endpoint spread of a fixed driver family is ~linear in the norm
    budget, and its ratio to the budget sits inside a sane corridor."""
    r_large = diameter_of_endpoints(diameter_ensemble(1.0 / 3.0)) / (1.0 / 3.0)
    r_small = diameter_of_endpoints(diameter_ensemble(0.1)) / 0.1
    assert 0.1 <= r_small <= 5.0
    assert 0.1 <= r_large <= 5.0
    assert abs(r_large / r_small - 1.0) <= 0.1
