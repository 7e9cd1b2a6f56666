import math

import numpy as np
import pytest

import _closed_forms as cf
from sobolev1d import (
    build_fcurve,
    check_minimality_equivalence,
    find_critical_points,
    make_constant,
    make_example,
    make_monotone_step,
    solve_log_solution,
)

WINDOW = (-25.0, 25.0)


@pytest.fixture(scope="module")
def example_curve():
    pot = make_example(cf.A, cf.B)
    plus = solve_log_solution(pot, "+", *WINDOW)
    minus = solve_log_solution(pot, "-", *WINDOW)
    return pot, build_fcurve(plus, minus, pot)


def test_values_against_closed_form(example_curve):
    _, curve = example_curve
    assert curve.value_at(0.0) == pytest.approx(cf.F_AT_0, abs=1e-10)
    assert curve.slope_at(0.0) == pytest.approx(cf.DF_AT_0, abs=1e-9)
    assert curve.wronskian == pytest.approx(cf.W_EXACT, abs=1e-10)
    xs = np.linspace(-8, 8, 401)
    assert np.max(np.abs(curve.value_at(xs) - cf.f_exact(xs))) < 1e-9
    assert np.all(curve.values > 0.0)


def test_wronskian_constancy(example_curve):
    _, curve = example_curve
    assert curve.wronskian_drift() < 1e-8


def test_slope_identity_both_products(example_curve):
    """F' = -F^2 (P+ + 1) = -F^2 (P- - 1) where P_s = 2 r_s / F."""
    _, curve = example_curve
    xs = np.linspace(-6, 6, 301)
    f = curve.value_at(xs)
    lhs = curve.slope_at(xs)
    scale = np.maximum(1.0, np.abs(lhs))
    rhs_plus = -f * f * (curve.product_criterion("+", xs) + 1.0)
    rhs_minus = -f * f * (curve.product_criterion("-", xs) - 1.0)
    assert np.max(np.abs(lhs - rhs_plus) / scale) < 1e-8
    assert np.max(np.abs(lhs - rhs_minus) / scale) < 1e-8


def test_curvature_identity_cross_terms(example_curve):
    """F'' = -2F' l-' - 2F l+'' and its mirror image both reproduce F''."""
    pot, curve = example_curve
    xs = np.linspace(-6, 6, 301)
    f = curve.value_at(xs)
    df = curve.slope_at(xs)
    d2f = curve.curvature_at(xs)
    pairs = (
        (curve.phi_minus, curve.phi_plus),
        (curve.phi_plus, curve.phi_minus),
    )
    for rate_sol, curv_sol in pairs:
        rhs = -2.0 * df * rate_sol.ell_prime_at(xs) - 2.0 * f * curv_sol.ell_second_at(xs)
        assert np.max(np.abs(d2f - rhs) / np.maximum(1.0, np.abs(d2f))) < 1e-6


def test_derivatives_match_finite_differences(example_curve):
    _, curve = example_curve
    xs = np.linspace(-4, 4, 33)
    gaps_slope = []
    gaps_curv = []
    for h in (0.02, 0.01, 0.005):
        fd1 = (curve.value_at(xs + h) - curve.value_at(xs - h)) / (2 * h)
        fd2 = (
            curve.value_at(xs + h) - 2 * curve.value_at(xs) + curve.value_at(xs - h)
        ) / h**2
        gaps_slope.append(np.max(np.abs(fd1 - curve.slope_at(xs))))
        gaps_curv.append(np.max(np.abs(fd2 - curve.curvature_at(xs))))
    # second-order convergence: each halving divides the gap by about 4
    for gaps in (gaps_slope, gaps_curv):
        assert gaps[1] < gaps[0] / 3.0
        assert gaps[2] < gaps[1] / 3.0


def test_critical_points_example(example_curve):
    pot, curve = example_curve
    scan = find_critical_points(curve, pot)
    assert not scan.flat
    assert len(scan.points) == 1
    assert len(scan.rejected) == 1
    best = scan.points[0]
    assert best.location == pytest.approx(cf.A1_EXACT, abs=1e-9)
    assert best.value == pytest.approx(cf.M_EXACT, abs=1e-9)
    assert best.curvature > 0.0
    assert best.balanced_slope and best.plus_side_product and best.minus_side_product
    worst = scan.rejected[0]
    assert worst.location == pytest.approx(cf.A2_EXACT, abs=1e-6)
    assert worst.curvature < 0.0
    assert not worst.plus_side_product  # ell+'' > 0 there


def test_flat_curve_constant():
    pot = make_constant(2.25)
    plus = solve_log_solution(pot, "+", *WINDOW)
    minus = solve_log_solution(pot, "-", *WINDOW)
    curve = build_fcurve(plus, minus, pot)
    assert np.max(np.abs(curve.values - 3.0)) < 1e-10
    scan = find_critical_points(curve, pot)
    assert scan.flat
    assert len(scan.points) == 1  # representative point only
    assert scan.points[0].value == pytest.approx(3.0, abs=1e-10)


def test_monotone_step_has_no_roots():
    pot = make_monotone_step(1.0, 4.0)
    plus = solve_log_solution(pot, "+", *WINDOW)
    minus = solve_log_solution(pot, "-", *WINDOW)
    curve = build_fcurve(plus, minus, pot)
    scan = find_critical_points(curve, pot)
    assert not scan.flat
    assert scan.points == [] and scan.rejected == []
    assert np.all(np.diff(curve.values) > 0.0)


def test_product_criterion_closed_form(example_curve):
    _, curve = example_curve
    xs = np.linspace(-5, 5, 201)
    plus = curve.product_criterion("+", xs)
    minus = curve.product_criterion("-", xs)
    assert np.max(np.abs(plus - cf.plus_product_exact(xs))) < 1e-8
    assert np.max(np.abs(minus - cf.minus_product_exact(xs))) < 1e-8
    with pytest.raises(ValueError):
        curve.product_criterion("x", 0.0)


def test_equivalence_example(example_curve):
    pot, curve = example_curve
    samples = np.concatenate(
        [np.linspace(-6, 6, 120), [cf.A1_EXACT, 0.0, cf.A2_EXACT]]
    )
    report = check_minimality_equivalence(curve, samples, potential=pot)
    assert report.all_agree, [r for r in report.rows if not r.agree]
    by_loc = {r.location: r for r in report.rows}
    at_min = by_loc[cf.A1_EXACT]
    assert at_min.local_min and at_min.balanced_slope
    assert at_min.plus_side_product and at_min.minus_side_product
    at_zero = by_loc[0.0]
    assert not any(
        [at_zero.local_min, at_zero.balanced_slope,
         at_zero.plus_side_product, at_zero.minus_side_product]
    )


def test_equivalence_flags_a2_as_non_minimum(example_curve):
    pot, curve = example_curve
    report = check_minimality_equivalence(curve, [cf.A2_EXACT], potential=pot)
    row = report.rows[0]
    assert row.agree
    assert not row.local_min  # curvature is negative there
    assert not row.balanced_slope


def test_out_of_window_queries_raise(example_curve):
    _, curve = example_curve
    with pytest.raises(ValueError):
        curve.value_at(WINDOW[1])  # outside the inset curve window
