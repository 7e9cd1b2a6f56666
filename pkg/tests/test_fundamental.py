import math

import numpy as np
import pytest

import _closed_forms as cf
from sobolev1d import (
    SolverError,
    check_comparison,
    check_envelope_bounds,
    check_gluing,
    check_riccati_residual,
    decay_inset,
    evaluate_phi,
    extremal_function,
    make_constant,
    make_example,
    make_piecewise_constant,
    solve_log_solution,
)
from conftest import random_piecewise_constant

WINDOW = (-25.0, 25.0)


@pytest.fixture(scope="module")
def example_pair():
    pot = make_example(cf.A, cf.B)
    plus = solve_log_solution(pot, "+", *WINDOW)
    minus = solve_log_solution(pot, "-", *WINDOW)
    return pot, plus, minus


def test_window_and_side_validation():
    pot = make_constant(1.0)
    with pytest.raises(ValueError):
        solve_log_solution(pot, "up", -25, 25)
    with pytest.raises(ValueError):
        solve_log_solution(pot, "+", 1.0, 25.0)  # window must contain 0
    with pytest.raises(ValueError):
        solve_log_solution(pot, "+", -25.0, 25.0, tol=1e-3)  # out of range
    with pytest.raises(ValueError):
        solve_log_solution(pot, "+", -5.0, 5.0)  # decay margin too small


def test_constant_solution_is_exact():
    pot = make_constant(4.0)
    plus = solve_log_solution(pot, "+", *WINDOW)
    xs = np.linspace(-24, 24, 97)
    assert np.max(np.abs(plus.ell_at(xs) + 2.0 * xs)) < 1e-12
    assert np.max(np.abs(plus.ell_prime_at(xs) + 2.0)) < 1e-12
    minus = solve_log_solution(pot, "-", *WINDOW)
    assert np.max(np.abs(minus.ell_at(xs) - 2.0 * xs)) < 1e-12
    assert plus.ell_at(0.0) == 0.0
    assert plus.phi_at(0.0) == 1.0


def test_example_matches_closed_forms(example_pair):
    _, plus, minus = example_pair
    xs = np.linspace(-5.0, 5.0, 801)
    rel_p = np.abs(plus.phi_at(xs) / cf.phi_plus_exact(xs) - 1.0)
    rel_m = np.abs(minus.phi_at(xs) / cf.phi_minus_exact(xs) - 1.0)
    assert np.max(rel_p) < 1e-7
    assert np.max(rel_m) < 1e-7
    assert np.max(np.abs(plus.ell_prime_at(xs) - cf.ell_plus_prime_exact(xs))) < 1e-8
    assert np.max(np.abs(minus.ell_prime_at(xs) - cf.ell_minus_prime_exact(xs))) < 1e-8
    assert plus.phi_at(1.0) == pytest.approx(cf.PHI_PLUS_AT_1, rel=1e-9)
    assert minus.phi_at(1.0) == pytest.approx(cf.PHI_MINUS_AT_1, rel=1e-9)


def test_second_derivative_uses_riccati(example_pair):
    _, plus, _ = example_pair
    xs = np.linspace(-4, 4, 101)
    assert np.max(np.abs(plus.ell_second_at(xs) - cf.ell_plus_second_exact(xs))) < 1e-8


def test_riccati_residual_example(example_pair):
    _, plus, minus = example_pair
    for sol in (plus, minus):
        report = check_riccati_residual(sol)
        assert report.passed, report
        assert report.max_residual < report.tolerance


def test_riccati_residual_piecewise(rng):
    pot = random_piecewise_constant(rng)
    w = 25.0 / math.sqrt(pot.lower_bound)
    plus = solve_log_solution(pot, "+", -w, w)
    report = check_riccati_residual(plus)
    assert report.passed, report


def test_tolerance_consistency(example_pair):
    pot, plus, _ = example_pair
    loose = solve_log_solution(pot, "+", *WINDOW, tol=1e-8)
    xs = np.linspace(-24.5, 24.5, 401)
    assert np.max(np.abs(loose.ell_at(xs) - plus.ell_at(xs))) < 1e-6


def test_seeding_robustness(example_pair):
    pot, plus, _ = example_pair
    wide = solve_log_solution(pot, "+", WINDOW[0], WINDOW[1] + 8.0)
    cut = WINDOW[1] - decay_inset(pot)
    xs = np.linspace(WINDOW[0] + 0.5, cut, 501)
    assert np.max(np.abs(wide.ell_at(xs) - plus.ell_at(xs))) < 1e-8


def test_dishonest_bounds_rejected():
    pot = make_constant(1.0)
    lying = type(pot)(
        evaluate=pot.evaluate,
        lower_bound=4.0,
        upper_bound=5.0,
        breakpoints=(),
        tail_limits=(4.0, 5.0),
        continuous=True,
        label="dishonest",
    )
    with pytest.raises(SolverError):
        solve_log_solution(lying, "+", -12.0, 12.0)


def test_extremal_function_shape(example_pair):
    _, plus, minus = example_pair
    u = extremal_function(plus, minus, cf.A1_EXACT)
    assert u.sup_norm == 1.0
    assert u(cf.A1_EXACT) == 1.0
    xs = np.linspace(-20, 20, 401)
    vals = np.asarray(u(xs))
    assert np.all(vals > 0.0)
    assert np.all(vals <= 1.0 + 1e-12)
    # slopes have the right sign on each side of the pin
    assert u.derivative(cf.A1_EXACT - 1.0) > 0.0
    assert u.derivative(cf.A1_EXACT + 1.0) < 0.0
    with pytest.raises(ValueError):
        extremal_function(plus, minus, WINDOW[1])  # too close to the edge


def test_evaluate_phi_alias(example_pair):
    _, plus, _ = example_pair
    xs = np.linspace(-3, 3, 11)
    assert np.array_equal(evaluate_phi(plus, xs), plus.phi_at(xs))


def test_envelope_bounds_example(example_pair):
    _, plus, minus = example_pair
    report = check_envelope_bounds(plus, minus)
    assert report.passed, report.violations


def test_envelope_bounds_random(rng):
    for _ in range(3):
        pot = random_piecewise_constant(rng)
        w = 25.0 / math.sqrt(pot.lower_bound)
        plus = solve_log_solution(pot, "+", -w, w)
        minus = solve_log_solution(pot, "-", -w, w)
        report = check_envelope_bounds(plus, minus)
        assert report.passed, report.violations


def test_comparison_constant_below_example():
    low = make_constant(1.0)
    high = make_example(cf.A, cf.B)
    report = check_comparison(low, high, a=0.5)
    assert report.precondition_ok
    assert report.passed
    assert report.min_log_margin >= -1e-6


def test_comparison_detects_bad_precondition():
    report = check_comparison(make_constant(2.0), make_constant(1.0), a=0.0)
    assert not report.precondition_ok
    assert not report.passed


def test_comparison_equal_potentials_tight():
    report = check_comparison(make_constant(2.0), make_constant(2.0), a=-1.0)
    assert report.passed
    assert abs(report.min_log_margin) < 1e-10


def test_gluing_constant_closed_form():
    pot = make_constant(1.0)
    plus = solve_log_solution(pot, "+", *WINDOW)
    minus = solve_log_solution(pot, "-", *WINDOW)
    u0 = extremal_function(plus, minus, 0.0)
    assert u0(-1.0) == pytest.approx(math.exp(-1.0), abs=1e-12)
    report = check_gluing(plus, minus, -1.0, 1.0)
    assert report.passed, report


def test_gluing_example(example_pair):
    _, plus, minus = example_pair
    report = check_gluing(plus, minus, -0.5, 0.7)
    assert report.passed, report
    with pytest.raises(ValueError):
        check_gluing(plus, minus, 1.0, -1.0)


def test_gluing_fails_inside_the_interval(example_pair):
    """Between the two pins the minimizers genuinely differ."""
    _, plus, minus = example_pair
    u_a = extremal_function(plus, minus, -1.5)
    u_b = extremal_function(plus, minus, 1.5)
    x = 0.0
    lhs = u_a(x)
    rhs = math.exp(u_b.log_value(x) - u_b.log_value(-1.5))
    assert abs(lhs - rhs) > 1e-3


def test_write_csv(tmp_path, example_pair):
    _, plus, _ = example_pair
    path = tmp_path / "plus.csv"
    plus.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,ell,ell_prime,phi"
    row = lines[1 + int(np.searchsorted(plus.grid, 0.0))].split(",")
    assert float(row[1]) == 0.0  # normalized at x = 0
    assert len(lines) == 1 + plus.grid.size
