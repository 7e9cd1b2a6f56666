"""Decaying solutions of -u'' + V u = 0, integrated in log space.

For a bounded potential 0 < v0 <= V <= v1 the equation -u'' + V u = 0 has,
up to positive scaling, exactly one positive solution phi_plus decaying at
+inf and one solution phi_minus decaying at -inf.  Their values sweep many
orders of magnitude across a useful window, so everything here works with
l = log phi and its derivative r = l', which solves the Riccati equation

    r' = V - r^2.

The decaying branch r ~ -sqrt(V) (side "+") is the attracting fixed branch
of the backward flow, and r ~ +sqrt(V) (side "-") attracts the forward
flow, so integrating side "+" backward from x_max with seed -sqrt(V(x_max))
and side "-" forward from x_min with seed +sqrt(V(x_min)) converges onto
the decaying solutions at rate exp(-2 sqrt(v0) * distance).  l is carried
along as a second component of the same system and normalized so that
l(0) = 0, i.e. phi(0) = 1.

The log-derivatives stay inside fixed bands determined by the bounds:

    -v1/sqrt(v0) <= r_plus <= -v0/sqrt(v1),
     v0/sqrt(v1) <= r_minus <= v1/sqrt(v0),

and these bands are forward-invariant for the respective flows, so the
integration cannot blow up while the declared bounds are honest.

The pointwise minimizer of the pinned problem (u(a) = max|u| = 1) is
assembled from the two sides without quadrature:

    u_a(x) = phi_minus(x)/phi_minus(a)  (x < a),
             phi_plus(x)/phi_plus(a)    (x >= a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .potential import Potential

__all__ = [
    "SolverError",
    "LogSolution",
    "ExtremalFunction",
    "solve_log_solution",
    "evaluate_phi",
    "extremal_function",
    "check_riccati_residual",
    "check_envelope_bounds",
    "check_comparison",
    "check_gluing",
    "decay_inset",
    "DEFAULT_TOL",
    "MIN_DOMAIN_MARGIN",
]

DEFAULT_TOL = 1e-10
# Tolerances the solver accepts; outside this range the dense output cannot
# honestly deliver what is asked.
TOL_RANGE = (1e-14, 1e-6)
# Required decay margin sqrt(v0) * min(|x_min|, x_max): truncating the line to
# the window perturbs the solution by ~exp(-2 * margin).
MIN_DOMAIN_MARGIN = 20.0


class SolverError(RuntimeError):
    """Numerical failure inside an integrator or verifier."""


def decay_inset(potential: Potential) -> float:
    """Distance from the window edges within which seeding error may linger.

    Seeding with the asymptotic Riccati root leaves a transient that decays
    like exp(-2 sqrt(v0) d) with the distance d from the seeded edge; at
    d = 12/sqrt(v0) it is ~3.8e-11, below every tolerance used here.
    """
    return 12.0 / math.sqrt(potential.lower_bound)


def _match(x, values: np.ndarray):
    """Return values shaped like the original input (float for scalars)."""
    if np.ndim(x) == 0:
        return float(values.reshape(-1)[0])
    return values


@dataclass
class LogSolution:
    """One decaying solution, stored as log phi and its derivative.

    Attributes:
        side: "+" (decays at +inf) or "-" (decays at -inf).
        grid: strictly increasing sample positions spanning the window,
            always containing 0 and the potential's interior breakpoints.
        ell: log phi at the grid, normalized so ell vanishes at 0.
        ell_prime: the log-derivative r at the grid.
        window: (x_min, x_max).
        domain_margin: sqrt(v0) * min(|x_min|, x_max).
        tol: the accuracy requested at construction.
        potential: the potential integrated against.
    """

    side: str
    grid: np.ndarray
    ell: np.ndarray
    ell_prime: np.ndarray
    window: tuple[float, float]
    domain_margin: float
    tol: float
    potential: Potential
    _interps: list = field(repr=False)
    _bounds: np.ndarray = field(repr=False)
    _shift: float = field(repr=False)

    def _check_window(self, x: np.ndarray) -> None:
        lo, hi = self.window
        # Tiny slack for roundoff at the endpoints themselves.
        eps = 1e-12 * (1.0 + abs(lo) + abs(hi))
        if np.any(x < lo - eps) or np.any(x > hi + eps):
            raise ValueError(
                f"position outside solved window [{lo:g}, {hi:g}]"
            )

    def _dense(self, x) -> tuple[np.ndarray, np.ndarray]:
        xs = np.asarray(x, dtype=float)
        self._check_window(xs)
        flat = np.clip(xs.ravel(), self.window[0], self.window[1])
        r = np.empty_like(flat)
        l = np.empty_like(flat)
        idx = np.searchsorted(self._bounds, flat, side="right") - 1
        idx = np.clip(idx, 0, len(self._interps) - 1)
        for k, interp in enumerate(self._interps):
            mask = idx == k
            if mask.any():
                vals = interp(flat[mask])
                r[mask] = vals[0]
                l[mask] = vals[1]
        return r.reshape(xs.shape), l.reshape(xs.shape)

    def ell_at(self, x):
        """log phi(x), normalized to vanish at 0."""
        _, l = self._dense(x)
        return _match(x, np.asarray(l - self._shift))

    def ell_prime_at(self, x):
        """Log-derivative r(x) = phi'(x)/phi(x)."""
        r, _ = self._dense(x)
        return _match(x, np.asarray(r))

    def ell_second_at(self, x):
        """l''(x) = V(x) - r(x)^2, algebraically from the Riccati equation."""
        r, _ = self._dense(x)
        v = np.asarray(self.potential.evaluate(np.asarray(x, dtype=float)))
        return _match(x, np.asarray(v - r * r))

    def phi_at(self, x):
        """phi(x) = exp(ell(x)); phi(0) = 1."""
        return np.exp(self.ell_at(x)) if np.ndim(x) else math.exp(self.ell_at(x))

    def write_csv(self, path: str | Path) -> None:
        """Dump the grid samples as CSV with header x,ell,ell_prime,phi."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("x,ell,ell_prime,phi\n")
            for x, l, r in zip(self.grid, self.ell, self.ell_prime):
                fh.write(f"{x:.15e},{l:.15e},{r:.15e},{math.exp(l):.15e}\n")


def _segment_edges(potential: Potential, x_min: float, x_max: float) -> list[float]:
    inner = [b for b in potential.breakpoints if x_min < b < x_max]
    return [x_min, *inner, x_max]


def solve_log_solution(
    potential: Potential,
    side: str,
    x_min: float,
    x_max: float,
    tol: float = DEFAULT_TOL,
    *,
    grid_spacing: float | None = None,
) -> LogSolution:
    """Integrate the decaying branch of r' = V - r^2 across the window.

    Side "+" integrates backward from x_max seeded with -sqrt(V(x_max));
    side "-" forward from x_min seeded with +sqrt(V(x_min)).  The mesh is
    split hard at the potential's breakpoints so the integrator never steps
    across a jump.  l' = r is integrated concurrently and shifted so that
    l(0) = 0.

    Raises ValueError for a bad window (must satisfy x_min < 0 < x_max with
    decay margin sqrt(v0)*min(|x_min|, x_max) >= 20) or tolerance outside
    [1e-14, 1e-6], and SolverError if the integrator fails or the
    log-derivative leaves its invariant band (declared bounds not honest).
    """
    if side not in ("+", "-"):
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    if not (x_min < 0.0 < x_max):
        raise ValueError(f"window must contain 0, got [{x_min:g}, {x_max:g}]")
    if not (TOL_RANGE[0] <= tol <= TOL_RANGE[1]):
        raise ValueError(f"tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")
    v0, v1 = potential.lower_bound, potential.upper_bound
    margin = math.sqrt(v0) * min(abs(x_min), x_max)
    if margin < MIN_DOMAIN_MARGIN:
        raise ValueError(
            f"decay margin sqrt(v0)*min(|x_min|, x_max) = {margin:.3f} < "
            f"{MIN_DOMAIN_MARGIN:g}; widen the window"
        )

    # The requested tol is met with room by running the integrator tighter;
    # this also keeps the dense-output derivative (used by the residual
    # check) well below 10*tol for the default tolerance.
    internal_tol = min(3e-10, max(1e-13, tol / 1000.0))
    max_step = 0.2 / math.sqrt(v1)
    edges = _segment_edges(potential, x_min, x_max)
    nudge = 1e-12 * (1.0 + abs(x_min) + abs(x_max))

    pieces = list(zip(edges[:-1], edges[1:]))
    if side == "+":
        pieces = pieces[::-1]
        start = x_max
    else:
        start = x_min
    seed_v = float(potential.evaluate(start - nudge if side == "+" else start + nudge))
    state = [-math.sqrt(seed_v) if side == "+" else math.sqrt(seed_v), 0.0]

    breaks = set(potential.breakpoints)
    interps: list = []
    evaluate = potential.evaluate
    for lo, hi in pieces:
        lo_c = lo + nudge if lo in breaks else -math.inf
        hi_c = hi - nudge if hi in breaks else math.inf

        def rhs(x, y, _lo=lo_c, _hi=hi_c):
            if x < _lo:
                x = _lo
            elif x > _hi:
                x = _hi
            r = y[0]
            return (float(evaluate(x)) - r * r, r)

        span = (hi, lo) if side == "+" else (lo, hi)
        sol = solve_ivp(
            rhs,
            span,
            state,
            method="DOP853",
            rtol=internal_tol,
            atol=internal_tol,
            dense_output=True,
            max_step=max_step,
        )
        if not sol.success:
            raise SolverError(
                f"integration failed on [{lo:g}, {hi:g}] (side {side}): {sol.message}"
            )
        state = [float(sol.y[0, -1]), float(sol.y[1, -1])]
        interps.append((lo, hi, sol.sol))
    if side == "+":
        interps = interps[::-1]

    bounds = np.array([p[0] for p in interps] + [interps[-1][1]])
    solution = LogSolution(
        side=side,
        grid=np.empty(0),
        ell=np.empty(0),
        ell_prime=np.empty(0),
        window=(float(x_min), float(x_max)),
        domain_margin=margin,
        tol=float(tol),
        potential=potential,
        _interps=[p[2] for p in interps],
        _bounds=bounds,
        _shift=0.0,
    )
    # Normalize phi(0) = 1.
    _, l0 = solution._dense(0.0)
    solution._shift = float(l0)

    if grid_spacing is None:
        grid_spacing = 0.025 / math.sqrt(v0)
    n = max(2, int(math.ceil((x_max - x_min) / grid_spacing)))
    grid = np.linspace(x_min, x_max, n + 1)
    grid = np.union1d(grid, [0.0, *edges])
    keep = np.concatenate(([True], np.diff(grid) > 1e-12 * (x_max - x_min)))
    grid = grid[keep]
    r, l = solution._dense(grid)
    solution.grid = grid
    solution.ell = l - solution._shift
    solution.ell_prime = r
    solution.ell[grid == 0.0] = 0.0

    band_lo, band_hi = -v1 / math.sqrt(v0), -v0 / math.sqrt(v1)
    if side == "-":
        band_lo, band_hi = -band_hi, -band_lo
    slack = 1e-6 * max(1.0, v1 / math.sqrt(v0))
    if np.any(r < band_lo - slack) or np.any(r > band_hi + slack):
        raise SolverError(
            f"log-derivative left the invariant band [{band_lo:.4g}, {band_hi:.4g}]; "
            "the declared potential bounds are not honest"
        )
    return solution


def evaluate_phi(solution: LogSolution, x):
    """phi(x) for a solved side; raises ValueError outside the window."""
    return solution.phi_at(x)


@dataclass
class ExtremalFunction:
    """The pinned minimizer u_a: u(a) = max|u| = 1, energy F(a).

    u is assembled from the two decaying solutions, so its sup-norm is
    exactly 1, attained only at the center.  The derivative has a kink at
    the center; ``derivative`` returns the right-hand value there.
    """

    center: float
    phi_plus: LogSolution
    phi_minus: LogSolution

    @property
    def window(self) -> tuple[float, float]:
        return self.phi_plus.window

    @property
    def sup_norm(self) -> float:
        return 1.0

    def log_value(self, x):
        xs = np.asarray(x, dtype=float)
        lp = np.asarray(self.phi_plus.ell_at(xs))
        lm = np.asarray(self.phi_minus.ell_at(xs))
        la_p = self.phi_plus.ell_at(self.center)
        la_m = self.phi_minus.ell_at(self.center)
        out = np.where(xs < self.center, lm - la_m, lp - la_p)
        return _match(x, out)

    def __call__(self, x):
        out = np.exp(np.asarray(self.log_value(x)))
        return _match(x, out)

    def derivative(self, x):
        xs = np.asarray(x, dtype=float)
        u = np.asarray(self(xs))
        rp = np.asarray(self.phi_plus.ell_prime_at(xs))
        rm = np.asarray(self.phi_minus.ell_prime_at(xs))
        out = u * np.where(xs < self.center, rm, rp)
        return _match(x, out)


def extremal_function(
    phi_plus: LogSolution,
    phi_minus: LogSolution,
    a: float,
    *,
    inset: float | None = None,
) -> ExtremalFunction:
    """Assemble u_a from the two sides; a must sit well inside the window."""
    if phi_plus.side != "+" or phi_minus.side != "-":
        raise ValueError("need a '+' solution and a '-' solution, in that order")
    if phi_plus.window != phi_minus.window:
        raise ValueError("the two sides were solved on different windows")
    lo, hi = phi_plus.window
    if inset is None:
        inset = decay_inset(phi_plus.potential)
    if not (lo + inset <= a <= hi - inset):
        raise ValueError(
            f"center {a:g} too close to the window edges; keep it inside "
            f"[{lo + inset:g}, {hi - inset:g}]"
        )
    return ExtremalFunction(center=float(a), phi_plus=phi_plus, phi_minus=phi_minus)


@dataclass
class ResidualReport:
    """Worst deviation of the dense output from the Riccati equation."""

    max_residual: float
    tolerance: float
    passed: bool


def check_riccati_residual(
    solution: LogSolution,
    n_points: int = 201,
    tolerance: float | None = None,
) -> ResidualReport:
    """Check |r' + r^2 - V| at interior points off the integration mesh.

    r' is taken from the dense output by a five-point stencil whose own
    truncation error is negligible, so the residual measures interpolation
    quality.  The default tolerance is max(10*tol, 2e-9) scaled by
    max(1, v1): the dense-output derivative has a measured floor near 1e-9
    regardless of how small a tolerance was requested.
    """
    pot = solution.potential
    if tolerance is None:
        tolerance = max(10.0 * solution.tol, 2e-9) * max(1.0, pot.upper_bound)
    lo, hi = solution.window
    h = 1e-3 / max(1.0, math.sqrt(pot.upper_bound))
    xs = np.linspace(lo + 5 * h, hi - 5 * h, n_points)
    for b in pot.breakpoints:
        xs = xs[np.abs(xs - b) > 3 * h]
    r = np.asarray(solution.ell_prime_at(xs))
    rp = (
        -np.asarray(solution.ell_prime_at(xs + 2 * h))
        + 8.0 * np.asarray(solution.ell_prime_at(xs + h))
        - 8.0 * np.asarray(solution.ell_prime_at(xs - h))
        + np.asarray(solution.ell_prime_at(xs - 2 * h))
    ) / (12.0 * h)
    res = np.abs(rp + r * r - np.asarray(pot.evaluate(xs)))
    worst = float(res.max()) if res.size else 0.0
    return ResidualReport(worst, float(tolerance), worst <= tolerance)


@dataclass
class EnvelopeReport:
    """Two-sided exponential envelope checks, in log space.

    ``violations`` maps check names to the worst (positive) overshoot of the
    corresponding inequality; zero means the bound held everywhere sampled.
    """

    violations: dict[str, float]
    slack: float
    passed: bool


def check_envelope_bounds(
    phi_plus: LogSolution,
    phi_minus: LogSolution,
    a_values: Sequence[float] | None = None,
    slack: float = 1e-8,
) -> EnvelopeReport:
    """Verify the exponential envelopes implied by the bounds v0 <= V <= v1.

    Checked on the stored grids, all in log space with the given slack:

    * sqrt(v0/v1) e^{-max(s0 x, s1 x)} <= phi_plus(x) <= sqrt(v1/v0) e^{-min(s0 x, s1 x)}
      and the mirror image for phi_minus, where s0 = sqrt(v0), s1 = sqrt(v1);
    * e^{-s1|x-a|} <= u_a(x) <= e^{-s0|x-a|} for each requested center a;
    * (v0/s1) e^{-s1|x-a|} <= sgn(a-x) u_a'(x) <= (v1/s0) e^{-s0|x-a|}.
    """
    pot = phi_plus.potential
    v0, v1 = pot.lower_bound, pot.upper_bound
    s0, s1 = math.sqrt(v0), math.sqrt(v1)
    lo, hi = phi_plus.window
    if a_values is None:
        inset = decay_inset(pot)
        r = min(abs(lo + inset), hi - inset)
        a_values = (-0.5 * r, 0.0, 0.5 * r)

    worst: dict[str, float] = {}

    def record(name: str, violation: np.ndarray | float) -> None:
        v = float(np.max(violation)) if np.size(violation) else 0.0
        worst[name] = max(worst.get(name, 0.0), v)

    x = phi_plus.grid
    lp = phi_plus.ell
    record("phi_plus_upper", lp - (0.5 * math.log(v1 / v0) - np.minimum(s0 * x, s1 * x)))
    record("phi_plus_lower", (0.5 * math.log(v0 / v1) - np.maximum(s0 * x, s1 * x)) - lp)
    xm = phi_minus.grid
    lm = phi_minus.ell
    record("phi_minus_upper", lm - (0.5 * math.log(v1 / v0) + np.maximum(s0 * xm, s1 * xm)))
    record("phi_minus_lower", (0.5 * math.log(v0 / v1) + np.minimum(s0 * xm, s1 * xm)) - lm)

    for a in a_values:
        u = extremal_function(phi_plus, phi_minus, a)
        xs = x[np.abs(x - a) > 1e-9]
        logu = np.asarray(u.log_value(xs))
        d = np.abs(xs - a)
        record("pinned_upper", logu - (-s0 * d))
        record("pinned_lower", (-s1 * d) - logu)
        du = np.asarray(u.derivative(xs))
        signed = np.sign(a - xs) * du
        if np.any(signed <= 0.0):
            record("pinned_slope_sign", 1.0)
        logd = np.log(np.maximum(signed, 1e-300))
        record("pinned_slope_upper", logd - (math.log(v1 / s0) - s0 * d))
        record("pinned_slope_lower", (math.log(v0 / s1) - s1 * d) - logd)

    passed = all(v <= slack for v in worst.values())
    return EnvelopeReport(violations=worst, slack=slack, passed=passed)


@dataclass
class ComparisonReport:
    """Pointwise comparison u_a(V) >= u_a(V_tilde) for V <= V_tilde."""

    precondition_ok: bool
    precondition_violation: float
    min_log_margin: float
    passed: bool


def check_comparison(
    potential_low: Potential,
    potential_high: Potential,
    a: float,
    grid: np.ndarray | None = None,
    *,
    window: tuple[float, float] | None = None,
    tol: float = 1e-6,
) -> ComparisonReport:
    """Check the comparison principle between two ordered potentials.

    If V <= V_tilde pointwise, the pinned minimizers satisfy
    u_a(x; V) >= u_a(x; V_tilde) everywhere.  A failed precondition
    (potential_low above potential_high somewhere on the grid) is reported,
    not silently passed.
    """
    if window is None:
        w = 25.0 / math.sqrt(min(potential_low.lower_bound, potential_high.lower_bound))
        window = (-w, w)
    if grid is None:
        grid = np.linspace(window[0], window[1], 801)
    grid = np.asarray(grid, dtype=float)

    v_lo = np.asarray(potential_low.evaluate(grid))
    v_hi = np.asarray(potential_high.evaluate(grid))
    gap = float(np.max(v_lo - v_hi))
    precondition_ok = gap <= 1e-12 * max(1.0, float(np.max(np.abs(v_hi))))

    us = []
    for pot in (potential_low, potential_high):
        plus = solve_log_solution(pot, "+", window[0], window[1])
        minus = solve_log_solution(pot, "-", window[0], window[1])
        us.append(extremal_function(plus, minus, a))
    margin = np.asarray(us[0].log_value(grid)) - np.asarray(us[1].log_value(grid))
    min_margin = float(np.min(margin))
    return ComparisonReport(
        precondition_ok=precondition_ok,
        precondition_violation=max(gap, 0.0),
        min_log_margin=min_margin,
        passed=precondition_ok and min_margin >= -tol,
    )


@dataclass
class GluingReport:
    """Consistency of pinned minimizers at two centers a <= b."""

    max_residual_left: float
    max_residual_right: float
    passed: bool


def check_gluing(
    phi_plus: LogSolution,
    phi_minus: LogSolution,
    a: float,
    b: float,
    n_samples: int = 201,
    tol: float = 1e-8,
) -> GluingReport:
    """Verify u_a(x) = u_b(x)/u_b(a) for x <= a and u_b(x) = u_a(x)/u_a(b) for x >= b.

    Both minimizers restrict to multiples of the same decaying solution
    outside [a, b]; inside the interval the two disagree, so only the outer
    regions are sampled.  Requires a <= b.
    """
    if a > b:
        raise ValueError(f"need a <= b, got a={a:g}, b={b:g}")
    u_a = extremal_function(phi_plus, phi_minus, a)
    u_b = extremal_function(phi_plus, phi_minus, b)
    lo, hi = phi_plus.window
    inset = decay_inset(phi_plus.potential)

    xs_left = np.linspace(lo + inset, a, n_samples)
    res_left = np.abs(
        np.asarray(u_a(xs_left))
        - np.exp(np.asarray(u_b.log_value(xs_left)) - u_b.log_value(a))
    )
    xs_right = np.linspace(b, hi - inset, n_samples)
    res_right = np.abs(
        np.asarray(u_b(xs_right))
        - np.exp(np.asarray(u_a.log_value(xs_right)) - u_a.log_value(b))
    )
    left = float(res_left.max())
    right = float(res_right.max())
    return GluingReport(left, right, max(left, right) <= tol)
