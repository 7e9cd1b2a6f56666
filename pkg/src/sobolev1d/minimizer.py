"""Best constant of the sup-norm Sobolev embedding with a bounded potential.

The embedding constant is governed by

    m(V) = inf { (||u'||_2^2 + int V u^2) / max|u|^2 : u in H^1, u != 0 },

so that max|u| <= m(V)^{-1/2} ||u||_V is sharp.  The infimum splits into a
pointwise stage (solved exactly by the pinned minimizers u_a) followed by a
one-dimensional minimization of the pinned energy F over the pin location:

    m(V) = min( liminf of F at the window tails, min of F over its
                interior candidate minimizers ).

Extremal functions exist exactly when an interior candidate beats the tail
value; constant potentials are degenerate (every pin works, F flat) and a
strict gap in the other direction means the infimum escapes to infinity and
no extremal exists.  ``minimize`` classifies accordingly, with an explicit
"undetermined" verdict when the decision margin is inside the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fcurve import CriticalPoint, CriticalPointScan, FCurve, build_fcurve, find_critical_points
from .fundamental import (
    DEFAULT_TOL,
    ExtremalFunction,
    LogSolution,
    extremal_function,
    solve_log_solution,
)
from .potential import Potential
from .quadrature import composite_gauss_legendre

__all__ = [
    "SolverConfig",
    "MinimizationReport",
    "default_window",
    "minimize",
    "extremal",
    "rayleigh_quotient",
    "classify_attainment",
]

# How far the default window reaches, in decay lengths 1/sqrt(v0).
DEFAULT_WINDOW_FACTOR = 25.0


def default_window(potential: Potential) -> tuple[float, float]:
    """Symmetric window wide enough for every tolerance used here."""
    w = DEFAULT_WINDOW_FACTOR / math.sqrt(potential.lower_bound)
    return (-w, w)


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the minimization pipeline.

    window: (x_min, x_max); None picks +-25/sqrt(v0).
    ode_tol: accuracy requested from the log-space integration.
    grid_spacing / inset: forwarded to the solver and the curve builder.
    root_tol: bracketing tolerance for critical-point polish.
    condition_tol: shared tolerance of the minimality condition flags.
    classification_tol: decision band for attained/empty/undetermined.
    """

    window: tuple[float, float] | None = None
    ode_tol: float = DEFAULT_TOL
    grid_spacing: float | None = None
    inset: float | None = None
    root_tol: float = 1e-12
    condition_tol: float = 1e-6
    classification_tol: float = 1e-9

    def to_dict(self) -> dict:
        return {
            "window": None if self.window is None else [self.window[0], self.window[1]],
            "ode_tol": self.ode_tol,
            "grid_spacing": self.grid_spacing,
            "inset": self.inset,
            "root_tol": self.root_tol,
            "condition_tol": self.condition_tol,
            "classification_tol": self.classification_tol,
        }


def classify_attainment(
    tail_infimum: float,
    best_candidate: float | None,
    flat: bool,
    tol: float,
) -> tuple[str, float | None]:
    """Attainment verdict and decision margin (tail - best candidate).

    flat        -> "flat" (every pin attains; constant potentials)
    no interior candidate, or tail below all candidates -> "empty"
    candidate strictly below the tail value -> "attained"
    |margin| <= tol -> "undetermined"
    """
    if flat:
        return "flat", None
    if best_candidate is None:
        return "empty", None
    margin = tail_infimum - best_candidate
    if margin > tol:
        return "attained", margin
    if margin < -tol:
        return "empty", margin
    return "undetermined", margin


@dataclass
class MinimizationReport:
    """Everything ``minimize`` decided, plus the artifacts it was decided on.

    The JSON-facing fields are mirrored by ``to_json_dict``; phi_plus,
    phi_minus and curve are kept for reuse (extremal functions, Green
    evaluators) and are not serialized.
    """

    m_value: float
    best_constant: float
    attainment: str
    a_star: float | None
    margin: float | None
    tail_infimum: float
    tail_method: str
    critical_points: list[CriticalPoint]
    rejected_candidates: list[CriticalPoint]
    flat: bool
    window: tuple[float, float]
    config: SolverConfig
    potential_label: str
    phi_plus: LogSolution = field(repr=False)
    phi_minus: LogSolution = field(repr=False)
    curve: FCurve = field(repr=False)

    def to_json_dict(self) -> dict:
        def point(p: CriticalPoint) -> dict:
            return {
                "a": p.location,
                "F": p.value,
                "curvature": p.curvature,
                "slope_residual": p.slope_residual,
                "balanced_slope": p.balanced_slope,
                "plus_side_product": p.plus_side_product,
                "minus_side_product": p.minus_side_product,
            }

        return {
            "schema_version": 1,
            "potential": self.potential_label,
            "m": self.m_value,
            "best_constant": self.best_constant,
            "attainment": self.attainment,
            "a_star": self.a_star,
            "critical_points": [point(p) for p in self.critical_points],
            "rejected_candidates": [point(p) for p in self.rejected_candidates],
            "flat": self.flat,
            "tail_estimate": self.tail_infimum,
            "tail_method": self.tail_method,
            "margins": {
                "decision": self.margin,
                "domain": self.phi_plus.domain_margin,
            },
            "window": [self.window[0], self.window[1]],
            "solver_config": self.config.to_dict(),
        }


def _tail_infimum(potential: Potential, curve: FCurve) -> tuple[float, str]:
    """Energy level of pins escaping to +-inf.

    With declared tail limits the exact value 2 sqrt(min limit) is used;
    otherwise the curve is sampled at its window edges, which is a flagged
    heuristic (fine when the window is wide enough for F to have settled).
    """
    if potential.tail_limits is not None:
        v = min(potential.tail_limits)
        return 2.0 * math.sqrt(v), "declared-tail-limits"
    return float(min(curve.values[0], curve.values[-1])), "edge-sampled"


def minimize(potential: Potential, config: SolverConfig | None = None) -> MinimizationReport:
    """Run the full two-stage minimization for a bounded potential."""
    if config is None:
        config = SolverConfig()
    window = config.window if config.window is not None else default_window(potential)
    x_min, x_max = window
    phi_plus = solve_log_solution(
        potential, "+", x_min, x_max, config.ode_tol, grid_spacing=config.grid_spacing
    )
    phi_minus = solve_log_solution(
        potential, "-", x_min, x_max, config.ode_tol, grid_spacing=config.grid_spacing
    )
    curve = build_fcurve(phi_plus, phi_minus, potential, inset=config.inset)
    scan = find_critical_points(
        curve,
        potential,
        root_tol=config.root_tol,
        condition_tol=config.condition_tol,
    )
    tail, tail_method = _tail_infimum(potential, curve)

    best: CriticalPoint | None = min(scan.points, key=lambda p: p.value, default=None)
    attainment, margin = classify_attainment(
        tail, None if best is None else best.value, scan.flat, config.classification_tol
    )
    candidates = [tail] + [p.value for p in scan.points]
    m_value = min(candidates)
    if attainment == "attained":
        a_star: float | None = best.location
    elif attainment == "flat":
        a_star = 0.0
    else:
        a_star = None
    return MinimizationReport(
        m_value=m_value,
        best_constant=m_value ** -0.5,
        attainment=attainment,
        a_star=a_star,
        margin=margin,
        tail_infimum=tail,
        tail_method=tail_method,
        critical_points=scan.points,
        rejected_candidates=scan.rejected,
        flat=scan.flat,
        window=(float(x_min), float(x_max)),
        config=config,
        potential_label=potential.label,
        phi_plus=phi_plus,
        phi_minus=phi_minus,
        curve=curve,
    )


def extremal(
    report: MinimizationReport,
    phi_plus: LogSolution | None = None,
    phi_minus: LogSolution | None = None,
) -> ExtremalFunction | None:
    """The normalized extremal function u_{a*}, or None when none exists.

    Flat curves return the representative centered at 0; any translate is
    equally extremal there.
    """
    if report.a_star is None:
        return None
    plus = phi_plus if phi_plus is not None else report.phi_plus
    minus = phi_minus if phi_minus is not None else report.phi_minus
    return extremal_function(plus, minus, report.a_star, inset=report.config.inset)


def rayleigh_quotient(
    u: ExtremalFunction | Callable[[np.ndarray], np.ndarray],
    potential: Potential,
    window: tuple[float, float] | None = None,
    *,
    u_prime: Callable[[np.ndarray], np.ndarray] | None = None,
    kinks: Sequence[float] = (),
    order: int = 12,
) -> float:
    """The quotient (||u'||_2^2 + int V u^2) / max|u|^2 over the window.

    Composite Gauss-Legendre quadrature, with panels split at the integrand
    kinks (an ExtremalFunction contributes its center automatically, and the
    potential its breakpoints).  An ExtremalFunction brings its analytic
    derivative and exact sup-norm 1; for a bare callable the derivative is
    taken by a five-point stencil unless supplied, and the sup-norm is the
    sampled maximum.  Always >= m(V) up to quadrature error.
    """
    splits = list(kinks)
    sup: float | None = None
    if isinstance(u, ExtremalFunction):
        if window is None:
            window = u.window
        if u_prime is None:
            u_prime = u.derivative
        splits.append(u.center)
        sup = 1.0
    if window is None:
        raise ValueError("window is required for a bare callable")
    if u_prime is None:
        h = 1e-4 / math.sqrt(potential.upper_bound)

        def u_prime(x, _u=u, _h=h):
            x = np.asarray(x, dtype=float)
            return (
                np.asarray(_u(x - 2 * _h))
                - 8.0 * np.asarray(_u(x - _h))
                + 8.0 * np.asarray(_u(x + _h))
                - np.asarray(_u(x + 2 * _h))
            ) / (12.0 * _h)

    splits.extend(potential.breakpoints)
    panel = 0.4 / math.sqrt(potential.upper_bound)

    def integrand(x):
        du = np.asarray(u_prime(x), dtype=float)
        uu = np.asarray(u(x), dtype=float)
        return du * du + np.asarray(potential.evaluate(x)) * uu * uu

    total = composite_gauss_legendre(
        integrand, window[0], window[1], splits=splits, panel_length=panel, order=order
    )
    if sup is None:
        xs = np.linspace(window[0], window[1], 4001)
        xs = np.union1d(xs, [s for s in splits if window[0] <= s <= window[1]])
        sup = float(np.max(np.abs(np.asarray(u(xs)))))
        if sup == 0.0:
            raise ValueError("u vanishes on the sampled window")
    return total / (sup * sup)
