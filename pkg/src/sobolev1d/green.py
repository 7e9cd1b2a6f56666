"""Green function of -d^2/dx^2 + V on the line, from the decaying solutions.

With phi_minus, phi_plus the decaying solutions normalized at 0 and
W = phi_minus' (0) - phi_plus'(0) their (constant) Wronskian,

    G(x, y) = phi_minus(min(x, y)) phi_plus(max(x, y)) / W,

symmetric by construction and equal to u_y(x) / F(y).  Everything is
evaluated in log space, so lattice spans that would overflow phi itself are
harmless.  For V == v the closed form is e^{-sqrt(v)|x-y|} / (2 sqrt(v)).

``residual_check`` verifies the defining weak identity

    int( G(., y)' v' + V G(., y) v ) = v(y)

for supplied test functions by composite quadrature split at the diagonal
kink and at the potential's breakpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fundamental import LogSolution
from .potential import Potential
from .quadrature import composite_gauss_legendre

__all__ = [
    "GreenEvaluator",
    "GreenResidualReport",
    "build_green",
    "green_eval",
    "residual_check",
    "gaussian_test",
]


@dataclass
class GreenEvaluator:
    """Vectorized evaluator of G on the solved window."""

    phi_plus: LogSolution = field(repr=False)
    phi_minus: LogSolution = field(repr=False)
    wronskian: float = 0.0

    @property
    def window(self) -> tuple[float, float]:
        return self.phi_plus.window

    @property
    def potential(self) -> Potential:
        return self.phi_plus.potential

    def log_value(self, x, y):
        xs, ys = np.broadcast_arrays(
            np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        )
        lo = np.minimum(xs, ys)
        hi = np.maximum(xs, ys)
        out = (
            np.asarray(self.phi_minus.ell_at(lo))
            + np.asarray(self.phi_plus.ell_at(hi))
            - math.log(self.wronskian)
        )
        if np.ndim(x) == 0 and np.ndim(y) == 0:
            return float(np.asarray(out).reshape(-1)[0])
        return out

    def value(self, x, y):
        out = np.exp(np.asarray(self.log_value(x, y)))
        if np.ndim(x) == 0 and np.ndim(y) == 0:
            return float(out.reshape(-1)[0])
        return out

    __call__ = value

    def diagonal(self, y):
        """G(y, y) = 1/F(y)."""
        return self.value(y, y)

    def section_derivative(self, x, y: float):
        """d/dx G(x, y) away from the diagonal (right-derivative at x = y)."""
        xs = np.asarray(x, dtype=float)
        g = np.asarray(self.value(xs, y))
        rp = np.asarray(self.phi_plus.ell_prime_at(xs))
        rm = np.asarray(self.phi_minus.ell_prime_at(xs))
        out = g * np.where(xs < y, rm, rp)
        if np.ndim(x) == 0:
            return float(np.asarray(out).reshape(-1)[0])
        return out


def build_green(phi_plus: LogSolution, phi_minus: LogSolution) -> GreenEvaluator:
    """Assemble the evaluator; the sides must share the window."""
    if phi_plus.side != "+" or phi_minus.side != "-":
        raise ValueError("need a '+' solution and a '-' solution, in that order")
    if phi_plus.window != phi_minus.window:
        raise ValueError("solutions solved on incompatible windows")
    wronskian = float(phi_minus.ell_prime_at(0.0) - phi_plus.ell_prime_at(0.0))
    if wronskian <= 0.0:
        raise ValueError(f"nonpositive Wronskian {wronskian:g}")
    return GreenEvaluator(phi_plus=phi_plus, phi_minus=phi_minus, wronskian=wronskian)


def green_eval(green: GreenEvaluator, x, y):
    """G(x, y); raises ValueError outside the solved window."""
    return green.value(x, y)


@dataclass
class GreenResidualReport:
    """Residuals of the weak identity, one per test function."""

    residuals: list[float]
    tolerance: float
    passed: bool


def residual_check(
    green: GreenEvaluator,
    y: float,
    test_functions: Sequence[tuple[Callable, Callable]],
    *,
    window: tuple[float, float] | None = None,
    tol: float = 1e-6,
    order: int = 12,
) -> GreenResidualReport:
    """Check int(G(., y)' v' + V G(., y) v) = v(y) for each (v, v').

    Meaningful for test functions negligible outside the window (the
    identity is over the whole line).  Panels are split at y and at the
    potential's breakpoints.
    """
    if window is None:
        window = green.window
    lo, hi = window
    if not (lo < y < hi):
        raise ValueError(f"diagonal point {y:g} outside window [{lo:g}, {hi:g}]")
    pot = green.potential
    panel = 0.4 / math.sqrt(pot.upper_bound)
    residuals = []
    for v, v_prime in test_functions:

        def integrand(x):
            g = np.asarray(green.value(x, y))
            dg = np.asarray(green.section_derivative(x, y))
            return dg * np.asarray(v_prime(x)) + np.asarray(
                pot.evaluate(x)
            ) * g * np.asarray(v(x))

        total = composite_gauss_legendre(
            integrand,
            lo,
            hi,
            splits=[y, *pot.breakpoints],
            panel_length=panel,
            order=order,
        )
        residuals.append(abs(total - float(v(y))))
    worst = max(residuals) if residuals else 0.0
    return GreenResidualReport(residuals=residuals, tolerance=tol, passed=worst <= tol)


def gaussian_test(center: float, width: float) -> tuple[Callable, Callable]:
    """A Gaussian bump test function and its derivative."""

    def v(x):
        t = (np.asarray(x, dtype=float) - center) / width
        return np.exp(-0.5 * t * t)

    def v_prime(x):
        t = (np.asarray(x, dtype=float) - center) / width
        return -t / width * np.exp(-0.5 * t * t)

    return v, v_prime
