"""The degenerate case: a constant potential.

For V = v the pinned energy F(a) = 2 sqrt(v) does not depend on the pin, so
every translate of e^{-sqrt(v)|x - a|} is extremal and the best embedding
constant is (2 sqrt(v))^{-1/2}.  The solver reports this as "flat"
attainment.  Everything here is checkable by hand, which makes it the first
thing to run when checking a build.
"""

import math

import numpy as np

from sobolev1d import extremal, make_constant, minimize, rayleigh_quotient

for v in (0.25, 1.0, 4.0):
    report = minimize(make_constant(v))
    exact = 2.0 * math.sqrt(v)
    print(f"V = {v:<5g} m = {report.m_value:.12f}  (exact {exact:.12f})")
    print(f"{'':8} best constant = {report.best_constant:.12f}")
    print(f"{'':8} attainment = {report.attainment}")

    u = extremal(report)
    xs = np.linspace(-8.0, 8.0, 1001)
    gap = np.max(np.abs(u(xs) - np.exp(-math.sqrt(v) * np.abs(xs))))
    print(f"{'':8} sup |u - exp(-sqrt(v)|x|)| = {gap:.2e}")

    # plugging the extremal back into the Rayleigh quotient recovers m
    q = rayleigh_quotient(u, make_constant(v))
    print(f"{'':8} R(u) = {q:.12f}  (R - m = {q - report.m_value:+.2e})")
    print()
