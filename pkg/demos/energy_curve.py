"""Anatomy of the pinned energy curve F.

F(a) is the minimal energy over functions pinned to their maximum at a; its
derivatives come from the one-sided logarithmic rates r_+ and r_-, never
from differencing:

    F  = r_- - r_+          F' = -F (r_+ + r_-)
    F'' = 2F (r_+^2 + r_+ r_- + r_-^2 - V)

The script tabulates the curve for a monotone step potential (where F is
strictly increasing and the infimum escapes to the left), prints the
invariants that hold along the way, and writes the table as CSV.

Run from the repository root:  python3 demos/energy_curve.py [out.csv]
"""

import sys

import numpy as np

from sobolev1d import (
    build_fcurve,
    check_minimality_equivalence,
    find_critical_points,
    make_monotone_step,
    minimize,
    solve_log_solution,
)

pot = make_monotone_step(1.0, 4.0, width=1.0)
plus = solve_log_solution(pot, "+", -25.0, 25.0)
minus = solve_log_solution(pot, "-", -25.0, 25.0)
curve = build_fcurve(plus, minus, pot)

print(f"potential: {pot.label}, tails {pot.tail_limits}")
print(f"curve window: [{curve.window[0]:.3f}, {curve.window[1]:.3f}]")
print(f"Wronskian W = {curve.wronskian:.12f}, drift {curve.wronskian_drift():.2e}")

a_grid = np.linspace(-10.0, 10.0, 9)
print("\n      a         F(a)        F'(a)        F''(a)")
for a in a_grid:
    print(f"  {a:+7.2f}  {curve.value_at(a):10.6f}  {curve.slope_at(a):+11.3e}"
          f"  {curve.curvature_at(a):+11.3e}")

scan = find_critical_points(curve, pot)
print(f"\ninterior critical points: {len(scan.points)} "
      f"(flat = {scan.flat}, noise floor {scan.noise_floor:.1e})")
print("F' > 0 everywhere:", bool(np.all(curve.slope > 0.0)))

report = minimize(pot)
print(f"m = {report.m_value:.9f} via {report.tail_method} "
      f"(2 sqrt(v_left) = 2), attainment = {report.attainment}")

eq = check_minimality_equivalence(curve, np.linspace(-8, 8, 33), potential=pot)
print(f"minimality conditions agree at {len(eq.rows)} sample pins "
      f"({eq.n_disagree} disagreements)")

out = sys.argv[1] if len(sys.argv) > 1 else None
if out:
    rows = ["a,F,dF,d2F"]
    for a in np.linspace(curve.window[0], curve.window[1], 401):
        rows.append(f"{a:.15e},{curve.value_at(a):.15e},"
                    f"{curve.slope_at(a):.15e},{curve.curvature_at(a):.15e}")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")
    print(f"wrote {out}")
