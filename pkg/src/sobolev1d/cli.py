"""Command-line front end.

Subcommands:

* ``solve``  -- run the full minimization, emit a report (JSON or CSV).
* ``scan``   -- tabulate a, F, F', F'', phi_+, phi_- over a pin grid (CSV/JSON).
* ``green``  -- tabulate the Green function over an (x, y) lattice.
* ``verify`` -- run the invariant suite and print one PASS/FAIL line per check.

Exit codes: 0 success, 2 configuration error (bad flags, malformed potential
spec, window out of range), 3 solver failure, 4 verification failure.

Output is deterministic: identical configuration yields byte-identical
artifacts.  Every float is rendered with 16 significant digits ("%.15e"), so
reports can be re-verified offline without precision loss.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fcurve import build_fcurve, check_minimality_equivalence, find_critical_points
from .fundamental import (
    SolverError,
    check_envelope_bounds,
    check_riccati_residual,
    solve_log_solution,
)
from .green import build_green, gaussian_test, residual_check
from .minimizer import SolverConfig, default_window, minimize
from .oracle import DiscreteRayleighProblem, discrete_minimize
from .potential import Potential, potential_from_spec

__all__ = ["main", "RunConfig"]

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Bad flags or potential spec; maps to exit code 2."""


@dataclass
class RunConfig:
    """Validated command-line configuration."""

    potential: Potential
    window: tuple[float, float] | None
    tol: float
    fmt: str
    out: Path | None
    oracle_half_width: float
    oracle_spacing: float

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        spec_text = args.potential
        try:
            if spec_text.lstrip().startswith("{"):
                spec = json.loads(spec_text)
            else:
                spec = json.loads(Path(spec_text).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read potential spec: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed potential spec JSON: {exc}") from exc
        try:
            potential = potential_from_spec(spec)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

        window = None
        if args.window is not None:
            parts = args.window.split(",")
            if len(parts) != 2:
                raise ConfigError("--window must be 'x_min,x_max'")
            try:
                window = (float(parts[0]), float(parts[1]))
            except ValueError as exc:
                raise ConfigError("--window values must be numbers") from exc
            if not (window[0] < 0.0 < window[1]):
                raise ConfigError("--window must contain 0")
        if not (1e-14 <= args.tol <= 1e-6):
            raise ConfigError("--tol must lie in [1e-14, 1e-6]")
        if getattr(args, "oracle_L", 30.0) <= 0 or getattr(args, "oracle_h", 0.005) <= 0:
            raise ConfigError("--oracle-L and --oracle-h must be positive")
        return cls(
            potential=potential,
            window=window,
            tol=args.tol,
            fmt=args.format if args.format is not None else args.fmt_default,
            out=None if args.out is None else Path(args.out),
            oracle_half_width=getattr(args, "oracle_L", 30.0),
            oracle_spacing=getattr(args, "oracle_h", 0.005),
        )

    def resolved_window(self) -> tuple[float, float]:
        return self.window if self.window is not None else default_window(self.potential)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return "null"
        return f"{x:.15e}"
    raise TypeError(f"not a scalar: {type(x).__name__}")


def canonical_json(obj, indent: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, floats as %.15e."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.integer, np.floating)):
        return _fmt(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{canonical_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {canonical_json(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text, encoding="utf-8")


def _csv_cell(v) -> str:
    return v if isinstance(v, str) else _fmt(v)


def _csv_rows(header: str, rows) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _parse_linspace(spec: str, flag: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"{flag} must be 'start:stop:count'")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"{flag} values must be numeric") from exc
    if count < 1:
        raise ConfigError(f"{flag} count must be >= 1")
    if count == 1:
        return np.array([start])
    return np.linspace(start, stop, count)


def cmd_solve(cfg: RunConfig, args: argparse.Namespace) -> int:
    config = SolverConfig(window=cfg.window, ode_tol=cfg.tol)
    report = minimize(cfg.potential, config)
    doc = report.to_json_dict()
    if cfg.fmt == "json":
        _emit(cfg, canonical_json(doc) + "\n")
    else:
        rows = [
            ("m", report.m_value),
            ("best_constant", report.best_constant),
            ("tail_estimate", report.tail_infimum),
            ("a_star", report.a_star if report.a_star is not None else math.nan),
            ("n_critical_points", len(report.critical_points)),
        ]
        _emit(cfg, _csv_rows("key,value", rows))
    print(
        f"m = {report.m_value:.12g}, best constant C = {report.best_constant:.12g}, "
        f"attainment = {report.attainment}"
        + (f", a* = {report.a_star:.12g}" if report.a_star is not None else ""),
        file=sys.stderr,
    )
    return 0


def cmd_scan(cfg: RunConfig, args: argparse.Namespace) -> int:
    window = cfg.resolved_window()
    plus = solve_log_solution(cfg.potential, "+", window[0], window[1], cfg.tol)
    minus = solve_log_solution(cfg.potential, "-", window[0], window[1], cfg.tol)
    curve = build_fcurve(plus, minus, cfg.potential)
    if args.grid is None:
        grid = curve.grid
    else:
        grid = _parse_linspace(args.grid, "--grid")
        lo, hi = curve.window
        if np.any(grid < lo) or np.any(grid > hi):
            raise ConfigError(
                f"--grid must stay inside the curve window [{lo:g}, {hi:g}]"
            )
    rows = []
    for a in grid:
        rows.append(
            (
                float(a),
                float(curve.value_at(a)),
                float(curve.slope_at(a)),
                float(curve.curvature_at(a)),
                float(plus.phi_at(a)),
                float(minus.phi_at(a)),
            )
        )
    if cfg.fmt == "csv":
        _emit(cfg, _csv_rows("a,F,dF,d2F,phi_plus,phi_minus", rows))
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "potential": cfg.potential.label,
            "rows": [
                {
                    "a": r[0],
                    "F": r[1],
                    "dF": r[2],
                    "d2F": r[3],
                    "phi_plus": r[4],
                    "phi_minus": r[5],
                }
                for r in rows
            ],
        }
        _emit(cfg, canonical_json(doc) + "\n")
    return 0


def cmd_green(cfg: RunConfig, args: argparse.Namespace) -> int:
    window = cfg.resolved_window()
    plus = solve_log_solution(cfg.potential, "+", window[0], window[1], cfg.tol)
    minus = solve_log_solution(cfg.potential, "-", window[0], window[1], cfg.tol)
    green = build_green(plus, minus)
    xs = _parse_linspace(args.x, "--x")
    ys = _parse_linspace(args.y, "--y")
    lo, hi = window
    for name, vals in (("--x", xs), ("--y", ys)):
        if np.any(vals < lo) or np.any(vals > hi):
            raise ConfigError(f"{name} lattice leaves the window [{lo:g}, {hi:g}]")
    rows = []
    for x in xs:
        for y in ys:
            rows.append((float(x), float(y), float(green.value(x, y))))
    if cfg.fmt == "csv":
        _emit(cfg, _csv_rows("x,y,G", rows))
    else:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "potential": cfg.potential.label,
            "rows": [{"x": r[0], "y": r[1], "G": r[2]} for r in rows],
        }
        _emit(cfg, canonical_json(doc) + "\n")
    return 0


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    pot = cfg.potential
    window = cfg.resolved_window()
    lines: list[tuple[str, str, str]] = []

    def record(name: str, ok: bool | None, detail: str) -> None:
        status = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        lines.append((status, name, detail))

    xs = np.linspace(window[0], window[1], 4001)
    xs = np.union1d(xs, [b for b in pot.breakpoints if window[0] < b < window[1]])
    v = np.asarray(pot.evaluate(xs), dtype=float)
    slack = 1e-9 * max(1.0, pot.upper_bound)
    bounds_ok = bool(
        np.all(v >= pot.lower_bound - slack) and np.all(v <= pot.upper_bound + slack)
    )
    record(
        "bounds-declared",
        bounds_ok,
        f"sampled range [{v.min():.6g}, {v.max():.6g}] vs declared "
        f"[{pot.lower_bound:.6g}, {pot.upper_bound:.6g}]",
    )
    if not bounds_ok:
        for name in (
            "riccati-residual",
            "envelope-bounds",
            "wronskian-constancy",
            "minimality-equivalence",
            "oracle-agreement",
        ):
            record(name, None, "skipped: declared bounds are wrong")
        return _verify_emit(lines)

    plus = solve_log_solution(pot, "+", window[0], window[1], cfg.tol)
    minus = solve_log_solution(pot, "-", window[0], window[1], cfg.tol)
    res_p = check_riccati_residual(plus)
    res_m = check_riccati_residual(minus)
    record(
        "riccati-residual",
        res_p.passed and res_m.passed,
        f"max |r' + r^2 - V| = {max(res_p.max_residual, res_m.max_residual):.3e} "
        f"(tolerance {res_p.tolerance:.3e})",
    )
    env = check_envelope_bounds(plus, minus)
    worst_env = max(env.violations.values()) if env.violations else 0.0
    record("envelope-bounds", env.passed, f"worst log-space violation {worst_env:.3e}")

    curve = build_fcurve(plus, minus, pot)
    drift = curve.wronskian_drift()
    record("wronskian-constancy", drift <= 1e-8, f"relative drift {drift:.3e}")

    scan = find_critical_points(curve, pot)
    if pot.continuous:
        roots = [p.location for p in scan.points + scan.rejected]
        step = max(1, curve.grid.size // 200)
        samples = curve.grid[::step]
        if roots and not scan.flat:
            keep = np.ones(samples.size, dtype=bool)
            for root in roots:
                keep &= np.abs(samples - root) > 0.02 / math.sqrt(pot.lower_bound)
            samples = samples[keep]
        eq = check_minimality_equivalence(curve, samples, potential=pot)
        record(
            "minimality-equivalence",
            eq.all_agree,
            f"{len(eq.rows)} samples, {eq.n_disagree} disagreements",
        )
    else:
        record(
            "minimality-equivalence", None, "skipped: potential is discontinuous"
        )

    greens = build_green(plus, minus)
    inset = 0.25 * min(-window[0], window[1])
    tests = [gaussian_test(c, 0.7 / math.sqrt(pot.lower_bound)) for c in (0.0, -inset, inset)]
    gr = residual_check(greens, 0.25 * inset, tests)
    record(
        "green-weak-identity",
        gr.passed,
        f"max residual {max(gr.residuals):.3e} over {len(gr.residuals)} test functions",
    )

    report = minimize(pot, SolverConfig(window=cfg.window, ode_tol=cfg.tol))
    problem = DiscreteRayleighProblem.from_potential(
        pot, cfg.oracle_half_width, cfg.oracle_spacing
    )
    m_disc, node = discrete_minimize(problem)
    gap = abs(m_disc - report.m_value)
    record(
        "oracle-agreement",
        gap <= args.oracle_tol,
        f"|m_mesh - m| = {gap:.3e} at node x = {problem.nodes[node]:.6g} "
        f"(tolerance {args.oracle_tol:g})",
    )
    return _verify_emit(lines)


def _verify_emit(lines: list[tuple[str, str, str]]) -> int:
    failed = False
    for status, name, detail in lines:
        print(f"{status} {name}: {detail}")
        failed = failed or status == "FAIL"
    return 4 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sobolev1d",
        description=(
            "Best constant and extremal functions of the sup-norm Sobolev "
            "embedding -u'' + V u with a bounded potential."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--potential",
        required=True,
        help="potential spec: a JSON file path or an inline JSON object",
    )
    common.add_argument(
        "--window",
        default=None,
        help="solve window 'x_min,x_max' (default: +-25/sqrt(v0))",
    )
    common.add_argument("--tol", type=float, default=1e-10, help="integration tolerance")
    common.add_argument(
        "--format",
        choices=("json", "csv"),
        default=None,
        help="artifact format (default: json for solve, csv for scan/green)",
    )
    common.add_argument("--out", default=None, help="write the artifact to this file")

    p_solve = sub.add_parser("solve", parents=[common], help="full minimization report")
    p_solve.set_defaults(func=cmd_solve, fmt_default="json")

    p_scan = sub.add_parser("scan", parents=[common], help="tabulate the energy curve")
    p_scan.add_argument(
        "--grid", default=None, help="pin lattice 'start:stop:count' (default: curve grid)"
    )
    p_scan.set_defaults(func=cmd_scan, fmt_default="csv")

    p_green = sub.add_parser("green", parents=[common], help="tabulate the Green function")
    p_green.add_argument("--x", required=True, help="x lattice 'start:stop:count'")
    p_green.add_argument("--y", required=True, help="y lattice 'start:stop:count'")
    p_green.set_defaults(func=cmd_green, fmt_default="csv")

    p_verify = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p_verify.add_argument("--oracle-L", type=float, default=30.0, dest="oracle_L")
    p_verify.add_argument("--oracle-h", type=float, default=0.005, dest="oracle_h")
    p_verify.add_argument(
        "--oracle-tol",
        type=float,
        default=1e-2,
        help="allowed |m_mesh - m| in the oracle check",
    )
    p_verify.set_defaults(func=cmd_verify, fmt_default="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
