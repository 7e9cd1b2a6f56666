"""Bounded positive potentials on the real line.

Everything downstream works with essentially bounded potentials
0 < v0 <= V(x) <= v1 < inf.  A :class:`Potential` bundles the evaluation
callable with the declared bounds, the list of discontinuity locations,
and (when known) the limits of V at -inf and +inf.  The declared data is
trusted by the integrators, so the constructors in this module validate
whatever can be validated cheaply.

Builtin families:

* ``make_constant(v)``            -- V == v
* ``make_piecewise_constant(...)``-- step potentials with declared jumps
* ``make_monotone_step(...)``     -- smooth logistic ramp from v0 to v1
* ``make_example(A, B)``          -- the rational-times-exponential family
  V(x) = B^2 + 2Bx/(x^2+A^2) + (2x^2-A^2)/(x^2+A^2)^2, positive iff
  A*B > (1+sqrt(5))/2, for which the decaying solutions are known in
  closed form (useful as a regression target).

Sampled data enters through ``potential_from_log_derivative`` (build V from
samples of log phi' and log phi'' via V = l'' + (l')^2) and through the JSON
spec loader ``potential_from_spec``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import expit

__all__ = [
    "Potential",
    "ExamplePotentialParams",
    "make_constant",
    "make_piecewise_constant",
    "make_monotone_step",
    "make_example",
    "potential_from_log_derivative",
    "potential_from_spec",
]

# Positivity of make_example requires A*B strictly above the golden ratio.
_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class Potential:
    """A bounded potential 0 < lower_bound <= V <= upper_bound.

    Attributes:
        evaluate: vectorized callable, float or ndarray in, same shape out.
        lower_bound: declared essential infimum v0 (> 0).
        upper_bound: declared essential supremum v1 (>= v0).
        breakpoints: sorted locations where V may jump; integrators split
            their meshes here.  Empty for continuous potentials.
        tail_limits: (limit at -inf, limit at +inf) when the potential has
            genuine limits, else None.
        continuous: False when V has jump discontinuities.
        label: short human-readable description used in reports.
    """

    evaluate: Callable[[np.ndarray | float], np.ndarray | float]
    lower_bound: float
    upper_bound: float
    breakpoints: tuple[float, ...] = ()
    tail_limits: tuple[float, float] | None = None
    continuous: bool = True
    label: str = "potential"

    def __post_init__(self) -> None:
        if not (self.lower_bound > 0.0):
            raise ValueError(f"lower bound must be positive, got {self.lower_bound}")
        if not (self.upper_bound >= self.lower_bound):
            raise ValueError(
                f"upper bound {self.upper_bound} below lower bound {self.lower_bound}"
            )
        if any(b2 <= b1 for b1, b2 in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    def __call__(self, x: np.ndarray | float) -> np.ndarray | float:
        return self.evaluate(x)

    def shifted(self, offset: float) -> "Potential":
        """The translated potential x -> V(x - offset)."""
        base = self.evaluate
        return Potential(
            evaluate=lambda x: base(np.asarray(x, dtype=float) - offset),
            lower_bound=self.lower_bound,
            upper_bound=self.upper_bound,
            breakpoints=tuple(b + offset for b in self.breakpoints),
            tail_limits=self.tail_limits,
            continuous=self.continuous,
            label=f"{self.label} shifted by {offset:g}",
        )


def make_constant(v: float) -> Potential:
    """The constant potential V == v, v > 0."""
    if not (v > 0.0):
        raise ValueError(f"constant potential must be positive, got {v}")
    v = float(v)

    def evaluate(x):
        return np.full_like(np.asarray(x, dtype=float), v)

    return Potential(
        evaluate=evaluate,
        lower_bound=v,
        upper_bound=v,
        tail_limits=(v, v),
        continuous=True,
        label=f"constant {v:g}",
    )


def make_piecewise_constant(edges: Sequence[float], values: Sequence[float]) -> Potential:
    """A right-continuous step potential.

    ``values[k]`` is taken on ``[edges[k-1], edges[k])`` (first piece extends
    to -inf, last to +inf), so ``len(values) == len(edges) + 1``.
    """
    edges_arr = np.asarray(edges, dtype=float)
    vals = np.asarray(values, dtype=float)
    if edges_arr.ndim != 1 or vals.ndim != 1 or vals.size != edges_arr.size + 1:
        raise ValueError("need len(values) == len(edges) + 1")
    if edges_arr.size and np.any(np.diff(edges_arr) <= 0):
        raise ValueError("edges must be strictly increasing")
    if np.any(vals <= 0.0):
        raise ValueError("all piece values must be positive")

    def evaluate(x):
        idx = np.searchsorted(edges_arr, np.asarray(x, dtype=float), side="right")
        return vals[idx]

    jumps = tuple(
        float(e) for e, lo, hi in zip(edges_arr, vals[:-1], vals[1:]) if lo != hi
    )
    return Potential(
        evaluate=evaluate,
        lower_bound=float(vals.min()),
        upper_bound=float(vals.max()),
        breakpoints=jumps,
        tail_limits=(float(vals[0]), float(vals[-1])),
        continuous=not jumps,
        label=f"piecewise constant ({vals.size} pieces)",
    )


def make_monotone_step(v0: float, v1: float, width: float = 1.0, center: float = 0.0) -> Potential:
    """A smooth nondecreasing ramp from v0 at -inf to v1 at +inf.

    Logistic profile V(x) = v0 + (v1 - v0) * sigma((x - center)/width); the
    tails are reached exponentially fast, |V(x) - v0| <= (v1-v0) e^{x/width}
    for x << center.  v0 == v1 degenerates to the constant potential.
    """
    if not (0.0 < v0 <= v1):
        raise ValueError(f"need 0 < v0 <= v1, got v0={v0}, v1={v1}")
    if not (width > 0.0):
        raise ValueError(f"transition width must be positive, got {width}")
    v0, v1, width, center = float(v0), float(v1), float(width), float(center)

    def evaluate(x):
        t = (np.asarray(x, dtype=float) - center) / width
        return v0 + (v1 - v0) * expit(t)

    return Potential(
        evaluate=evaluate,
        lower_bound=v0,
        upper_bound=v1,
        tail_limits=(v0, v1),
        continuous=True,
        label=f"monotone step {v0:g} -> {v1:g} (width {width:g})",
    )


@dataclass(frozen=True)
class ExamplePotentialParams:
    """Parameters of the closed-form family make_example.

    Positivity of the potential requires A*B > (1 + sqrt(5))/2.  The
    declared bounds are the term-wise estimates: the infimum bound
    (A^2 B^2 - A B - 1)/A^2 is sharp enough for the solver, and the
    supremum bound B^2 + B/A + 2/A^2 over-estimates the third term's true
    maximum 1/(3A^2) on purpose -- declared bounds only need to contain
    the range.
    """

    A: float
    B: float

    def __post_init__(self) -> None:
        if not (self.A > 0.0 and self.B > 0.0):
            raise ValueError(f"need A > 0 and B > 0, got A={self.A}, B={self.B}")
        if not (self.A * self.B > _GOLDEN):
            raise ValueError(
                f"need A*B > (1+sqrt(5))/2 ~ {_GOLDEN:.6f} for positivity, "
                f"got A*B = {self.A * self.B:.6f}"
            )

    @property
    def lower_bound(self) -> float:
        a, b = self.A, self.B
        return (a * a * b * b - a * b - 1.0) / (a * a)

    @property
    def upper_bound(self) -> float:
        a, b = self.A, self.B
        return b * b + b / a + 2.0 / (a * a)

    @property
    def tail_value(self) -> float:
        return self.B * self.B


def make_example(A: float, B: float) -> Potential:
    """The closed-form family V(x) = B^2 + 2Bx/(x^2+A^2) + (2x^2-A^2)/(x^2+A^2)^2."""
    params = ExamplePotentialParams(float(A), float(B))
    a2 = params.A * params.A
    b = params.B

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        q = x * x + a2
        return b * b + 2.0 * b * x / q + (2.0 * x * x - a2) / (q * q)

    return Potential(
        evaluate=evaluate,
        lower_bound=params.lower_bound,
        upper_bound=params.upper_bound,
        tail_limits=(params.tail_value, params.tail_value),
        continuous=True,
        label=f"example(A={params.A:g}, B={params.B:g})",
    )


def _spline_potential(
    grid: np.ndarray,
    samples: np.ndarray,
    label: str,
    lower_bound: float | None = None,
    upper_bound: float | None = None,
) -> Potential:
    """Piecewise-cubic interpolant of positive samples, held constant outside the grid."""
    spline = CubicSpline(grid, samples, extrapolate=False)
    lo, hi = float(grid[0]), float(grid[-1])
    left, right = float(samples[0]), float(samples[-1])

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        out = spline(np.clip(x, lo, hi))
        return np.where(x < lo, left, np.where(x > hi, right, out))

    # The spline can over/undershoot between nodes; bound it on a refinement.
    fine = np.linspace(lo, hi, 10 * grid.size)
    vals = evaluate(fine)
    vmin, vmax = float(np.min(vals)), float(np.max(vals))
    if vmin <= 0.0:
        raise ValueError(
            f"interpolated potential dips to {vmin:.6g} <= 0; not admissible"
        )
    margin = 1e-9 * max(1.0, vmax)
    v0 = lower_bound if lower_bound is not None else vmin - margin
    v1 = upper_bound if upper_bound is not None else vmax + margin
    return Potential(
        evaluate=evaluate,
        lower_bound=v0,
        upper_bound=v1,
        tail_limits=(left, right),
        continuous=True,
        label=label,
    )


def potential_from_log_derivative(
    grid: Sequence[float],
    ell_prime: Sequence[float],
    ell_double_prime: Sequence[float],
) -> Potential:
    """Reconstruct V = l'' + (l')^2 from samples of a decaying solution's log.

    If phi = exp(l) solves -phi'' + V phi = 0 then V = l'' + (l')^2, so
    samples of l' and l'' on a common grid determine V up to interpolation
    error.  The samples must produce a strictly positive potential.
    """
    x = np.asarray(grid, dtype=float)
    lp = np.asarray(ell_prime, dtype=float)
    lpp = np.asarray(ell_double_prime, dtype=float)
    if x.ndim != 1 or x.size < 4:
        raise ValueError("need at least 4 grid points")
    if lp.shape != x.shape or lpp.shape != x.shape:
        raise ValueError("samples must share the grid's shape")
    if np.any(np.diff(x) <= 0):
        raise ValueError("grid must be strictly increasing")
    v = lpp + lp * lp
    if np.any(v <= 0.0):
        raise ValueError(
            f"reconstructed potential has min {v.min():.6g} <= 0; not admissible"
        )
    return _spline_potential(x, v, label="from log-derivative samples")


def potential_from_spec(spec: dict) -> Potential:
    """Build a potential from a JSON-style dict.

    Recognized kinds::

        {"kind": "constant", "v": 4.0}
        {"kind": "example", "A": 1.0, "B": 2.0}
        {"kind": "step", "v0": 1.0, "v1": 4.0, "width": 1.0, "center": 0.0}
        {"kind": "table", "x": [...], "v": [...]}
        {"kind": "table", "x": [...], "ell_prime": [...], "ell_double_prime": [...]}
        {"kind": "piecewise_constant", "edges": [...], "values": [...]}

    ``width``/``center`` default to 1.0/0.0.  A table spec may override the
    declared bounds with explicit "lower_bound"/"upper_bound" entries.
    """
    if not isinstance(spec, dict):
        raise ValueError(f"potential spec must be an object, got {type(spec).__name__}")
    kind = spec.get("kind")
    if kind == "constant":
        return make_constant(_num(spec, "v"))
    if kind == "example":
        return make_example(_num(spec, "A"), _num(spec, "B"))
    if kind == "step":
        return make_monotone_step(
            _num(spec, "v0"),
            _num(spec, "v1"),
            width=float(spec.get("width", 1.0)),
            center=float(spec.get("center", 0.0)),
        )
    if kind == "piecewise_constant":
        return make_piecewise_constant(_arr(spec, "edges"), _arr(spec, "values"))
    if kind == "table":
        x = np.asarray(_arr(spec, "x"), dtype=float)
        lb = spec.get("lower_bound")
        ub = spec.get("upper_bound")
        if "v" in spec:
            v = np.asarray(_arr(spec, "v"), dtype=float)
            if v.shape != x.shape:
                raise ValueError("table 'v' must match 'x' in length")
            if x.ndim != 1 or x.size < 4 or np.any(np.diff(x) <= 0):
                raise ValueError("table 'x' must be increasing with >= 4 points")
            if np.any(v <= 0.0):
                raise ValueError("table potential samples must be positive")
            return _spline_potential(
                x,
                v,
                label="tabulated potential",
                lower_bound=None if lb is None else float(lb),
                upper_bound=None if ub is None else float(ub),
            )
        pot = potential_from_log_derivative(
            x, _arr(spec, "ell_prime"), _arr(spec, "ell_double_prime")
        )
        if lb is None and ub is None:
            return pot
        return Potential(
            evaluate=pot.evaluate,
            lower_bound=pot.lower_bound if lb is None else float(lb),
            upper_bound=pot.upper_bound if ub is None else float(ub),
            breakpoints=pot.breakpoints,
            tail_limits=pot.tail_limits,
            continuous=pot.continuous,
            label=pot.label,
        )
    raise ValueError(f"unknown potential kind: {kind!r}")


def _num(spec: dict, key: str) -> float:
    if key not in spec:
        raise ValueError(f"potential spec of kind {spec.get('kind')!r} needs {key!r}")
    try:
        return float(spec[key])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"potential spec entry {key!r} is not a number") from exc


def _arr(spec: dict, key: str) -> list:
    if key not in spec:
        raise ValueError(f"potential spec of kind {spec.get('kind')!r} needs {key!r}")
    val = spec[key]
    if not isinstance(val, (list, tuple)):
        raise ValueError(f"potential spec entry {key!r} must be an array")
    return list(val)
