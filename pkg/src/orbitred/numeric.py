"""Floating-point-independent verification of reductions.

The symbolic pipeline claims that the reduced potential is the exact
pushforward of the original under the composed time-one gradient flows of
the stage generators.  This module checks that claim numerically: it
integrates the flows in the underlying coordinates, evaluates both
potentials, and fits the decay order of the defect against the sampling
scale.  A reduction truncated at weighted degree N must show a defect of
order at least N+1.

Double precision cannot resolve such defects at small scales (the defect
sits far below the rounding floor of the potential evaluation), so all
flow integration and potential evaluation here runs in fixed-point
arithmetic over Python integers with 256 fractional bits.  Inputs are
converted exactly (floats are dyadic rationals); the integrator is the
classical fourth-order Runge-Kutta scheme with fixed step 1/1000.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .invariants import InvariantBasis
from .orbit import Generator, OrbitPoly
from .pipeline import ReductionReport
from .poly import Poly

_SCALE_BITS = 256
_ONE = 1 << _SCALE_BITS

RK4_STEP = Fraction(1, 1000)
DEFAULT_SCALES = (1e-1, 10**-1.5, 1e-2, 10**-2.5, 1e-3)
EXACT_DEFECT_FLOOR = 1e-14
SLOPE_MARGIN = 0.3
CONDITION_FLOOR = 1e-6


def _to_fixed(value: Fraction) -> int:
    return (value.numerator << _SCALE_BITS) // value.denominator


def _from_fixed(value: int) -> float:
    return value / _ONE


def _fixed_mul(a: int, b: int) -> int:
    return (a * b) >> _SCALE_BITS


class NumericContext:
    """Exact parameter assignment plus tolerances for numeric checks.

    Values may be ints, Fractions or floats; floats are converted exactly.
    """

    def __init__(
        self,
        param_values: Mapping[str, float | int | Fraction],
        basis: InvariantBasis,
        rk4_step: Fraction = RK4_STEP,
    ):
        self.values = {name: Fraction(v) for name, v in param_values.items()}
        self.basis = basis
        self.rk4_step = Fraction(rk4_step)

    def require_assigned(self, names: Sequence[str]) -> None:
        missing = [n for n in names if n not in self.values]
        if missing:
            raise ValueError(f"unassigned parameters: {', '.join(missing)}")


class _CompiledPoly:
    """Fixed-point evaluator for an x-space polynomial."""

    __slots__ = ("coeffs", "exps", "nvars", "max_deg")

    def __init__(self, poly: Poly):
        self.coeffs = [_to_fixed(c) for c in poly.terms.values()]
        self.exps = list(poly.terms.keys())
        self.nvars = len(poly.vars)
        self.max_deg = [
            max((e[i] for e in self.exps), default=0) for i in range(self.nvars)
        ]

    def eval_fixed(self, x: Sequence[int]) -> int:
        powers = []
        for i in range(self.nvars):
            row = [_ONE]
            xi = x[i]
            for _ in range(self.max_deg[i]):
                row.append(_fixed_mul(row[-1], xi))
            powers.append(row)
        total = 0
        for c, e in zip(self.coeffs, self.exps):
            term = c
            for i, k in enumerate(e):
                if k:
                    term = _fixed_mul(term, powers[i][k])
            total += term
        return total


def _substitute_params(
    f: OrbitPoly, ctx: NumericContext
) -> list[tuple[Fraction, tuple[int, ...]]]:
    """Coefficients of f as exact rationals at the context's parameter values."""
    out = []
    for exps, coeff in f.sorted_terms():
        try:
            value = coeff.eval_fractions(ctx.values)
        except KeyError as exc:
            raise ValueError(f"unassigned parameter {exc.args[0]!r}") from exc
        if value:
            out.append((value, exps))
    return out


def _expand_to_x(f: OrbitPoly, ctx: NumericContext) -> Poly:
    basis = ctx.basis
    acc = Poly.zero(basis.x_vars)
    for value, exps in _substitute_params(f, ctx):
        acc = acc + basis.expand(Poly.monomial(basis.names, exps, value))
    return acc


def eval_potential(f: OrbitPoly, ctx: NumericContext, x: Sequence[float]) -> float:
    """Evaluate the potential at a point: J(x) first, then the J-polynomial."""
    basis = ctx.basis
    if len(x) != len(basis.x_vars):
        raise ValueError("point dimension does not match the x variables")
    point = {name: Fraction(v) for name, v in zip(basis.x_vars, x)}
    jvals = {name: p.eval_fractions(point) for name, p in zip(basis.names, basis.polys)}
    total = Fraction(0)
    for value, exps in _substitute_params(f, ctx):
        term = value
        for name, k in zip(basis.names, exps):
            if k:
                term *= jvals[name] ** k
        total += term
    return float(total)


class _CompiledFlow:
    """Fixed-point RK4 integrator for the gradient flow of one generator."""

    def __init__(self, h: OrbitPoly, ctx: NumericContext):
        h_x = _expand_to_x(h, ctx)
        self.grad = [_CompiledPoly(h_x.diff(v)) for v in ctx.basis.x_vars]
        self.nvars = len(ctx.basis.x_vars)
        step = ctx.rk4_step
        self.nsteps = int(1 / step)
        if Fraction(1, self.nsteps) != step:
            raise ValueError("rk4 step must divide 1 exactly")
        self.h_fix = _to_fixed(step)
        self.h2_fix = _to_fixed(step / 2)
        self.h6_fix = _to_fixed(step / 6)

    def _field(self, x: list[int]) -> list[int]:
        return [g.eval_fixed(x) for g in self.grad]

    # trajectories live near the origin; anything beyond this is a runaway
    _BLOWUP = 1 << (_SCALE_BITS + 20)

    def run(self, x: list[int]) -> list[int]:
        n = self.nvars
        h2, h6 = self.h2_fix, self.h6_fix
        h = self.h_fix
        for _ in range(self.nsteps):
            k1 = self._field(x)
            k2 = self._field([x[i] + _fixed_mul(h2, k1[i]) for i in range(n)])
            k3 = self._field([x[i] + _fixed_mul(h2, k2[i]) for i in range(n)])
            k4 = self._field([x[i] + _fixed_mul(h, k3[i]) for i in range(n)])
            x = [
                x[i] + _fixed_mul(h6, k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i])
                for i in range(n)
            ]
            if any(abs(v) > self._BLOWUP for v in x):
                raise OverflowError("gradient flow left the trusted neighbourhood")
        return x


def flow_map(h: OrbitPoly | Generator, ctx: NumericContext, y: Sequence[float]) -> list[float]:
    """Time-one flow of grad H from y (classical RK4, fixed step)."""
    if isinstance(h, Generator):
        h = h.h
    if len(y) != len(ctx.basis.x_vars):
        raise ValueError("point dimension does not match the x variables")
    flow = _CompiledFlow(h, ctx)
    x = [_to_fixed(Fraction(v)) for v in y]
    return [_from_fixed(v) for v in flow.run(x)]


@dataclass
class VerifyResult:
    slope: float
    passed: bool
    defects: list[tuple[float, float]]  # (scale, max defect)
    seed: int
    truncation_order: int
    samples: int
    note: str = ""

    def __str__(self) -> str:
        lines = [
            f"truncation order N = {self.truncation_order}, seed = {self.seed}, "
            f"samples = {self.samples}"
        ]
        for eps, d in self.defects:
            lines.append(f"  scale {eps:.3e}: max defect {d:.6e}")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"fitted slope {self.slope:.3f} -> {verdict}{self.note}")
        return "\n".join(lines)


def check_conditions(report: ReductionReport, ctx: NumericContext) -> None:
    """Reject parameter assignments on or too close to a resonance locus."""
    for cond in report.conditions:
        value = cond.poly.eval_fractions(ctx.values)
        if abs(value) <= Fraction(1, 10**6):
            raise ValueError(
                f"parameter assignment violates resonance condition {cond}"
            )


def verify_reduction(
    original: OrbitPoly,
    report: ReductionReport,
    ctx: NumericContext,
    samples: int = 6,
    scales: Sequence[float] | None = None,
    seed: int = 0,
) -> VerifyResult:
    """Check that the reduction is a genuine change of coordinates.

    For each random unit direction u and scale eps, the composed stage
    flows are applied to eps*u; the defect |original(flowed) -
    reduced(eps*u)| must scale at least like eps^(N+1).  Passing requires a
    fitted log-log slope of N+1-0.3, or defects below 1e-14 at every scale
    (exact cancellation).
    """
    basis = report.basis
    params = report.params
    non_critical = [n for n in params.names if n not in params.critical]
    ctx.require_assigned(params.names)
    for name in non_critical:
        if ctx.values.get(name) == 0:
            raise ValueError(f"non-critical parameter {name} must be nonzero")
    check_conditions(report, ctx)

    if scales is None:
        scales = list(DEFAULT_SCALES)
    scales = sorted((float(s) for s in scales), reverse=True)

    reduced_terms = _substitute_params(report.reduced, ctx)
    original_x = _CompiledPoly(_expand_to_x(original, ctx))

    flows = [
        _CompiledFlow(stage.generator.h, ctx)
        for stage in report.stages
        if stage.generator is not None and not stage.generator.is_zero()
    ]

    rng = random.Random(seed)
    nvars = len(basis.x_vars)
    directions: list[list[Fraction]] = []
    for _ in range(samples):
        raw = [rng.gauss(0.0, 1.0) for _ in range(nvars)]
        norm = math.sqrt(sum(v * v for v in raw))
        directions.append([Fraction(v / norm) for v in raw])

    jpolys = list(zip(basis.names, basis.polys))
    defects: list[tuple[float, float]] = []
    for eps in scales:
        eps_f = Fraction(eps)
        worst = 0.0
        for u in directions:
            y = [eps_f * c for c in u]
            x_fix = [_to_fixed(v) for v in y]
            # stage 1 is the outermost substitution: apply the last stage's
            # flow first
            for flow in reversed(flows):
                x_fix = flow.run(x_fix)
            lhs = original_x.eval_fixed(x_fix)
            point = {name: v for name, v in zip(basis.x_vars, y)}
            jvals = {name: p.eval_fractions(point) for name, p in jpolys}
            rhs = Fraction(0)
            for value, exps in reduced_terms:
                term = value
                for (name, _), k in zip(jpolys, exps):
                    if k:
                        term *= jvals[name] ** k
                rhs += term
            defect = abs(_from_fixed(lhs - _to_fixed(rhs)))
            worst = max(worst, defect)
        defects.append((eps, worst))

    if all(d <= EXACT_DEFECT_FLOOR for _, d in defects):
        return VerifyResult(
            slope=float("inf"),
            passed=True,
            defects=defects,
            seed=seed,
            truncation_order=report.truncation_order,
            samples=samples,
            note=" (exact cancellation)",
        )
    xs = [math.log(eps) for eps, d in defects if d > 0]
    ys = [math.log(d) for _, d in defects if d > 0]
    n = len(xs)
    if n < 2:
        return VerifyResult(
            slope=float("nan"),
            passed=False,
            defects=defects,
            seed=seed,
            truncation_order=report.truncation_order,
            samples=samples,
            note=" (too few nonzero defects to fit a slope)",
        )
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    denom = sum((x - xbar) ** 2 for x in xs)
    slope = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / denom
    threshold = report.truncation_order + 1 - SLOPE_MARGIN
    return VerifyResult(
        slope=slope,
        passed=slope >= threshold,
        defects=defects,
        seed=seed,
        truncation_order=report.truncation_order,
        samples=samples,
    )
