"""Staged reduction of a potential, lowest target degree first.

Each stage recomputes the usable source component of the current
potential, builds the transfer matrix at its target degree, picks an
elimination plan by strategy, solves for the generating function, and
applies the exact truncated exponential of the induced derivation.

One ascending pass suffices.  In fixed mode nothing lies below the source,
the derivation only raises weighted degree, and every zeroed coefficient
is exactly zero in the reduced potential.  In varying mode the exact
exponential also acts through the sub-source (critical) components, so
later stages feed residues into already-processed degrees — but those
residues carry critical-parameter factors, so zeroed coefficients vanish
identically on the critical locus, and the reduced potential is still the
exact pushforward of the original under the composed coordinate changes
for every parameter value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

from .elimination import (
    EliminationPlan,
    Mode,
    ResonanceCondition,
    build_transfer,
    eliminable_sets,
    solve_plan,
    source_component,
)
from .invariants import InvariantBasis, PMatrix, p_matrix
from .orbit import Generator, OrbitPoly, ParameterSpec, lie_transform, stability_order
from .poly import Exponents, divides, grlex_key


@dataclass(frozen=True)
class Strategy:
    """How to choose among eliminable target subsets at each stage.

    ``max_eliminate`` zeroes a maximal subset; ties are broken by
    preferring the plan whose kept monomials come earliest in the monomial
    order (kept_smallest).  ``keep_set`` additionally never targets the
    listed monomials.
    """

    kind: Literal["max_eliminate", "keep_set"] = "max_eliminate"
    keep: tuple[Exponents, ...] = ()
    tie_break: Literal["kept_smallest"] = "kept_smallest"

    def __post_init__(self):
        if self.kind not in ("max_eliminate", "keep_set"):
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "max_eliminate" and self.keep:
            raise ValueError("max_eliminate does not take a keep list")


@dataclass
class Stage:
    target_degree: int
    generator: Generator | None
    plan: EliminationPlan | None
    skipped: str | None = None


@dataclass
class ReductionReport:
    original: OrbitPoly
    reduced: OrbitPoly
    stages: list[Stage]
    conditions: list[ResonanceCondition]
    mode: Mode
    truncation_order: int
    strategy: Strategy
    params: ParameterSpec
    basis: InvariantBasis = field(repr=False, default=None)

    def zeroed_monomials(self) -> list[Exponents]:
        out: list[Exponents] = []
        for stage in self.stages:
            if stage.plan is not None:
                out.extend(stage.plan.zeroed_targets)
        return out


def _select_plan(
    plans: Sequence[EliminationPlan], allowed: Sequence[Exponents]
) -> EliminationPlan:
    """Maximal zeroed set; ties broken by smallest kept monomials."""
    best_size = max(len(p.zeroed_targets) for p in plans)

    def kept_key(plan: EliminationPlan) -> tuple:
        kept = [e for e in allowed if e not in plan.zeroed_targets]
        return tuple(sorted(grlex_key(e) for e in kept))

    candidates = [p for p in plans if len(p.zeroed_targets) == best_size]
    return min(candidates, key=kept_key)


def reduce_potential(
    f: OrbitPoly,
    basis: InvariantBasis,
    params: ParameterSpec,
    mode: Mode = "varying",
    strategy: Strategy = Strategy(),
    n: int | None = None,
    max_sets: int = 4096,
    pm: PMatrix | None = None,
) -> ReductionReport:
    """Run the staged reduction and assemble the report.

    Raises NoUsableSourceError when no component of the potential survives
    at the critical locus.  A keep-set that swallows every target at some
    degree marks that stage skipped rather than failing the run.
    """
    if f.basis is not basis:
        raise ValueError("potential does not live over the given basis")
    if n is None:
        n = stability_order(basis)
    if pm is None:
        pm = p_matrix(basis)
    for e in strategy.keep:
        if len(e) != basis.r:
            raise ValueError(f"keep monomial {e} does not match the invariant count")
        if any(divides(rule.lhs, e) for rule in basis.syzygies):
            raise ValueError(f"keep monomial {e} is not in syzygy normal form")

    original = f.truncate(n)
    current = original
    stages: list[Stage] = []
    source = source_component(current, mode, params)  # NoUsableSource propagates
    w_source = source.min_weighted_degree()

    for w in range(w_source + 2, n + 1):
        source = source_component(current, mode, params)
        w_h = w - source.min_weighted_degree() + 2
        if w_h < 4:
            continue
        if not basis.normal_monomials(w_h) or not basis.normal_monomials(w):
            continue
        targets = basis.normal_monomials(w)
        allowed = [
            e
            for e in targets
            if e not in strategy.keep and not current.coeff(e).is_zero()
        ]
        if not allowed:
            stages.append(Stage(w, None, None, "nothing to eliminate"))
            continue
        transfer = build_transfer(source, w, pm)
        rhs = [current.coeff(e) for e in transfer.target_monomials]
        plans = eliminable_sets(
            transfer, mode, params, max_sets=max_sets, allowed_targets=allowed
        )
        if not plans:
            stages.append(Stage(w, None, None, "no eliminable subset"))
            continue
        plan = solve_plan(transfer, _select_plan(plans, allowed), rhs)
        generator = Generator(OrbitPoly(basis, params, plan.generator_solution))
        if not generator.is_zero():
            current = lie_transform(current, generator, pm, n)
        stages.append(Stage(w, generator, plan))

    conditions: list[ResonanceCondition] = []
    for stage in stages:
        if stage.plan is None:
            continue
        for cond in stage.plan.conditions:
            if not any(cond.same_as(c) for c in conditions):
                conditions.append(cond)
    return ReductionReport(
        original=original,
        reduced=current,
        stages=stages,
        conditions=conditions,
        mode=mode,
        truncation_order=n,
        strategy=strategy,
        params=params,
        basis=basis,
    )


def conditions_summary(report: ReductionReport) -> list[ResonanceCondition]:
    """Deduplicated union of all stage conditions, in stage order."""
    out: list[ResonanceCondition] = []
    for stage in report.stages:
        if stage.plan is None:
            continue
        for cond in stage.plan.conditions:
            if not any(cond.same_as(c) for c in out):
                out.append(cond)
    return out


def replay_reduction(report: ReductionReport, pm: PMatrix | None = None) -> OrbitPoly:
    """Recompute the reduced potential from the report's stage generators."""
    if pm is None:
        pm = p_matrix(report.basis)
    current = report.original
    for stage in report.stages:
        if stage.generator is not None and not stage.generator.is_zero():
            current = lie_transform(current, stage.generator, pm, report.truncation_order)
    return current
