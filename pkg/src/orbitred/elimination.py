"""Transfer matrices, eliminable target sets, and the term-level criterion.

At each target degree the first-order effect of a degree-homogeneous
generating function on the potential is linear in the generator's
coefficients.  The ``TransferMatrix`` collects that linear map with rows
indexed by target monomials and columns by generator monomials; deciding
which coefficient sets can be zeroed, and under which polynomial
nondegeneracy (resonance) conditions, is then exact linear algebra over
the parameter fraction field.

Conditions are reported as the pivot polynomials of a deterministic
elimination on the selected square subsystem.  Pivots are preferred when
they divide the subsystem determinant, which keeps the reported conditions
equivalent to the determinant's vanishing locus instead of accumulating
spurious factors from elimination denominators; repeated conditions are
deduplicated up to a nonzero rational factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal, Sequence

from .invariants import PMatrix
from .linalg import det_fraction_free, gauss_eliminate
from .orbit import Generator, OrbitPoly, ParameterSpec, derivation_apply
from .poly import Exponents, Poly, divides, exps_add, grlex_key, try_divide_exact
from .ratfun import RatFun

Mode = Literal["fixed", "varying"]


class NoUsableSourceError(ValueError):
    """Every component of the potential vanishes at the critical locus."""


@dataclass(frozen=True)
class ResonanceCondition:
    """Polynomial in the non-critical parameters that must not vanish."""

    poly: Poly

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError("resonance condition cannot be identically zero")

    def same_as(self, other: "ResonanceCondition") -> bool:
        return self.poly.primitive_part() == other.poly.primitive_part()

    def __str__(self) -> str:
        return f"{self.poly} != 0"


@dataclass
class TransferMatrix:
    """Linear map from generator coefficients to first-order target changes."""

    target_monomials: list[Exponents]
    generator_monomials: list[Exponents]
    entries: list[list[RatFun]]  # entries[t][g]
    source_degree: int
    generator_degree: int
    reduced: bool  # True when rows are syzygy normal-form coordinates
    basis: object = field(repr=False, default=None)
    params: ParameterSpec | None = field(repr=False, default=None)


@dataclass
class EliminationPlan:
    zeroed_targets: list[Exponents]
    generator_solution: dict[Exponents, RatFun]
    conditions: list[ResonanceCondition]


def source_component(f: OrbitPoly, mode: Mode, params: ParameterSpec) -> OrbitPoly:
    """Lowest usable homogeneous component of the potential.

    Fixed mode returns the lowest nonzero component.  Varying mode returns
    the lowest component that survives setting every critical parameter to
    zero, with that substitution applied, so that everything derived from
    it stays valid uniformly through the transition.
    """
    if f.is_zero():
        raise NoUsableSourceError("potential is identically zero")
    components = f.weighted_components()
    if mode == "fixed":
        w = min(components)
        return components[w]
    if mode != "varying":
        raise ValueError(f"unknown elimination mode {mode!r}")
    for w in sorted(components):
        at_locus = components[w].at_critical_locus()
        if not at_locus.is_zero():
            return at_locus
    raise NoUsableSourceError("every component vanishes at the critical locus")


def _raw_first_order(source: OrbitPoly, gen_exps: Exponents, p: PMatrix) -> dict[Exponents, RatFun]:
    """(D source)^T P (D J^gen) expanded in the free ring (no rewriting)."""
    basis = source.basis
    params = source.params
    out: dict[Exponents, RatFun] = {}
    for alpha in range(basis.r):
        dsource = source.diff_j(alpha)
        if dsource.is_zero():
            continue
        for beta in range(basis.r):
            k = gen_exps[beta]
            if k == 0 or p.entries[alpha][beta].is_zero():
                continue
            dgen = list(gen_exps)
            dgen[beta] -= 1
            dgen_t = tuple(dgen)
            for se, sc in dsource.terms.items():
                for pe, pc in p.entries[alpha][beta].terms.items():
                    e = exps_add(exps_add(se, pe), dgen_t)
                    add = sc * (pc * k)
                    acc = out.get(e)
                    acc = add if acc is None else acc + add
                    if acc.is_zero():
                        out.pop(e, None)
                    else:
                        out[e] = acc
    return out


def build_transfer(
    source: OrbitPoly,
    w_target: int,
    p: PMatrix,
    target_monomials: Sequence[Exponents] | None = None,
    generator_monomials: Sequence[Exponents] | None = None,
) -> TransferMatrix:
    """Transfer matrix at the given target degree for the given source.

    Default monomial lists are the syzygy normal-form monomials of the
    respective degrees and the first-order changes are rewritten to normal
    form.  Explicit lists may be redundant (contain rewritable monomials);
    in that case the computation stays in the free ring so the redundant
    coordinates remain distinguishable.
    """
    basis = source.basis
    if source.is_zero() or not source.is_weighted_homogeneous():
        raise ValueError("source must be a nonzero weighted-homogeneous component")
    w_source = source.min_weighted_degree()
    w_h = w_target - w_source + 2
    if w_h < 4:
        raise ValueError(
            f"target degree {w_target} needs a generator of degree {w_h} < 4; "
            "quadratic generators are excluded"
        )
    if generator_monomials is None:
        generator_monomials = basis.normal_monomials(w_h)
    else:
        generator_monomials = [tuple(e) for e in generator_monomials]
        for e in generator_monomials:
            if basis.weighted_degree(e) != w_h:
                raise ValueError(f"generator monomial {e} is not of weighted degree {w_h}")
    reduce_rows = True
    if target_monomials is None:
        target_monomials = basis.normal_monomials(w_target)
    else:
        target_monomials = [tuple(e) for e in target_monomials]
        for e in target_monomials:
            if basis.weighted_degree(e) != w_target:
                raise ValueError(f"target monomial {e} is not of weighted degree {w_target}")
        reduce_rows = all(
            not any(divides(rule.lhs, e) for rule in basis.syzygies) for e in target_monomials
        )
    params = source.params
    zero = RatFun.zero(params.names)
    columns: list[dict[Exponents, RatFun]] = []
    for gexps in generator_monomials:
        raw = _raw_first_order(source, gexps, p)
        if reduce_rows:
            raw = OrbitPoly(basis, params, raw).terms
        columns.append(raw)
    target_index = {e: i for i, e in enumerate(target_monomials)}
    entries = [[zero for _ in generator_monomials] for _ in target_monomials]
    for j, col in enumerate(columns):
        for e, c in col.items():
            i = target_index.get(e)
            if i is None:
                raise ValueError(
                    f"first-order image hits monomial {e} outside the target list"
                )
            entries[i][j] = c
    return TransferMatrix(
        target_monomials=list(target_monomials),
        generator_monomials=list(generator_monomials),
        entries=entries,
        source_degree=w_source,
        generator_degree=w_h,
        reduced=reduce_rows,
        basis=basis,
        params=params,
    )


def _dedup_conditions(polys: Sequence[Poly]) -> list[ResonanceCondition]:
    out: list[ResonanceCondition] = []
    seen: list[Poly] = []
    for p in polys:
        prim = p.primitive_part()
        if prim.total_degree() == 0:
            continue  # constant factors are no condition
        if any(prim == s for s in seen):
            continue
        seen.append(prim)
        out.append(ResonanceCondition(prim))
    return out


def _det_guided_key(det_num: Poly | None):
    def key(entry: RatFun, row_index: int) -> tuple:
        num = entry.num_primitive()
        lead_exps, _ = num.leading()
        if det_num is not None and not det_num.is_zero():
            divides_det = 0 if try_divide_exact(det_num, num) is not None else 1
        else:
            divides_det = 0
        return (divides_det, len(num), grlex_key(lead_exps), row_index)

    return key


def _solve_subsystem(
    t: TransferMatrix,
    subset: Sequence[int],
    rhs: Sequence[RatFun] | None,
) -> tuple[list[Poly], dict[Exponents, RatFun]] | None:
    """Solve for a generator zeroing the subset rows; None when impossible.

    Returns the raw pivot condition polynomials (numerators, in selection
    order) and the generator solution (pivot columns only; other generator
    coefficients are zero).  The pivot preference favours entries dividing
    the subsystem determinant so the recorded conditions match its
    vanishing locus.
    """
    rows = [list(t.entries[i]) for i in subset]
    pivots, _, _, _ = gauss_eliminate([list(r) for r in rows], None)
    if len(pivots) < len(subset):
        return None
    piv_cols = sorted(c for c, _, _ in pivots)
    square = [[row[c] for c in piv_cols] for row in rows]
    if all(e.is_polynomial() for row in square for e in row):
        det_num = det_fraction_free(
            [[e.as_poly() for e in row] for row in square]
        ).primitive_part()
    else:
        det = None
        for _, _, piv in pivots:
            det = piv if det is None else det * piv
        det_num = det.num_primitive()
    if rhs is not None:
        b = [-rhs[i] for i in subset]
    else:
        b = [RatFun.zero(t.params.names) for _ in subset]
    pivots2, red_rows, red_b, free_rows = gauss_eliminate(square, b, _det_guided_key(det_num))
    assert not free_rows, "square subsystem must be fully pivoted"
    # The pivot list is a sharp presentation of the solvability condition
    # only when every pivot divides the subsystem determinant; otherwise
    # elimination denominators have crept in, and the determinant itself is
    # the honest (single, unfactored) condition.
    pivot_nums = [piv.num_primitive() for _, _, piv in pivots2]
    sharp = all(try_divide_exact(det_num, num) is not None for num in pivot_nums)
    conditions = pivot_nums if sharp else [det_num]
    ncols = len(piv_cols)
    solution = [RatFun.zero(t.params.names) for _ in range(ncols)]
    for col, row, _ in reversed(pivots2):
        acc = red_b[row]
        for j in range(col + 1, ncols):
            if not red_rows[row][j].is_zero() and not solution[j].is_zero():
                acc = acc - red_rows[row][j] * solution[j]
        solution[col] = acc / red_rows[row][col]
    gen_solution = {
        t.generator_monomials[piv_cols[k]]: solution[k]
        for k in range(ncols)
        if not solution[k].is_zero()
    }
    return conditions, gen_solution


def _admissible_conditions(
    raw_conditions: Sequence[Poly], mode: Mode, params: ParameterSpec
) -> list[ResonanceCondition] | None:
    """Apply the varying-mode admissibility test; None when inadmissible."""
    if mode == "fixed" or not params.critical:
        return _dedup_conditions(raw_conditions)
    substituted = []
    zero_map = {name: Poly.zero(params.names) for name in sorted(params.critical)}
    for p in raw_conditions:
        sub = p.substitute(zero_map)
        if sub.is_zero():
            return None
        substituted.append(sub)
    return _dedup_conditions(substituted)


def eliminable_sets(
    t: TransferMatrix,
    mode: Mode,
    params: ParameterSpec,
    max_sets: int = 4096,
    rhs: Sequence[RatFun] | None = None,
    allowed_targets: Sequence[Exponents] | None = None,
) -> list[EliminationPlan]:
    """Enumerate target subsets that a generator can zero, with conditions.

    Subsets are visited largest first (sizes from the generic rank down to
    one), each size in lexicographic index order, and the result is capped
    at ``max_sets`` plans (the default cap only bites beyond twelve
    targets).  When ``rhs`` (the current target coefficients)
    is given, each plan carries the explicit generator solution zeroing
    those coefficients at first order.  ``allowed_targets`` restricts which
    monomials may be zeroed (kept monomials still change collaterally).
    """
    n = len(t.target_monomials)
    if rhs is not None and len(rhs) != n:
        raise ValueError("rhs length does not match the target list")
    if allowed_targets is None:
        indices = list(range(n))
    else:
        indices = [t.target_monomials.index(tuple(e)) for e in allowed_targets]
    full_pivots, _, _, _ = gauss_eliminate([t.entries[i][:] for i in indices], None)
    rank = len(full_pivots)
    plans: list[EliminationPlan] = []
    for size in range(min(rank, len(indices)), 0, -1):
        for subset in combinations(indices, size):
            if len(plans) >= max_sets:
                return plans
            solved = _solve_subsystem(t, subset, rhs)
            if solved is None:
                continue
            raw_conditions, gen_solution = solved
            conditions = _admissible_conditions(raw_conditions, mode, params)
            if conditions is None:
                continue
            plans.append(
                EliminationPlan(
                    zeroed_targets=[t.target_monomials[i] for i in subset],
                    generator_solution=gen_solution if rhs is not None else {},
                    conditions=conditions,
                )
            )
    return plans


def solve_plan(
    t: TransferMatrix,
    plan: EliminationPlan,
    rhs: Sequence[RatFun],
) -> EliminationPlan:
    """Fill in the generator solution of a plan for the given coefficients."""
    subset = tuple(t.target_monomials.index(e) for e in plan.zeroed_targets)
    solved = _solve_subsystem(t, subset, rhs)
    if solved is None:
        raise ValueError("plan subset is not solvable against the transfer matrix")
    _, gen_solution = solved
    return EliminationPlan(
        zeroed_targets=list(plan.zeroed_targets),
        generator_solution=gen_solution,
        conditions=list(plan.conditions),
    )


@dataclass
class CriterionResult:
    eliminable: bool
    generator: Generator | None = None
    q: list[OrbitPoly] | None = None
    conditions: list[ResonanceCondition] = field(default_factory=list)
    reason: str | None = None
    first_order_change: OrbitPoly | None = None


def criterion_check(
    term: OrbitPoly,
    f: OrbitPoly,
    p: PMatrix,
    mode: Mode,
    params: ParameterSpec,
) -> CriterionResult:
    """Decide whether a single term lies in the image of the transfer map.

    When eliminable, returns the solved generator H and the vector
    Q_i = dH/dJ_i (whose Jacobian is symmetric by construction), plus the
    full first-order change of the potential under H.  Higher-order
    remainders are left in place; subsequent stages deal with them.
    """
    basis = f.basis
    if term.is_zero():
        zero = Generator(OrbitPoly.zero(basis, params))
        return CriterionResult(
            True,
            zero,
            [OrbitPoly.zero(basis, params) for _ in range(basis.r)],
            [],
            None,
            OrbitPoly.zero(basis, params),
        )
    if len(term.terms) != 1:
        raise ValueError("criterion_check takes a single-monomial term")
    source = source_component(f, mode, params)
    (term_exps,) = term.terms
    w_target = basis.weighted_degree(term_exps)
    w_h = w_target - source.min_weighted_degree() + 2
    if w_h < 4:
        return CriterionResult(
            False,
            reason=(
                f"target degree {w_target} would need a generator of degree {w_h}; "
                "admissible generators have degree at least 4"
            ),
        )
    if not basis.normal_monomials(w_h):
        return CriterionResult(
            False, reason=f"no invariant monomials exist at generator degree {w_h}"
        )
    t = build_transfer(source, w_target, p)
    try:
        row_index = t.target_monomials.index(term_exps)
    except ValueError:
        return CriterionResult(
            False, reason="term is not a normal-form monomial at its degree"
        )
    solved = _solve_subsystem(t, (row_index,), [
        term.coeff(e) for e in t.target_monomials
    ])
    if solved is None:
        return CriterionResult(
            False,
            reason="term row is zero: the term is not in the image of the transfer map",
        )
    raw_conditions, gen_solution = solved
    conditions = _admissible_conditions(raw_conditions, mode, params)
    if conditions is None:
        return CriterionResult(
            False,
            reason="the needed channel vanishes at the critical locus and cannot be used",
        )
    h = OrbitPoly(basis, params, gen_solution)
    gen = Generator(h)
    q = [h.diff_j(i) for i in range(basis.r)]
    change = derivation_apply(f, h, p)
    return CriterionResult(True, gen, q, conditions, None, change)
