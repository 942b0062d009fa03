"""Minimal integrity bases: syzygy rewriting, invariant expression, P-matrix.

An ``InvariantBasis`` packages the coordinates of the orbit map: named
generating invariants as explicit polynomials in the underlying variables,
their degrees, and oriented rewrite rules for the algebraic relations among
them.  Everything downstream (gradings, transfer matrices, reduction
stages) works in the image coordinates and relies on the normal form
computed here being canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import Exponents, Poly, divides, exps_add, exps_sub, grlex_key


class NotExpressibleError(ValueError):
    """A polynomial is not a polynomial combination of the basis invariants."""


@dataclass(frozen=True)
class SyzygyRule:
    """Oriented rewrite rule: the monomial ``lhs`` rewrites to ``rhs``.

    Orientation requires ``lhs`` to dominate every monomial of ``rhs`` in
    the fixed graded-lex order, which makes any rule set terminating.
    """

    lhs: Exponents
    rhs: Poly

    def __post_init__(self):
        key = grlex_key(self.lhs)
        for exps in self.rhs.terms:
            if grlex_key(exps) >= key:
                raise ValueError(
                    f"rule not oriented: lhs {self.lhs} does not dominate rhs monomial {exps}"
                )


class InvariantBasis:
    """Generating invariants of a group action, with their relations."""

    def __init__(
        self,
        x_vars: Sequence[str],
        invariants: Sequence[tuple[str, Poly]],
        syzygies: Sequence[SyzygyRule] = (),
        group_generators: Sequence[Sequence[Sequence[Fraction | int]]] | None = None,
    ):
        self.x_vars = tuple(x_vars)
        self.names = tuple(name for name, _ in invariants)
        self.polys = tuple(p for _, p in invariants)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate invariant names")
        if set(self.names) & set(self.x_vars):
            raise ValueError("invariant names must be disjoint from the x variables")
        degrees = []
        for name, p in invariants:
            if p.vars != self.x_vars:
                raise ValueError(f"invariant {name} is not over the declared x variables")
            if p.is_zero() or not p.is_homogeneous():
                raise ValueError(f"invariant {name} must be homogeneous and nonzero")
            degrees.append(p.total_degree())
        if any(d2 < d1 for d1, d2 in zip(degrees, degrees[1:])):
            raise ValueError("invariants must be listed with non-decreasing degrees")
        self.degrees = tuple(degrees)
        self.syzygies = tuple(syzygies)
        for rule in self.syzygies:
            if rule.rhs.vars != self.names:
                raise ValueError("syzygy rhs must be over the invariant names")
            w = self.weighted_degree(rule.lhs)
            for exps in rule.rhs.terms:
                if self.weighted_degree(exps) != w:
                    raise ValueError("syzygy is not weighted-degree homogeneous")
            residual = self.expand(Poly.monomial(self.names, rule.lhs) - rule.rhs)
            if not residual.is_zero():
                raise ValueError(f"unsound syzygy: {rule.lhs} -> {rule.rhs} is nonzero in x")
        if group_generators is not None:
            n = len(self.x_vars)
            group_generators = tuple(
                tuple(tuple(Fraction(v) for v in row) for row in mat) for mat in group_generators
            )
            for mat in group_generators:
                if len(mat) != n or any(len(row) != n for row in mat):
                    raise ValueError("group generator matrices must be n x n")
        self.group_generators = group_generators

    # -- gradings ------------------------------------------------------

    @property
    def r(self) -> int:
        return len(self.names)

    def weighted_degree(self, exps: Exponents) -> int:
        """x-degree of a J-monomial: sum of d_a * e_a."""
        if len(exps) != self.r:
            raise ValueError("exponent tuple does not match the invariant count")
        return sum(d * e for d, e in zip(self.degrees, exps))

    def weighted_monomials(self, w: int) -> list[Exponents]:
        """All J-exponent tuples of weighted degree w, descending grlex."""
        out: list[Exponents] = []

        def rec(prefix: list[int], remaining: int, slot: int) -> None:
            if slot == self.r:
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            d = self.degrees[slot]
            for k in range(remaining // d, -1, -1):
                rec(prefix + [k], remaining - k * d, slot + 1)

        rec([], w, 0)
        out.sort(key=grlex_key, reverse=True)
        return out

    def normal_monomials(self, w: int) -> list[Exponents]:
        """Weighted-degree-w monomials not divisible by any syzygy lhs."""
        return [
            exps
            for exps in self.weighted_monomials(w)
            if not any(divides(rule.lhs, exps) for rule in self.syzygies)
        ]

    # -- expansion into x-space ------------------------------------------

    def expand(self, jpoly: Poly) -> Poly:
        """Expand a polynomial in the invariant names into the x variables."""
        if jpoly.vars != self.names:
            raise ValueError("polynomial is not over the invariant names")
        mapping = {name: p for name, p in zip(self.names, self.polys)}
        return jpoly.substitute(mapping)

    # -- rewriting ---------------------------------------------------------

    def normal_form(self, jpoly: Poly) -> Poly:
        return normal_form(jpoly, self.syzygies)

    def gradients(self) -> list[list[Poly]]:
        return [[p.diff(v) for v in self.x_vars] for p in self.polys]


def normal_form(jpoly: Poly, rules: Sequence[SyzygyRule]) -> Poly:
    """Rewrite until no monomial is divisible by any rule's left side.

    Terminates because every rule replaces a monomial by strictly smaller
    ones in the graded-lex well-order; idempotent by construction.
    """
    if not rules:
        return jpoly
    p = jpoly
    while True:
        hit = None
        for exps in sorted(p.terms, key=grlex_key, reverse=True):
            for rule in rules:
                if divides(rule.lhs, exps):
                    hit = (exps, rule)
                    break
            if hit:
                break
        if hit is None:
            return p
        exps, rule = hit
        coeff = p.terms[exps]
        cofactor = exps_sub(exps, rule.lhs)
        replacement = Poly(
            p.vars, {exps_add(cofactor, re): coeff * rc for re, rc in rule.rhs.terms.items()}
        )
        p = p - Poly.monomial(p.vars, exps, coeff) + replacement


def check_invariance(basis: InvariantBasis) -> tuple[bool, tuple[int, int] | None]:
    """Verify J_a(T_g x) = J_a(x) for every generator and invariant.

    Returns (True, None) on success, else (False, (generator_index,
    invariant_index)) for the first failing pair.
    """
    if basis.group_generators is None:
        raise ValueError("basis has no group generators to check")
    xs = basis.x_vars
    for gi, mat in enumerate(basis.group_generators):
        mapping = {}
        for i, name in enumerate(xs):
            image = Poly.zero(xs)
            for j, other in enumerate(xs):
                if mat[i][j] != 0:
                    image = image + Poly.variable(xs, other) * mat[i][j]
            mapping[name] = image
        for ji, p in enumerate(basis.polys):
            if p.substitute(mapping) != p:
                return False, (gi, ji)
    return True, None


def express_in_invariants(xpoly: Poly, basis: InvariantBasis) -> Poly:
    """Write an invariant x-polynomial as a polynomial in the basis invariants.

    Each homogeneous component is matched against the normal-form
    J-monomials of equal weighted degree by exact linear solving; the
    result is in syzygy normal form.  Raises NotExpressibleError when no
    polynomial combination reproduces the input.
    """
    if xpoly.vars != basis.x_vars:
        raise ValueError("input is not over the basis x variables")
    result = Poly.zero(basis.names)
    for degree, component in xpoly.homogeneous_components().items():
        result = result + _express_homogeneous(component, degree, basis)
    return result


def _express_homogeneous(component: Poly, degree: int, basis: InvariantBasis) -> Poly:
    candidates = basis.normal_monomials(degree)
    if not candidates:
        if component.is_zero():
            return Poly.zero(basis.names)
        raise NotExpressibleError(f"no invariant monomials at degree {degree}")
    expansions = [basis.expand(Poly.monomial(basis.names, exps)) for exps in candidates]
    x_monomials = sorted(
        {e for p in expansions for e in p.terms} | set(component.terms),
        key=grlex_key,
        reverse=True,
    )
    # exact dense Gaussian elimination over Fraction
    rows = [
        [p.terms.get(xm, Fraction(0)) for p in expansions] + [component.terms.get(xm, Fraction(0))]
        for xm in x_monomials
    ]
    ncols = len(candidates)
    pivot_of_col: dict[int, int] = {}
    row_used = [False] * len(rows)
    for col in range(ncols):
        pivot = next(
            (i for i in range(len(rows)) if not row_used[i] and rows[i][col] != 0), None
        )
        if pivot is None:
            continue
        row_used[pivot] = True
        pivot_of_col[col] = pivot
        pv = rows[pivot][col]
        for i in range(len(rows)):
            if i != pivot and rows[i][col] != 0:
                factor = rows[i][col] / pv
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[pivot])]
    for i in range(len(rows)):
        if not row_used[i] and rows[i][ncols] != 0:
            raise NotExpressibleError("polynomial is not an invariant combination of the basis")
    coeffs = {}
    for col, row in pivot_of_col.items():
        value = rows[row][ncols] / rows[row][col]
        if value != 0:
            coeffs[candidates[col]] = value
    return Poly(basis.names, coeffs)


@dataclass(frozen=True)
class PMatrix:
    """Gram matrix of invariant gradients, expressed in the invariants."""

    basis: InvariantBasis
    entries: tuple[tuple[Poly, ...], ...]

    def __getitem__(self, idx: tuple[int, int]) -> Poly:
        return self.entries[idx[0]][idx[1]]

    @property
    def size(self) -> int:
        return len(self.entries)


def p_matrix(basis: InvariantBasis) -> PMatrix:
    """Entry (i,h) is <grad J_i, grad J_h> rewritten in the invariants."""
    grads = basis.gradients()
    r = basis.r
    entries: list[list[Poly]] = [[Poly.zero(basis.names)] * r for _ in range(r)]
    for i in range(r):
        for h in range(i, r):
            dot = Poly.zero(basis.x_vars)
            for gi, gh in zip(grads[i], grads[h]):
                dot = dot + gi * gh
            value = basis.normal_form(express_in_invariants(dot, basis))
            entries[i][h] = value
            entries[h][i] = value
    return PMatrix(basis, tuple(tuple(row) for row in entries))
