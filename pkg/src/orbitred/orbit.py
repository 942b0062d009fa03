"""Graded potentials on the orbit space and the induced derivation calculus.

An ``OrbitPoly`` is a polynomial in the invariant names whose coefficients
are rational functions of the declared parameters; it is kept in syzygy
normal form and graded by weighted degree (the underlying x-degree).  A
gradient coordinate change with invariant generating function H acts on
such potentials as the derivation

    L_H F = sum_{a,b} (dF/dJ_a) P_ab (dH/dJ_b),

and its time-one flow as the exponential exp(L_H), which terminates inside
any weighted-degree truncation because L_H raises weighted degree by
deg(H) - 2 >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .invariants import InvariantBasis, PMatrix
from .poly import Exponents, Poly, divides, exps_add, exps_sub, grlex_key
from .ratfun import RatFun


@dataclass(frozen=True)
class ParameterSpec:
    """Declared coefficient parameters; critical ones vanish at the transition."""

    names: tuple[str, ...]
    critical: frozenset[str] = frozenset()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate parameter names")
        if not self.critical <= set(self.names):
            raise ValueError("critical parameters must be declared parameters")

    @classmethod
    def make(cls, names: Sequence[str], critical: Iterable[str] = ()) -> "ParameterSpec":
        return cls(tuple(names), frozenset(critical))

    @property
    def generic(self) -> tuple[str, ...]:
        return tuple(n for n in self.names if n not in self.critical)


def weighted_degree(exps: Exponents, degrees: Sequence[int]) -> int:
    if len(exps) != len(degrees):
        raise ValueError("exponent tuple does not match the weight vector")
    return sum(d * e for d, e in zip(degrees, exps))


class OrbitPoly:
    """Potential in invariant coordinates over the parameter fraction field."""

    __slots__ = ("basis", "params", "terms")

    def __init__(
        self,
        basis: InvariantBasis,
        params: ParameterSpec,
        terms: Mapping[Exponents, RatFun] | None = None,
        _normal: bool = False,
    ):
        self.basis = basis
        self.params = params
        clean: dict[Exponents, RatFun] = {}
        if terms:
            for exps, coeff in terms.items():
                if coeff.is_zero():
                    continue
                e = tuple(exps)
                if len(e) != basis.r:
                    raise ValueError("exponent tuple does not match the invariant count")
                if coeff.vars != params.names:
                    raise ValueError("coefficient is not over the declared parameters")
                clean[e] = coeff
        self.terms = clean
        if not _normal:
            self._reduce_syzygies()

    def _reduce_syzygies(self) -> None:
        rules = self.basis.syzygies
        if not rules or not self.terms:
            return
        pending = dict(self.terms)
        out: dict[Exponents, RatFun] = {}
        while pending:
            exps = max(pending, key=grlex_key)
            coeff = pending.pop(exps)
            rule = next((r for r in rules if divides(r.lhs, exps)), None)
            if rule is None:
                if exps in out:
                    s = out[exps] + coeff
                    if s.is_zero():
                        del out[exps]
                    else:
                        out[exps] = s
                elif not coeff.is_zero():
                    out[exps] = coeff
                continue
            cofactor = exps_sub(exps, rule.lhs)
            for re, rc in rule.rhs.terms.items():
                ne = exps_add(cofactor, re)
                add = coeff * rc
                if ne in pending:
                    s = pending[ne] + add
                    if s.is_zero():
                        del pending[ne]
                    else:
                        pending[ne] = s
                else:
                    pending[ne] = add
        self.terms = out

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, basis: InvariantBasis, params: ParameterSpec) -> "OrbitPoly":
        return cls(basis, params, {}, _normal=True)

    @classmethod
    def from_jpoly(cls, basis: InvariantBasis, params: ParameterSpec, jpoly: Poly) -> "OrbitPoly":
        """Lift a rational-coefficient polynomial in the invariants."""
        if jpoly.vars != basis.names:
            raise ValueError("polynomial is not over the invariant names")
        return cls(
            basis,
            params,
            {e: RatFun.const(params.names, c) for e, c in jpoly.terms.items()},
        )

    @classmethod
    def monomial(
        cls, basis: InvariantBasis, params: ParameterSpec, exps: Exponents, coeff: RatFun
    ) -> "OrbitPoly":
        return cls(basis, params, {tuple(exps): coeff})

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, exps: Exponents) -> RatFun:
        return self.terms.get(tuple(exps), RatFun.zero(self.params.names))

    def weighted_degrees(self) -> list[int]:
        return sorted({self.basis.weighted_degree(e) for e in self.terms})

    def weighted_components(self) -> dict[int, "OrbitPoly"]:
        parts: dict[int, dict[Exponents, RatFun]] = {}
        for e, c in self.terms.items():
            parts.setdefault(self.basis.weighted_degree(e), {})[e] = c
        return {
            w: OrbitPoly(self.basis, self.params, t, _normal=True)
            for w, t in sorted(parts.items())
        }

    def component(self, w: int) -> "OrbitPoly":
        terms = {
            e: c for e, c in self.terms.items() if self.basis.weighted_degree(e) == w
        }
        return OrbitPoly(self.basis, self.params, terms, _normal=True)

    def is_weighted_homogeneous(self) -> bool:
        return len({self.basis.weighted_degree(e) for e in self.terms}) <= 1

    def min_weighted_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero potential has no degree")
        return min(self.basis.weighted_degree(e) for e in self.terms)

    def truncate(self, n: int) -> "OrbitPoly":
        terms = {e: c for e, c in self.terms.items() if self.basis.weighted_degree(e) <= n}
        return OrbitPoly(self.basis, self.params, terms, _normal=True)

    def sorted_terms(self) -> list[tuple[Exponents, RatFun]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrbitPoly):
            return NotImplemented
        if self.basis is not other.basis or set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    __hash__ = None

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "OrbitPoly") -> None:
        if self.basis is not other.basis or self.params != other.params:
            raise ValueError("orbit polynomials live over different bases or parameters")

    def __add__(self, other: "OrbitPoly") -> "OrbitPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return OrbitPoly(self.basis, self.params, out, _normal=True)

    def __neg__(self) -> "OrbitPoly":
        return OrbitPoly(
            self.basis, self.params, {e: -c for e, c in self.terms.items()}, _normal=True
        )

    def __sub__(self, other: "OrbitPoly") -> "OrbitPoly":
        return self + (-other)

    def scale(self, factor: RatFun | Fraction | int) -> "OrbitPoly":
        if not isinstance(factor, RatFun):
            factor = RatFun.const(self.params.names, factor)
        if factor.is_zero():
            return OrbitPoly.zero(self.basis, self.params)
        return OrbitPoly(
            self.basis, self.params, {e: c * factor for e, c in self.terms.items()}, _normal=True
        )

    def __mul__(self, other):
        if isinstance(other, OrbitPoly):
            self._check(other)
            out: dict[Exponents, RatFun] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = exps_add(e1, e2)
                    add = c1 * c2
                    s = out.get(e)
                    s = add if s is None else s + add
                    if s.is_zero():
                        out.pop(e, None)
                    else:
                        out[e] = s
            return OrbitPoly(self.basis, self.params, out)
        if isinstance(other, Poly) and other.vars == self.basis.names:
            return self * OrbitPoly.from_jpoly(self.basis, self.params, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "OrbitPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = OrbitPoly(
            self.basis,
            self.params,
            {(0,) * self.basis.r: RatFun.const(self.params.names, 1)},
            _normal=True,
        )
        for _ in range(k):
            result = result * self
        return result

    # -- calculus ------------------------------------------------------------

    def diff_j(self, index: int) -> "OrbitPoly":
        """Partial derivative with respect to the index-th invariant."""
        out: dict[Exponents, RatFun] = {}
        for e, c in self.terms.items():
            if e[index] == 0:
                continue
            ne = list(e)
            ne[index] -= 1
            out[tuple(ne)] = c * e[index]
        return OrbitPoly(self.basis, self.params, out, _normal=True)

    def substitute_params(self, mapping: Mapping[str, Poly]) -> "OrbitPoly":
        out: dict[Exponents, RatFun] = {}
        for e, c in self.terms.items():
            nc = c.substitute(mapping)
            if not nc.is_zero():
                out[e] = nc
        return OrbitPoly(self.basis, self.params, out, _normal=True)

    def at_critical_locus(self) -> "OrbitPoly":
        """Substitute zero for every critical parameter."""
        if not self.params.critical:
            return self
        mapping = {
            name: Poly.zero(self.params.names) for name in sorted(self.params.critical)
        }
        return self.substitute_params(mapping)

    # -- display ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for exps, coeff in self.sorted_terms():
            mono = Poly.monomial(self.basis.names, exps).monomial_str(exps)
            c = str(coeff)
            if mono == "1":
                chunks.append(f"({c})")
            else:
                chunks.append(f"({c})*{mono}")
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"OrbitPoly({str(self)!r})"


@dataclass(frozen=True)
class Generator:
    """Weighted-homogeneous generating function of a gradient coordinate change.

    Quadratic generators are excluded: they induce linear changes of
    coordinates, which are presumed already spent on the quadratic part.
    """

    h: OrbitPoly

    def __post_init__(self):
        if self.h.is_zero():
            return
        if not self.h.is_weighted_homogeneous():
            raise ValueError("generator must be weighted-homogeneous")
        if self.h.min_weighted_degree() < 4:
            raise ValueError("generator degree must be at least 4")

    @property
    def degree(self) -> int | None:
        return None if self.h.is_zero() else self.h.min_weighted_degree()

    def is_zero(self) -> bool:
        return self.h.is_zero()


def u_vector(f: OrbitPoly, p: PMatrix) -> list[OrbitPoly]:
    """U_i = sum_k (dF/dJ_k) P_ki, each in normal form."""
    if p.basis is not f.basis:
        raise ValueError("potential and P-matrix use different bases")
    r = f.basis.r
    grads = [f.diff_j(k) for k in range(r)]
    out = []
    for i in range(r):
        acc = OrbitPoly.zero(f.basis, f.params)
        for k in range(r):
            if grads[k].is_zero() or p.entries[k][i].is_zero():
                continue
            acc = acc + grads[k] * p.entries[k][i]
        out.append(acc)
    return out


def derivation_apply(f: OrbitPoly, h: OrbitPoly | Generator, p: PMatrix) -> OrbitPoly:
    """First-order change of f under the gradient flow generated by h.

    Computes sum_{a,b} (df/dJ_a) P_ab (dh/dJ_b) in syzygy normal form; by
    symmetry of P this is symmetric in (f, h).
    """
    if isinstance(h, Generator):
        h = h.h
    if p.basis is not f.basis or h.basis is not f.basis:
        raise ValueError("dimension mismatch between potential, generator and P-matrix")
    r = f.basis.r
    df = [f.diff_j(a) for a in range(r)]
    dh = [h.diff_j(b) for b in range(r)]
    acc = OrbitPoly.zero(f.basis, f.params)
    for a in range(r):
        if df[a].is_zero():
            continue
        for b in range(r):
            if dh[b].is_zero() or p.entries[a][b].is_zero():
                continue
            acc = acc + (df[a] * p.entries[a][b]) * dh[b]
    return acc


def lie_transform(f: OrbitPoly, h: OrbitPoly | Generator, p: PMatrix, n: int) -> OrbitPoly:
    """Truncation to weighted degree <= n of exp(L_h) applied to f.

    This is the exact pushforward of f under the time-one flow of the
    gradient of h, computed entirely in orbit-space coordinates.  The
    series terminates within the truncation because each application of
    L_h raises weighted degree by deg(h) - 2 >= 2.
    """
    gen = h if isinstance(h, Generator) else Generator(h)
    if gen.is_zero():
        return f.truncate(n)
    raise_by = gen.degree - 2
    result = OrbitPoly.zero(f.basis, f.params)
    term = f.truncate(n)
    k = 0
    while not term.is_zero():
        result = result + term
        k += 1
        # components that would leave the truncation window are dropped
        # before multiplying, not after; the result is identical
        reachable = term.truncate(n - raise_by)
        if reachable.is_zero():
            break
        term = derivation_apply(reachable, gen.h, p).truncate(n).scale(Fraction(1, k))
    return result


def stability_order(basis: InvariantBasis) -> int:
    """Truncation order that keeps the potential convex at large radius: 2*d_r."""
    return 2 * max(basis.degrees)


def general_potential(
    basis: InvariantBasis, n: int, params_critical: Iterable[str] = ()
) -> tuple[OrbitPoly, list[str], ParameterSpec]:
    """Most general invariant potential of weighted degree between d_1 and n.

    One fresh parameter per normal-form monomial, named c{degree}_{index}
    with the index following the canonical monomial order inside each
    degree.  Returns the potential, the ordered parameter names, and the
    parameter spec (criticality applied to the given names).
    """
    if n < min(basis.degrees):
        raise ValueError("truncation order is below the smallest invariant degree")
    monomials: list[tuple[int, Exponents]] = []
    for w in range(min(basis.degrees), n + 1):
        for exps in basis.normal_monomials(w):
            if exps != (0,) * basis.r:
                monomials.append((w, exps))
    names: list[str] = []
    per_degree_index: dict[int, int] = {}
    for w, _ in monomials:
        per_degree_index[w] = per_degree_index.get(w, 0) + 1
        names.append(f"c{w}_{per_degree_index[w]}")
    spec = ParameterSpec.make(names, params_critical)
    terms = {
        exps: RatFun(Poly.variable(spec.names, name))
        for (w, exps), name in zip(monomials, names)
    }
    return OrbitPoly(basis, spec, terms), names, spec
