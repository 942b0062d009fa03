"""Rational functions over a polynomial ring with exact equality testing.

Externally a ``RatFun`` is a numerator and a nonzero denominator ``Poly``
in canonical form: joint integer content removed, denominator leading
coefficient positive.  Equality is decided by cross-multiplication; full
multivariate gcd reduction is deliberately not attempted.

Internally the denominator is kept as a multiset of primitive factors
("atoms"): products and common-denominator sums then never expand the
denominator, and cancellation is a sequence of exact trial divisions of
the numerator by atoms.  This keeps coefficient growth linear in the
number of distinct atoms instead of exponential, which matters once
staged eliminations start composing solutions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .poly import Poly, grlex_key, try_divide_exact


def _atom_key(p: Poly) -> tuple:
    items = sorted(p.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)
    return (p.total_degree(), tuple((e, (c.numerator, c.denominator)) for e, c in items))


class RatFun:
    __slots__ = ("_n", "_fac", "_canon")

    def __init__(self, num: Poly, den: Poly | None = None):
        if den is not None:
            if num.vars != den.vars:
                raise ValueError("numerator and denominator variable sets differ")
            if den.is_zero():
                raise ZeroDivisionError("zero denominator in rational function")
            content, prim = den.content_and_primitive()
            num = num * (1 / content)
            fac: tuple[tuple[Poly, int], ...] = ()
            if prim.total_degree() > 0:
                fac = ((prim, 1),)
        else:
            fac = ()
        self._n = num
        self._fac = ()
        self._canon = None
        self._set(num, fac)

    @classmethod
    def _raw(cls, num: Poly, fac: Sequence[tuple[Poly, int]]) -> "RatFun":
        obj = cls.__new__(cls)
        obj._canon = None
        obj._set(num, fac)
        return obj

    # numerators beyond this size skip cancellation attempts; correctness is
    # unaffected (the fraction is simply kept unreduced)
    _CANCEL_LIMIT = 600

    def _set(self, num: Poly, fac: Sequence[tuple[Poly, int]]) -> None:
        if num.is_zero():
            self._n = num
            self._fac = ()
            return
        # coalesce equal atoms first: downstream atom matching assumes each
        # atom appears exactly once
        merged: list[tuple[Poly, int]] = []
        for atom, mult in fac:
            if mult == 0:
                continue
            hit = next((k for k, (p, _) in enumerate(merged) if p == atom), None)
            if hit is None:
                merged.append((atom, mult))
            else:
                merged[hit] = (atom, merged[hit][1] + mult)
        kept: list[tuple[Poly, int]] = []
        attempt = len(num) <= self._CANCEL_LIMIT
        for atom, mult in merged:
            while attempt and mult > 0:
                q = try_divide_exact(num, atom)
                if q is None:
                    break
                num = q
                mult -= 1
            if mult > 0:
                kept.append((atom, mult))
        kept.sort(key=lambda am: _atom_key(am[0]))
        self._n = num
        self._fac = tuple(kept)

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "RatFun":
        return cls(Poly.zero(variables))

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "RatFun":
        return cls(Poly.const(variables, value))

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFun":
        return cls(p)

    @property
    def vars(self) -> tuple[str, ...]:
        return self._n.vars

    # -- canonical numerator / denominator -------------------------------

    def _canonical(self) -> tuple[Poly, Poly]:
        if self._canon is None:
            den = Poly.const(self._n.vars, 1)
            for atom, mult in self._fac:
                den = den * atom**mult
            num = self._n
            if num.is_zero():
                self._canon = (num, Poly.const(self._n.vars, 1))
            else:
                c_num = num.integer_content()
                c_den = den.integer_content()
                if den.leading()[1] < 0:
                    c_den = -c_den
                ratio = c_num / c_den
                num = num * (1 / c_num) * Fraction(ratio.numerator)
                den = den * (1 / c_den) * Fraction(ratio.denominator)
                self._canon = (num, den)
        return self._canon

    @property
    def num(self) -> Poly:
        return self._canonical()[0]

    @property
    def den(self) -> Poly:
        return self._canonical()[1]

    def num_primitive(self) -> Poly:
        """Numerator up to a nonzero rational factor (cheap accessor)."""
        return self._n.primitive_part()

    # -- queries ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def __bool__(self) -> bool:
        return not self._n.is_zero()

    def is_polynomial(self) -> bool:
        return not self._fac

    def as_poly(self) -> Poly:
        if self._fac:
            raise ValueError(f"not a polynomial: {self}")
        return self._n

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFun(other if isinstance(other, Poly) else Poly.const(self.vars, other))
        if not isinstance(other, RatFun):
            return NotImplemented
        mine, theirs = _cancel_shared(self._fac, other._fac)
        left = self._n
        for atom, mult in theirs:
            left = left * atom**mult
        right = other._n
        for atom, mult in mine:
            right = right * atom**mult
        return left == right

    __hash__ = None

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Poly):
            return RatFun(other)
        if isinstance(other, (int, Fraction)):
            return RatFun.const(self.vars, other)
        raise TypeError(f"cannot combine RatFun with {type(other)!r}")

    def __add__(self, other) -> "RatFun":
        g = self._coerce(other)
        if self._fac == g._fac:
            return RatFun._raw(self._n + g._n, self._fac)
        union = _atom_union(self._fac, g._fac)
        lift_self = self._n
        for atom, mult in _atom_diff(union, self._fac):
            lift_self = lift_self * atom**mult
        lift_other = g._n
        for atom, mult in _atom_diff(union, g._fac):
            lift_other = lift_other * atom**mult
        return RatFun._raw(lift_self + lift_other, union)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        out = RatFun.__new__(RatFun)
        out._n = -self._n
        out._fac = self._fac
        out._canon = None
        return out

    def __sub__(self, other) -> "RatFun":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFun":
        return (-self) + self._coerce(other)

    def __mul__(self, other) -> "RatFun":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFun.zero(self.vars)
            out = RatFun.__new__(RatFun)
            out._n = self._n * other
            out._fac = self._fac
            out._canon = None
            return out
        g = self._coerce(other)
        return RatFun._raw(self._n * g._n, _atom_sum(self._fac, g._fac))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFun":
        g = self._coerce(other)
        if g.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        num = self._n
        for atom, mult in g._fac:
            num = num * atom**mult
        content, prim = g._n.content_and_primitive()
        num = num * (1 / content)
        fac = list(self._fac)
        if prim.total_degree() > 0:
            fac.append((prim, 1))
        return RatFun._raw(num, fac)

    def __rtruediv__(self, other) -> "RatFun":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "RatFun":
        if k < 0:
            inv = RatFun.const(self.vars, 1) / self
            return inv ** (-k)
        out = RatFun.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- substitution ------------------------------------------------------

    def substitute(self, mapping: Mapping[str, Poly]) -> "RatFun":
        num = self._n.substitute(mapping)
        fac: list[tuple[Poly, int]] = []
        for atom, mult in self._fac:
            img = atom.substitute(mapping)
            if img.is_zero():
                raise ZeroDivisionError("substitution sends denominator to zero")
            content, prim = img.content_and_primitive()
            num = num * (1 / content) ** mult
            if prim.total_degree() > 0:
                fac.append((prim, mult))
        return RatFun._raw(num, fac)

    def eval_fractions(self, values: Mapping[str, Fraction]) -> Fraction:
        d = Fraction(1)
        for atom, mult in self._fac:
            v = atom.eval_fractions(values)
            if v == 0:
                raise ZeroDivisionError("denominator vanishes at the given point")
            d *= v**mult
        return self._n.eval_fractions(values) / d

    # -- display -----------------------------------------------------------

    def __str__(self) -> str:
        num, den = self._canonical()
        if den == Poly.const(num.vars, 1):
            return str(num)
        return f"({num})/({den})"

    def __repr__(self) -> str:
        return f"RatFun({str(self)!r})"


def _atom_union(
    a: Sequence[tuple[Poly, int]], b: Sequence[tuple[Poly, int]]
) -> list[tuple[Poly, int]]:
    out: list[tuple[Poly, int]] = []
    bb = list(b)
    for atom, mult in a:
        match = next((j for j, (p, _) in enumerate(bb) if p == atom), None)
        if match is None:
            out.append((atom, mult))
        else:
            out.append((atom, max(mult, bb[match][1])))
            bb.pop(match)
    out.extend(bb)
    return out


def _atom_sum(
    a: Sequence[tuple[Poly, int]], b: Sequence[tuple[Poly, int]]
) -> list[tuple[Poly, int]]:
    out: list[tuple[Poly, int]] = []
    bb = list(b)
    for atom, mult in a:
        match = next((j for j, (p, _) in enumerate(bb) if p == atom), None)
        if match is None:
            out.append((atom, mult))
        else:
            out.append((atom, mult + bb[match][1]))
            bb.pop(match)
    out.extend(bb)
    return out


def _atom_diff(
    total: Sequence[tuple[Poly, int]], part: Sequence[tuple[Poly, int]]
) -> list[tuple[Poly, int]]:
    out: list[tuple[Poly, int]] = []
    for atom, mult in total:
        have = next((m for p, m in part if p == atom), 0)
        if mult > have:
            out.append((atom, mult - have))
    return out


def _cancel_shared(
    a: Sequence[tuple[Poly, int]], b: Sequence[tuple[Poly, int]]
) -> tuple[list[tuple[Poly, int]], list[tuple[Poly, int]]]:
    """Remove atom-wise shared factors from both lists (for equality tests)."""
    aa = []
    bb = list(b)
    for atom, mult in a:
        match = next((j for j, (p, _) in enumerate(bb) if p == atom), None)
        if match is None:
            aa.append((atom, mult))
            continue
        other = bb[match][1]
        common = min(mult, other)
        if mult - common:
            aa.append((atom, mult - common))
        if other - common:
            bb[match] = (bb[match][0], other - common)
        else:
            bb.pop(match)
    return aa, bb
