"""Exact sparse multivariate polynomials over the rationals.

A polynomial is tied to an ordered tuple of variable names (its variable
set) and stores a mapping from exponent tuples to nonzero ``Fraction``
coefficients.  The zero polynomial has an empty term dict.  All arithmetic
is exact; results are always canonical (no zero terms stored).

Monomials are ordered by graded lexicographic order over the declared
variable order: higher total degree first, ties broken by comparing the
exponent tuples lexicographically.  Term iteration, printing and leading
terms all follow this order, so string forms are canonical.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from operator import add
from typing import Mapping, Sequence

Exponents = tuple[int, ...]


def grlex_key(exps: Exponents) -> tuple:
    """Sort key ranking monomials in graded lexicographic order."""
    return (sum(exps), exps)


class Poly:
    """Sparse polynomial over ``Fraction`` in a fixed ordered variable set."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponents, Fraction] | None = None):
        self.vars: tuple[str, ...] = tuple(variables)
        clean: dict[Exponents, Fraction] = {}
        if terms:
            n = len(self.vars)
            for exps, coeff in terms.items():
                c = Fraction(coeff)
                if c == 0:
                    continue
                e = tuple(exps)
                if len(e) != n or any(k < 0 for k in e):
                    raise ValueError(f"bad exponent tuple {e} for variables {self.vars}")
                clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponents, Fraction]) -> "Poly":
        """Trusted constructor: terms already canonical (internal use only)."""
        obj = cls.__new__(cls)
        obj.vars = variables
        obj.terms = terms
        return obj

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Poly":
        return cls(variables, {})

    @classmethod
    def const(cls, variables: Sequence[str], value) -> "Poly":
        c = Fraction(value)
        if c == 0:
            return cls.zero(variables)
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Poly":
        variables = tuple(variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        exps = [0] * len(variables)
        exps[variables.index(name)] = 1
        return cls(variables, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Exponents, coeff=1) -> "Poly":
        return cls(variables, {tuple(exps): Fraction(coeff)})

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded lexicographic order (leading first)."""
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def leading(self) -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=grlex_key)
        return exps, self.terms[exps]

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_components(self) -> dict[int, "Poly"]:
        """Split by total degree; keys are the degrees present."""
        parts: dict[int, dict[Exponents, Fraction]] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: Poly._raw(self.vars, t) for d, t in sorted(parts.items())}

    def coeff(self, exps: Exponents) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial; error if any variable occurs."""
        if not self.terms:
            return Fraction(0)
        zero = (0,) * len(self.vars)
        if set(self.terms) != {zero}:
            raise ValueError("polynomial is not constant")
        return self.terms[zero]

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable-set mismatch: {self.vars} vs {other.vars}")

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.vars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.vars, frozenset(self.terms.items())))

    def __neg__(self) -> "Poly":
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return Poly.zero(self.vars)
            return Poly._raw(self.vars, {e: k * c for e, k in self.terms.items()})
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.vars)
        out: dict[Exponents, Fraction] = {}
        left, right = self.terms, other.terms
        if len(left) < len(right):
            left, right = right, left
        get = out.get
        for e2, c2 in right.items():
            for e1, c1 in left.items():
                e = tuple(map(add, e1, e2))
                s = get(e)
                s = c1 * c2 if s is None else s + c1 * c2
                if s == 0:
                    del out[e]
                else:
                    out[e] = s
        return Poly._raw(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- calculus and substitution --------------------------------------

    def diff(self, name: str) -> "Poly":
        i = self.vars.index(name)
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
        return Poly._raw(self.vars, out)

    def substitute(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        """Replace variables by polynomials (all over one target variable set).

        Variables absent from ``mapping`` must exist in the target set and
        are carried through unchanged.
        """
        if not mapping:
            return self
        target_vars = next(iter(mapping.values())).vars
        images: list[Poly] = []
        for name in self.vars:
            if name in mapping:
                img = mapping[name]
                if img.vars != target_vars:
                    raise ValueError("substitution images must share one variable set")
                images.append(img)
            else:
                images.append(Poly.variable(target_vars, name))
        out = Poly.zero(target_vars)
        pow_cache: dict[tuple[int, int], Poly] = {}
        for e, c in self.terms.items():
            term = Poly.const(target_vars, c)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                key = (i, k)
                if key not in pow_cache:
                    pow_cache[key] = images[i] ** k
                term = term * pow_cache[key]
            out = out + term
        return out

    def eval_fractions(self, values: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for name, k in zip(self.vars, e):
                if k:
                    v *= Fraction(values[name]) ** k
            total += v
        return total

    def rename_vars(self, new_vars: Sequence[str]) -> "Poly":
        """Reinterpret over a differently named variable tuple of equal length."""
        new_vars = tuple(new_vars)
        if len(new_vars) != len(self.vars):
            raise ValueError("variable count mismatch")
        return Poly(new_vars, self.terms)

    def extend_vars(self, new_vars: Sequence[str]) -> "Poly":
        """Embed into a superset variable tuple (order of shared names kept)."""
        new_vars = tuple(new_vars)
        pos = {name: i for i, name in enumerate(new_vars)}
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * len(new_vars)
            for name, k in zip(self.vars, e):
                if k:
                    ne[pos[name]] = k
            out[tuple(ne)] = c
        return Poly(new_vars, out)

    # -- normalization helpers ------------------------------------------

    def integer_content(self) -> Fraction:
        """Positive rational c such that self/c has integer, coprime coefficients."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive_part(self) -> "Poly":
        """Divide out integer content and normalize the leading sign to +."""
        if not self.terms:
            return self
        c = self.integer_content()
        if self.leading()[1] < 0:
            c = -c
        return self * (1 / c)

    def content_and_primitive(self) -> tuple[Fraction, "Poly"]:
        """Split as c * prim with prim primitive and positive leading sign."""
        if not self.terms:
            return Fraction(1), self
        c = self.integer_content()
        if self.leading()[1] < 0:
            c = -c
        return c, self * (1 / c)

    def trailing(self) -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no trailing term")
        exps = min(self.terms, key=grlex_key)
        return exps, self.terms[exps]

    # -- display ---------------------------------------------------------

    def monomial_str(self, exps: Exponents) -> str:
        parts = []
        for name, k in zip(self.vars, exps):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts) if parts else "1"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for exps, coeff in self.sorted_terms():
            mono = self.monomial_str(exps)
            if mono == "1":
                body = str(abs(coeff))
            elif abs(coeff) == 1:
                body = mono
            else:
                body = f"{abs(coeff)}*{mono}"
            if not chunks:
                chunks.append(body if coeff > 0 else f"-{body}")
            else:
                chunks.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"Poly({self.vars!r}, {str(self)!r})"


def divides(divisor: Exponents, multiple: Exponents) -> bool:
    return all(a <= b for a, b in zip(divisor, multiple))


def exps_sub(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x - y for x, y in zip(a, b))


def exps_add(a: Exponents, b: Exponents) -> Exponents:
    return tuple(map(add, a, b))


def try_divide_exact(p: Poly, d: Poly) -> Poly | None:
    """Return q with p == q*d, or None when d does not divide p exactly."""
    if d.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.is_zero():
        return Poly.zero(p.vars)
    if p.vars != d.vars:
        raise ValueError("variable-set mismatch")
    if d.total_degree() == 0 and len(d) == 1:
        return p * (1 / d.constant_value())
    # cheap necessary conditions before attempting the full division
    lead_e, lead_c = d.leading()
    p_lead, _ = p.leading()
    if not divides(lead_e, p_lead):
        return None
    if not divides(d.trailing()[0], p.trailing()[0]):
        return None
    d_items = list(d.terms.items())
    quotient: dict[Exponents, Fraction] = {}
    rem = dict(p.terms)
    while rem:
        re = max(rem, key=grlex_key)
        rc = rem[re]
        if not divides(lead_e, re):
            return None
        qe = exps_sub(re, lead_e)
        qc = rc / lead_c
        quotient[qe] = qc
        for de, dc in d_items:
            ke = exps_add(qe, de)
            s = rem.get(ke)
            s = -qc * dc if s is None else s - qc * dc
            if s == 0:
                rem.pop(ke, None)
            else:
                rem[ke] = s
    return Poly._raw(p.vars, quotient)


def monomials_of_degree(variables: Sequence[str], degree: int) -> list[Exponents]:
    """All exponent tuples of the given total degree, descending grlex."""
    n = len(tuple(variables))
    out: list[Exponents] = []

    def rec(prefix: list[int], remaining: int, slot: int) -> None:
        if slot == n - 1:
            out.append(tuple(prefix + [remaining]))
            return
        for k in range(remaining, -1, -1):
            rec(prefix + [k], remaining - k, slot + 1)

    if n == 0:
        return [()] if degree == 0 else []
    rec([], degree, 0)
    out.sort(key=grlex_key, reverse=True)
    return out
