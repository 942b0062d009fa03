from __future__ import annotations

import random
from fractions import Fraction

import pytest

from orbitred.poly import Poly, grlex_key, monomials_of_degree, try_divide_exact
from orbitred.parser import parse_poly

XYZ = ("x", "y", "z")


def brute_force_product(p: Poly, q: Poly) -> Poly:
    """Independent multiplication oracle: accumulate term-by-term products."""
    acc = Poly.zero(p.vars)
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            acc = acc + Poly(p.vars, {tuple(a + b for a, b in zip(e1, e2)): c1 * c2})
    return acc


def random_poly(rng: random.Random, variables, max_degree=8, max_terms=6) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = tuple(rng.randint(0, max_degree // 2) for _ in variables)
        terms[exps] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return Poly(variables, terms)


def test_difference_of_squares():
    jv = ("J1", "J2")
    p = parse_poly("(J1 + J2) * (J1 - J2)", jv)
    assert p == parse_poly("J1^2 - J2^2", jv)


def test_additive_identity():
    p = parse_poly("3*x^2*y - 7/2*z + 1", XYZ)
    assert p + Poly.zero(XYZ) == p


def test_cube_expansion_matches_naive_oracle():
    base = parse_poly("x^2 + y^2 + z^2", XYZ)
    cube = base**3
    oracle = brute_force_product(brute_force_product(base, base), base)
    assert cube == oracle
    # spot values: multinomial coefficients
    assert cube.coeff((6, 0, 0)) == 1
    assert cube.coeff((4, 2, 0)) == 3
    assert cube.coeff((2, 2, 2)) == 6


def test_ring_laws_on_random_inputs():
    rng = random.Random(1234)
    for _ in range(1000):
        p = random_poly(rng, XYZ)
        q = random_poly(rng, XYZ)
        r = random_poly(rng, XYZ)
        assert (p + q) + r == p + (q + r)
        assert p + q == q + p
        assert (p * q) * r == p * (q * r)
        assert p * q == q * p
        assert p * (q + r) == p * q + p * r


def test_variable_set_mismatch_raises():
    p = parse_poly("x + y", ("x", "y"))
    q = parse_poly("x + z", ("x", "z"))
    with pytest.raises(ValueError):
        p + q
    with pytest.raises(ValueError):
        p * q


def test_grlex_order_and_canonical_string():
    p = parse_poly("J3^2 + J1*J2 + J1^3 + 2", ("J1", "J2", "J3"))
    ordered = [exps for exps, _ in p.sorted_terms()]
    assert ordered == [(3, 0, 0), (1, 1, 0), (0, 0, 2), (0, 0, 0)]
    assert str(p) == "J1^3 + J1*J2 + J3^2 + 2"


def test_homogeneous_components_and_degrees():
    p = parse_poly("x^2*y + x*y + 4", XYZ)
    comps = p.homogeneous_components()
    assert sorted(comps) == [0, 2, 3]
    assert comps[3] == parse_poly("x^2*y", XYZ)
    assert p.total_degree() == 3
    assert not p.is_homogeneous()
    assert comps[2].is_homogeneous()


def test_diff_and_substitute():
    p = parse_poly("x^3*y + y^2", XYZ)
    assert p.diff("x") == parse_poly("3*x^2*y", XYZ)
    assert p.diff("z") == Poly.zero(XYZ)
    swap = {"x": parse_poly("y", XYZ), "y": parse_poly("x", XYZ)}
    assert p.substitute(swap) == parse_poly("y^3*x + x^2", XYZ)


def test_power_and_eval():
    p = parse_poly("x + 1", ("x",))
    assert p**0 == Poly.const(("x",), 1)
    assert (p**5).coeff((2,)) == 10
    assert p.eval_fractions({"x": Fraction(3)}) == 4


def test_exact_division():
    a = parse_poly("x^2 - y^2", ("x", "y"))
    b = parse_poly("x - y", ("x", "y"))
    q = try_divide_exact(a, b)
    assert q == parse_poly("x + y", ("x", "y"))
    assert try_divide_exact(a, parse_poly("x + 2", ("x", "y"))) is None


def test_primitive_part_and_content():
    p = parse_poly("4*x^2 - 6*y^2", ("x", "y"))
    assert p.integer_content() == 2
    prim = p.primitive_part()
    assert prim == parse_poly("2*x^2 - 3*y^2", ("x", "y"))
    assert (-prim).primitive_part() == prim


def test_monomials_of_degree():
    ms = monomials_of_degree(("x", "y"), 2)
    assert ms == [(2, 0), (1, 1), (0, 2)]
    assert grlex_key((1, 1)) > grlex_key((0, 2))


def test_rational_coefficients_canonical():
    # every stored coefficient is a reduced Fraction with positive denominator
    rng = random.Random(7)
    for _ in range(200):
        p = random_poly(rng, XYZ)
        q = random_poly(rng, XYZ)
        for c in (p * q + p).terms.values():
            assert c != 0
            assert c.denominator > 0
            from math import gcd

            assert gcd(abs(c.numerator), c.denominator) == 1
