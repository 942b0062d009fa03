from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from orbitred.invariants import (
    InvariantBasis,
    NotExpressibleError,
    SyzygyRule,
    check_invariance,
    express_in_invariants,
    normal_form,
    p_matrix,
)
from orbitred.parser import parse_poly
from orbitred.poly import Poly


def test_check_invariance_three_reflections(basis6):
    ok, witness = check_invariance(basis6)
    assert ok and witness is None


def test_check_invariance_simultaneous_reflection(basis5):
    ok, witness = check_invariance(basis5)
    assert ok and witness is None


def test_check_invariance_counterexample():
    basis = InvariantBasis(
        ("x",),
        [("J", parse_poly("x", ("x",)))],
        group_generators=[[[-1]]],
    )
    ok, witness = check_invariance(basis)
    assert not ok and witness == (0, 0)


def test_check_invariance_requires_generators(basis4):
    stripped = InvariantBasis(basis4.x_vars, list(zip(basis4.names, basis4.polys)))
    with pytest.raises(ValueError):
        check_invariance(stripped)


def test_normal_form_rewrites_mixed_product(basis5):
    jv = basis5.names
    assert basis5.normal_form(parse_poly("J1*J2", jv)) == parse_poly("J3^2", jv)
    # untouched monomial
    assert basis5.normal_form(parse_poly("J1^3", jv)) == parse_poly("J1^3", jv)


def test_normal_form_single_step_sound_in_x(basis5):
    jv = basis5.names
    p = parse_poly("J1*J2*J3", jv)
    nf = basis5.normal_form(p)
    assert nf == parse_poly("J3^3", jv)
    assert basis5.expand(nf) == basis5.expand(p)
    # idempotent
    assert basis5.normal_form(nf) == nf


def test_normal_form_idempotent_and_degree_preserving(basis5):
    rng = random.Random(5)
    jv = basis5.names
    for _ in range(200):
        terms = {
            tuple(rng.randint(0, 3) for _ in jv): Fraction(rng.randint(-5, 5))
            for _ in range(rng.randint(1, 5))
        }
        p = Poly(jv, terms)
        nf = basis5.normal_form(p)
        assert basis5.normal_form(nf) == nf
        assert basis5.expand(nf) == basis5.expand(p)
        if not p.is_zero():
            degs = {basis5.weighted_degree(e) for e in p.terms}
            assert {basis5.weighted_degree(e) for e in nf.terms} <= degs


def test_normal_form_empty_rule_set_is_identity(basis4):
    p = parse_poly("J1^2 + J2", basis4.names)
    assert normal_form(p, ()) == p


def test_syzygy_orientation_enforced(basis5):
    # J3^2 -> J1*J2 is wrongly oriented: J1*J2 dominates J3^2 in graded lex
    with pytest.raises(ValueError):
        SyzygyRule((0, 0, 2), parse_poly("J1*J2", basis5.names))


def test_unsound_syzygy_rejected():
    xv = ("x", "y")
    jv = ("J1", "J2", "J3")
    with pytest.raises(ValueError, match="unsound"):
        InvariantBasis(
            xv,
            [
                ("J1", parse_poly("x^2", xv)),
                ("J2", parse_poly("y^2", xv)),
                ("J3", parse_poly("x*y", xv)),
            ],
            syzygies=[SyzygyRule((1, 1, 0), parse_poly("2*J3^2", jv))],
        )


def test_express_binomial_square(basis4):
    xv = basis4.x_vars
    p = parse_poly("(x^2 + y^2)^2", xv)
    assert express_in_invariants(p, basis4) == parse_poly(
        "J1^2 + 2*J1*J2 + J2^2", basis4.names
    )


def test_express_gradient_norm(basis6):
    grad = [basis6.polys[1].diff(v) for v in basis6.x_vars]
    norm2 = Poly.zero(basis6.x_vars)
    for g in grad:
        norm2 = norm2 + g * g
    assert express_in_invariants(norm2, basis6) == parse_poly(
        "4*(J1*J2 + 3*J3)", basis6.names
    )


def test_express_odd_degree_fails(basis4):
    with pytest.raises(NotExpressibleError):
        express_in_invariants(parse_poly("x", basis4.x_vars), basis4)


def test_express_non_invariant_fails(basis4):
    with pytest.raises(NotExpressibleError):
        express_in_invariants(parse_poly("x^2 + x*y", basis4.x_vars), basis4)


def test_express_round_trip_random(all_bases):
    rng = random.Random(31)
    for basis in all_bases:
        degrees = [w for w in range(2, 13) if basis.normal_monomials(w)]
        for _ in range(200):
            w = rng.choice(degrees)
            monos = basis.normal_monomials(w)
            terms = {}
            for exps in rng.sample(monos, k=rng.randint(1, len(monos))):
                c = Fraction(rng.randint(-9, 9))
                if c:
                    terms[exps] = c
            q = Poly(basis.names, terms)
            if q.is_zero():
                continue
            assert express_in_invariants(basis.expand(q), basis) == q


def golden_pmatrix(basis, rows: list[list[str]]) -> None:
    pm = p_matrix(basis)
    for i in range(basis.r):
        for h in range(basis.r):
            assert pm[i, h] == parse_poly(rows[i][h], basis.names), (i, h)
            assert pm[i, h] == pm[h, i]


def test_p_matrix_two_independent(basis4):
    golden_pmatrix(basis4, [["4*J1", "0"], ["0", "4*J2"]])


def test_p_matrix_simultaneous_reflection(basis5):
    golden_pmatrix(
        basis5,
        [
            ["4*J1", "0", "2*J3"],
            ["0", "4*J2", "2*J3"],
            ["2*J3", "2*J3", "J1 + J2"],
        ],
    )


def test_p_matrix_three_reflections(basis6):
    golden_pmatrix(
        basis6,
        [
            ["4*J1", "8*J2", "12*J3"],
            ["8*J2", "4*(J1*J2 + 3*J3)", "8*J1*J3"],
            ["12*J3", "8*J1*J3", "4*J2*J3"],
        ],
    )


def test_p_matrix_entries_expand_to_gradient_products(all_bases):
    for basis in all_bases:
        pm = p_matrix(basis)
        grads = basis.gradients()
        for i in range(basis.r):
            for h in range(basis.r):
                dot = Poly.zero(basis.x_vars)
                for gi, gh in zip(grads[i], grads[h]):
                    dot = dot + gi * gh
                assert basis.expand(pm[i, h]) == dot


def test_p_matrix_positive_semidefinite_at_random_points(all_bases):
    rng = random.Random(11)
    for basis in all_bases:
        pm = p_matrix(basis)
        for _ in range(100):
            point = {
                v: Fraction(rng.randint(-100, 100), 100) for v in basis.x_vars
            }
            jvals = {
                name: poly.eval_fractions(point)
                for name, poly in zip(basis.names, basis.polys)
            }
            mat = np.array(
                [
                    [float(pm[i, h].eval_fractions(jvals)) for h in range(basis.r)]
                    for i in range(basis.r)
                ]
            )
            eig = np.linalg.eigvalsh(mat)
            assert eig.min() > -1e-9


def test_weighted_and_normal_monomials(basis6):
    assert basis6.weighted_monomials(6) == [(3, 0, 0), (1, 1, 0), (0, 0, 1)]
    assert basis6.normal_monomials(12) == [
        (6, 0, 0),
        (4, 1, 0),
        (3, 0, 1),
        (2, 2, 0),
        (1, 1, 1),
        (0, 3, 0),
        (0, 0, 2),
    ]


def test_normal_monomials_exclude_syzygy_multiples(basis5):
    # J1*J2 and its multiples are rewritten away
    assert (1, 1, 0) not in basis5.normal_monomials(4)
    assert basis5.normal_monomials(4) == [(2, 0, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2)]


def test_normal_form_multi_rule_cascade():
    # two compatible rules applied in cascade; orientation keeps the
    # rewriting terminating even when one rule feeds the other
    jv = ("A", "B", "C")
    rules = (
        SyzygyRule((1, 1, 0), parse_poly("C^2", jv)),   # A*B -> C^2
        SyzygyRule((0, 0, 4), parse_poly("A", jv)),     # C^4 -> A
    )
    p = parse_poly("A*B*C^4 + A*B", jv)
    nf = normal_form(p, rules)
    # A*B*C^4 -> C^6 -> A*C^2, and A*B -> C^2
    assert nf == parse_poly("A*C^2 + C^2", jv)
    assert normal_form(nf, rules) == nf
