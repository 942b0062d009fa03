from __future__ import annotations

import random
from fractions import Fraction

import pytest

from orbitred.elimination import (
    NoUsableSourceError,
    build_transfer,
    criterion_check,
    eliminable_sets,
    source_component,
)
from orbitred.invariants import express_in_invariants, p_matrix
from orbitred.orbit import OrbitPoly, ParameterSpec
from orbitred.parser import parse_orbit, parse_poly
from orbitred.poly import Poly
from orbitred.ratfun import RatFun

# canonical exponent tuples for the three-reflection basis (J1, J2, J3)
J3_ = (0, 0, 1)
J1J2 = (1, 1, 0)
J1C = (3, 0, 0)  # J1^3
J1Q = (4, 0, 0)  # J1^4
J2SQ = (0, 2, 0)
J1SQJ2 = (2, 1, 0)
J1J3 = (1, 0, 1)
J1_5 = (5, 0, 0)
J1CJ2 = (3, 1, 0)
J1SQJ3 = (2, 0, 1)
J1J2SQ = (1, 2, 0)
J2J3 = (0, 1, 1)
J1_6 = (6, 0, 0)
J2C = (0, 3, 0)
J3SQ = (0, 0, 2)
J1QJ2 = (4, 1, 0)
J1CJ3 = (3, 0, 1)
J1SQJ2SQ = (2, 2, 0)
J1J2J3 = (1, 1, 1)


@pytest.fixture(scope="module")
def pm6(basis6):
    return p_matrix(basis6)


@pytest.fixture(scope="module")
def sgu_source(basis6, sgu_params, sgu_potential):
    return source_component(sgu_potential, "varying", sgu_params)


def bpoly(text: str, sgu_params) -> Poly:
    return parse_poly(text, sgu_params.names)


# ---------------------------------------------------------------------------
# source_component


def test_source_component_varying(basis6, sgu_params, sgu_potential):
    src = source_component(sgu_potential, "varying", sgu_params)
    assert src == parse_orbit("b1*J2 + b2*J1^2", basis6, sgu_params)
    assert src.min_weighted_degree() == 4


def test_source_component_fixed(basis6, sgu_params, sgu_potential):
    src = source_component(sgu_potential, "fixed", sgu_params)
    assert src == parse_orbit("a*J1", basis6, sgu_params)


def test_source_component_no_usable(basis6):
    params = ParameterSpec.make(("a",), critical=("a",))
    f = parse_orbit("a*J1 + a*J1^2", basis6, params)
    with pytest.raises(NoUsableSourceError):
        source_component(f, "varying", params)
    with pytest.raises(NoUsableSourceError):
        source_component(OrbitPoly.zero(basis6, params), "fixed", params)


# ---------------------------------------------------------------------------
# golden transfer matrices for the three-reflection model


def x_space_column_oracle(basis, source, gen_exps, values):
    """Independent check of one transfer column at a parameter point.

    Expands the source (with numeric parameter values) and the generator
    monomial into x-space, takes the gradient scalar product there, and
    expresses the result back in the invariants.
    """
    src_x = Poly.zero(basis.x_vars)
    for exps, coeff in source.terms.items():
        c = coeff.eval_fractions(values)
        if c:
            src_x = src_x + basis.expand(Poly.monomial(basis.names, exps, c))
    gen_x = basis.expand(Poly.monomial(basis.names, gen_exps))
    dot = Poly.zero(basis.x_vars)
    for v in basis.x_vars:
        dot = dot + src_x.diff(v) * gen_x.diff(v)
    return express_in_invariants(dot, basis)


def assert_transfer_matches_oracle(t, basis, source):
    points = [
        {name: Fraction(0) for name in source.params.names},
        {name: Fraction(0) for name in source.params.names},
        {name: Fraction(k + 2, 3) for k, name in enumerate(source.params.names)},
    ]
    points[0]["b1"] = Fraction(1)
    points[1]["b2"] = Fraction(1)
    for values in points:
        for j, gexps in enumerate(t.generator_monomials):
            expected = basis.normal_form(x_space_column_oracle(basis, source, gexps, values))
            got = Poly.zero(basis.names)
            for i, texps in enumerate(t.target_monomials):
                c = t.entries[i][j].eval_fractions(values)
                if c:
                    got = got + Poly.monomial(basis.names, texps, c)
            assert basis.normal_form(got) == expected, (j, values)


def test_transfer_order_six(basis6, pm6, sgu_params, sgu_source):
    t = build_transfer(
        sgu_source,
        6,
        pm6,
        target_monomials=[J3_, J1J2, J1C],
        generator_monomials=[(0, 1, 0), (2, 0, 0)],
    )
    golden = [
        ["12*b1", "0"],
        ["4*(b1 + 4*b2)", "16*b1"],
        ["0", "16*b2"],
    ]
    for i, row in enumerate(golden):
        for j, text in enumerate(row):
            assert t.entries[i][j] == RatFun(bpoly(text, sgu_params)), (i, j)
    assert_transfer_matches_oracle(t, basis6, sgu_source)


def test_transfer_order_eight(basis6, pm6, sgu_params, sgu_source):
    t = build_transfer(
        sgu_source,
        8,
        pm6,
        target_monomials=[J1Q, J2SQ, J1SQJ2, J1J3],
        generator_monomials=[J3_, J1C, J1J2],
    )
    golden = [
        ["0", "24*b2", "0"],
        ["0", "0", "8*b1"],
        ["0", "24*b1", "4*(b1 + 6*b2)"],
        ["4*(2*b1 + 6*b2)", "0", "12*b1"],
    ]
    for i, row in enumerate(golden):
        for j, text in enumerate(row):
            assert t.entries[i][j] == RatFun(bpoly(text, sgu_params)), (i, j)
    assert_transfer_matches_oracle(t, basis6, sgu_source)


def test_transfer_order_ten(basis6, pm6, sgu_params, sgu_source):
    t = build_transfer(
        sgu_source,
        10,
        pm6,
        target_monomials=[J1_5, J1CJ2, J1SQJ3, J1J2SQ, J2J3],
        generator_monomials=[J1Q, J2SQ, J1SQJ2, J1J3],
    )
    # row J1^2*J3, column J1*J3 is 4*(2*b1 + 8*b2): the published matrix
    # display prints (b1 + 8*b2) there, contradicting its own first-order
    # formula; the x-space oracle below confirms the value used here.
    golden = [
        ["32*b2", "0", "0", "0"],
        ["32*b1", "0", "4*(b1 + 8*b2)", "0"],
        ["0", "0", "12*b1", "4*(2*b1 + 8*b2)"],
        ["0", "4*(2*b1 + 8*b2)", "16*b1", "0"],
        ["0", "24*b1", "0", "8*b1"],
    ]
    for i, row in enumerate(golden):
        for j, text in enumerate(row):
            assert t.entries[i][j] == RatFun(bpoly(text, sgu_params)), (i, j)
    assert_transfer_matches_oracle(t, basis6, sgu_source)


def test_transfer_order_twelve(basis6, pm6, sgu_params, sgu_source):
    t = build_transfer(
        sgu_source,
        12,
        pm6,
        target_monomials=[J1_6, J2C, J3SQ, J1QJ2, J1CJ3, J1SQJ2SQ, J1J2J3],
        generator_monomials=[J1_5, J1CJ2, J1SQJ3, J1J2SQ, J2J3],
    )
    golden = [
        ["40*b2", "0", "0", "0", "0"],
        ["0", "0", "0", "8*b1", "0"],
        ["0", "0", "0", "0", "12*b1"],
        ["40*b1", "4*(b1 + 10*b2)", "0", "0", "0"],
        ["0", "12*b1", "4*(2*b1 + 10*b2)", "0", "0"],
        ["0", "24*b1", "0", "4*(2*b1 + 10*b2)", "0"],
        ["0", "0", "16*b1", "24*b1", "4*(3*b1 + 10*b2)"],
    ]
    for i, row in enumerate(golden):
        for j, text in enumerate(row):
            assert t.entries[i][j] == RatFun(bpoly(text, sgu_params)), (i, j)
    assert_transfer_matches_oracle(t, basis6, sgu_source)


def test_transfer_default_monomials_are_normal_form(basis6, pm6, sgu_source):
    t = build_transfer(sgu_source, 6, pm6)
    assert t.target_monomials == [J1C, J1J2, J3_]
    assert t.generator_monomials == [(2, 0, 0), (0, 1, 0)]
    assert t.reduced and t.generator_degree == 4


def test_transfer_linear_in_source(basis6, pm6, sgu_params):
    rng = random.Random(3)
    for _ in range(20):
        c1 = Fraction(rng.randint(-5, 5))
        c2 = Fraction(rng.randint(-5, 5))
        s1 = parse_orbit("b1*J2", basis6, sgu_params).scale(c1)
        s2 = parse_orbit("b2*J1^2", basis6, sgu_params).scale(c2)
        combo = s1 + s2
        if combo.is_zero():
            continue
        t12 = build_transfer(combo, 8, pm6)
        ta = build_transfer(parse_orbit("b1*J2", basis6, sgu_params), 8, pm6)
        tb = build_transfer(parse_orbit("b2*J1^2", basis6, sgu_params), 8, pm6)
        for i in range(len(t12.target_monomials)):
            for j in range(len(t12.generator_monomials)):
                assert t12.entries[i][j] == ta.entries[i][j] * c1 + tb.entries[i][j] * c2


def test_transfer_rejects_quadratic_generator_degree(basis6, pm6, sgu_params, sgu_source):
    with pytest.raises(ValueError):
        build_transfer(sgu_source, 4, pm6)


def test_transfer_rejects_wrong_degree_override(basis6, pm6, sgu_source):
    with pytest.raises(ValueError):
        build_transfer(sgu_source, 6, pm6, target_monomials=[J1Q])


# ---------------------------------------------------------------------------
# redundant-representation override (two-variable simultaneous reflection)


def quartic_override_matrix(basis5):
    params = ParameterSpec.make(("a1", "a2", "a3"))
    source = parse_orbit("a1*J1 + a2*J2 + a3*J3", basis5, params)
    redundant = [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    pm = p_matrix(basis5)
    return build_transfer(
        source, 4, pm, target_monomials=redundant, generator_monomials=redundant
    ), params


def test_redundant_override_reproduces_quartic_matrix(basis5):
    t, params = quartic_override_matrix(basis5)
    assert not t.reduced
    golden = [
        ["8*a1", "0", "0", "0", "a3", "0"],
        ["0", "8*a2", "0", "0", "0", "a3"],
        ["0", "0", "4*(a1 + a2)", "0", "2*a3", "2*a3"],
        ["0", "0", "0", "4*(a1 + a2)", "a3", "a3"],
        ["4*a3", "0", "2*a3", "2*a3", "6*a1 + 2*a2", "0"],
        ["0", "4*a3", "2*a3", "2*a3", "0", "2*a1 + 6*a2"],
    ]
    for i, row in enumerate(golden):
        for j, text in enumerate(row):
            assert t.entries[i][j] == RatFun(parse_poly(text, params.names)), (i, j)


# ---------------------------------------------------------------------------
# eliminable sets


def conditions_product(conditions) -> Poly:
    prod = None
    for c in conditions:
        prod = c.poly if prod is None else prod * c.poly
    assert prod is not None
    return prod.primitive_part()


def dedup_product(polys) -> Poly:
    seen: list[Poly] = []
    for p in polys:
        prim = p.primitive_part()
        if not any(prim == s for s in seen):
            seen.append(prim)
    prod = None
    for p in seen:
        prod = p if prod is None else prod * p
    return prod.primitive_part()


def test_eliminable_sets_order_six_table(basis6, pm6, sgu_params, sgu_source):
    t = build_transfer(
        sgu_source,
        6,
        pm6,
        target_monomials=[J3_, J1J2, J1C],
        generator_monomials=[(0, 1, 0), (2, 0, 0)],
    )
    plans = eliminable_sets(t, "varying", sgu_params)
    pairs = {tuple(sorted(p.zeroed_targets)): p for p in plans if len(p.zeroed_targets) == 2}
    table = {
        tuple(sorted([J3_, J1J2])): "b1",
        tuple(sorted([J3_, J1C])): "b1*b2",
        tuple(sorted([J1J2, J1C])): "(b1 + 4*b2)*b2",
    }
    assert set(pairs) == set(table)
    for key, product_text in table.items():
        got = conditions_product(pairs[key].conditions)
        want = dedup_product([bpoly(product_text, sgu_params)])
        assert got == want or got == dedup_product(
            [bpoly(t, sgu_params) for t in product_text.split(")*(")]
        ), key


def test_eliminable_sets_zero_matrix(basis6, pm6, sgu_params):
    params = ParameterSpec.make(("a", "b1", "b2"), critical=("a",))
    src = parse_orbit("b1*J2 + b2*J1^2", basis6, params)
    t = build_transfer(src, 6, pm6)
    zero = RatFun.zero(params.names)
    for i in range(len(t.target_monomials)):
        for j in range(len(t.generator_monomials)):
            t.entries[i][j] = zero
    assert eliminable_sets(t, "varying", params) == []


def test_eliminable_sets_full_quartic_override(basis5):
    t, params = quartic_override_matrix(basis5)
    plans = eliminable_sets(t, "fixed", params, max_sets=4)
    full = plans[0]
    assert len(full.zeroed_targets) == 6
    # dense square system: the single reported condition is the determinant
    got = conditions_product(full.conditions)
    want = (
        parse_poly("(a1 + a2)^2", params.names)
        * parse_poly("4*a1*a2 - a3^2", params.names)
        * parse_poly("3*a1^2 + 10*a1*a2 + 3*a2^2 - a3^2", params.names)
    ).primitive_part()
    assert got == want


def test_varying_plans_also_valid_in_fixed_mode(basis6, pm6, sgu_params, sgu_source):
    for degree, targets, gens in (
        (6, [J3_, J1J2, J1C], [(0, 1, 0), (2, 0, 0)]),
        (8, [J1Q, J2SQ, J1SQJ2, J1J3], [J3_, J1C, J1J2]),
    ):
        t = build_transfer(sgu_source, degree, pm6, targets, gens)
        varying = eliminable_sets(t, "varying", sgu_params)
        fixed = eliminable_sets(t, "fixed", sgu_params)
        fixed_sets = {tuple(sorted(p.zeroed_targets)) for p in fixed}
        for plan in varying:
            assert tuple(sorted(plan.zeroed_targets)) in fixed_sets


def test_plan_solution_zeroes_first_order(basis6, pm6, sgu_params, sgu_potential, sgu_source):
    t = build_transfer(
        sgu_source,
        6,
        pm6,
        target_monomials=[J3_, J1J2, J1C],
        generator_monomials=[(0, 1, 0), (2, 0, 0)],
    )
    rhs = [sgu_potential.coeff(e) for e in t.target_monomials]
    plans = eliminable_sets(t, "varying", sgu_params, rhs=rhs)
    plan = plans[0]
    assert plan.generator_solution
    # residual check: original coefficient plus first-order change vanishes
    for zi, target in enumerate(t.target_monomials):
        if target not in plan.zeroed_targets:
            continue
        acc = rhs[zi]
        for j, gexps in enumerate(t.generator_monomials):
            xi = plan.generator_solution.get(gexps)
            if xi is not None:
                acc = acc + t.entries[zi][j] * xi
        assert acc.is_zero()


# ---------------------------------------------------------------------------
# term-level criterion


def test_criterion_quadratic_square_not_eliminable_varying(
    basis6, pm6, sgu_params, sgu_potential
):
    term = OrbitPoly.monomial(
        basis6, sgu_params, (2, 0, 0), RatFun(parse_poly("b2", sgu_params.names))
    )
    res = criterion_check(term, sgu_potential, pm6, "varying", sgu_params)
    assert not res.eliminable
    assert "degree" in res.reason


def test_criterion_quartic_terms_eliminable_fixed(basis6, pm6, sgu_params, sgu_potential):
    term = OrbitPoly.monomial(
        basis6, sgu_params, (2, 0, 0), RatFun(parse_poly("b2", sgu_params.names))
    )
    res = criterion_check(term, sgu_potential, pm6, "fixed", sgu_params)
    assert res.eliminable
    assert [str(c.poly) for c in res.conditions] == ["a"]


def test_criterion_cube_eliminable_varying(basis6, pm6, sgu_params, sgu_potential):
    term = OrbitPoly.monomial(
        basis6, sgu_params, J1C, RatFun(parse_poly("c2", sgu_params.names))
    )
    res = criterion_check(term, sgu_potential, pm6, "varying", sgu_params)
    assert res.eliminable
    assert [str(c.poly) for c in res.conditions] == ["b2"]
    # compatibility: the Jacobian of Q is symmetric, exactly
    r = basis6.r
    for i in range(r):
        for j in range(r):
            assert res.q[i].diff_j(j) == res.q[j].diff_j(i)
    # the generator really kills the term at first order
    change = res.first_order_change
    assert (change.coeff(J1C) + term.coeff(J1C)).is_zero()


def test_criterion_zero_term(basis6, pm6, sgu_params, sgu_potential):
    term = OrbitPoly.zero(basis6, sgu_params)
    res = criterion_check(term, sgu_potential, pm6, "varying", sgu_params)
    assert res.eliminable and res.generator.is_zero() and res.conditions == []


def test_mode_monotonicity_all_example_bases(basis4, basis5, basis6, sgu_params):
    # plans admissible through the transition stay admissible at fixed
    # parameter values, for every worked basis
    cases = []
    p4 = ParameterSpec.make(("a1", "a2", "b1", "b2", "c"), critical=("a1",))
    cases.append((basis4, p4, parse_orbit("a1*J1 + a2*J2", basis4, p4), 4))
    p5 = ParameterSpec.make(("a1", "a2", "a3", "b1", "b2"), critical=("a3",))
    cases.append((basis5, p5, parse_orbit("a1*J1 + a2*J2 + a3*J3", basis5, p5), 4))
    p6 = sgu_params
    cases.append((basis6, p6, parse_orbit("a*J1 + b1*J2 + b2*J1^2", basis6, p6), 8))
    for basis, params, f, w_target in cases:
        pm = p_matrix(basis)
        src_varying = source_component(f, "varying", params)
        src_fixed = source_component(f, "fixed", params)
        t_v = build_transfer(src_varying, w_target, pm)
        varying = eliminable_sets(t_v, "varying", params)
        if src_fixed.min_weighted_degree() == src_varying.min_weighted_degree():
            t_f = build_transfer(src_fixed, w_target, pm)
            fixed = eliminable_sets(t_f, "fixed", params)
            fixed_sets = {tuple(sorted(p.zeroed_targets)) for p in fixed}
            for plan in varying:
                assert tuple(sorted(plan.zeroed_targets)) in fixed_sets
        else:
            # the fixed-mode source sits lower, so the fixed-mode run reaches
            # strictly more target degrees; the varying sets are vacuously
            # dominated once the full pipeline is compared (see pipeline tests)
            assert varying is not None
