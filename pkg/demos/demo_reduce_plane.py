"""Reduce the quartic potential of the two-reflection plane model.

At a fixed parameter value the whole quartic block can be absorbed by a
single change of coordinates; the generating function's coefficients come
out in closed form, with the three pivot conditions a1, a2, a1+a2.  When a
quadratic coefficient is flagged critical (it vanishes at the transition),
the corresponding quartic term must be kept.

Run:  python demos/demo_reduce_plane.py
"""

from orbitred import (
    NumericContext,
    ParameterSpec,
    parse_orbit,
    reduce_potential,
    verify_reduction,
)
from demo_invariant_ring import two_reflections

POTENTIAL = "a1*J1 + a2*J2 + b1*J1^2 + b2*J2^2 + c*J1*J2"


def main():
    basis = two_reflections()

    print("== fixed parameter value: everything quartic goes")
    params = ParameterSpec.make(("a1", "a2", "b1", "b2", "c"))
    f = parse_orbit(POTENTIAL, basis, params)
    report = reduce_potential(f, basis, params, mode="fixed")
    for stage in report.stages:
        if stage.plan is None:
            continue
        print(f"stage at degree {stage.target_degree}:")
        for exps, coeff in stage.generator.h.sorted_terms():
            mono = "*".join(f"{n}^{k}" if k > 1 else n for n, k in zip(basis.names, exps) if k)
            print(f"   H[{mono}] = {coeff}")
        for cond in stage.plan.conditions:
            print(f"   requires {cond}")
    print(f"reduced potential: {report.reduced}")

    ctx = NumericContext({"a1": 1, "a2": 2, "b1": 1, "b2": 1, "c": 1}, basis)
    result = verify_reduction(f, report, ctx, samples=5, seed=42)
    print(result)
    print()

    print("== a1 vanishes at the transition: b1*J1^2 must stay")
    cparams = ParameterSpec.make(("a1", "a2", "b1", "b2", "c"), critical=("a1",))
    fc = parse_orbit(POTENTIAL, basis, cparams)
    creport = reduce_potential(fc, basis, cparams, mode="varying")
    print(f"zeroed: {creport.zeroed_monomials()}")
    print(f"reduced potential: {creport.reduced}")


if __name__ == "__main__":
    main()
