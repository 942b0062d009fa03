"""Tour of the invariant-ring layer.

Builds the three worked symmetry classes (two independent plane
reflections, the simultaneous plane reflection with its dependent third
invariant, and the three independent space reflections), checks
invariance against the group generators, prints the Gram matrices of
invariant gradients, and counts the coefficients of the most general
invariant potential at the stability order.

Run:  python demos/demo_invariant_ring.py
"""

from orbitred import (
    InvariantBasis,
    SyzygyRule,
    check_invariance,
    general_potential,
    p_matrix,
    parse_poly,
    stability_order,
)


def two_reflections():
    xv = ("x", "y")
    return InvariantBasis(
        xv,
        [("J1", parse_poly("x^2", xv)), ("J2", parse_poly("y^2", xv))],
        group_generators=[[[-1, 0], [0, 1]], [[1, 0], [0, -1]]],
    )


def simultaneous_reflection():
    xv = ("x", "y")
    jv = ("J1", "J2", "J3")
    return InvariantBasis(
        xv,
        [
            ("J1", parse_poly("x^2", xv)),
            ("J2", parse_poly("y^2", xv)),
            ("J3", parse_poly("x*y", xv)),
        ],
        syzygies=[SyzygyRule((1, 1, 0), parse_poly("J3^2", jv))],
        group_generators=[[[-1, 0], [0, -1]]],
    )


def three_reflections():
    xv = ("x", "y", "z")
    return InvariantBasis(
        xv,
        [
            ("J1", parse_poly("x^2 + y^2 + z^2", xv)),
            ("J2", parse_poly("x^2*y^2 + y^2*z^2 + z^2*x^2", xv)),
            ("J3", parse_poly("x^2*y^2*z^2", xv)),
        ],
        group_generators=[
            [[-1, 0, 0], [0, 1, 0], [0, 0, 1]],
            [[1, 0, 0], [0, -1, 0], [0, 0, 1]],
            [[1, 0, 0], [0, 1, 0], [0, 0, -1]],
        ],
    )


def show(name, basis):
    print(f"== {name}")
    ok, witness = check_invariance(basis)
    print(f"invariant under all group generators: {ok}")
    print(f"degrees: {basis.degrees}, stability order: {stability_order(basis)}")
    pm = p_matrix(basis)
    print("P-matrix (Gram matrix of invariant gradients, in the invariants):")
    for i in range(basis.r):
        print("   [" + ", ".join(str(pm[i, h]) for h in range(basis.r)) + "]")
    n = stability_order(basis)
    _, names, _ = general_potential(basis, n)
    print(f"general potential up to order {n}: {len(names)} coefficients")
    print()


if __name__ == "__main__":
    show("two independent reflections in the plane", two_reflections())
    show("simultaneous reflection (J1*J2 = J3^2)", simultaneous_reflection())
    show("three independent reflections in space", three_reflections())
