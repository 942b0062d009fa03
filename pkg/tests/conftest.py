from __future__ import annotations

import pytest

from orbitred.invariants import InvariantBasis, SyzygyRule
from orbitred.parser import parse_poly


def _basis_two_independent() -> InvariantBasis:
    """Two independent reflections in the plane: J1 = x^2, J2 = y^2."""
    xv = ("x", "y")
    return InvariantBasis(
        xv,
        [("J1", parse_poly("x^2", xv)), ("J2", parse_poly("y^2", xv))],
        group_generators=[[[-1, 0], [0, 1]], [[1, 0], [0, -1]]],
    )


def _basis_simultaneous_reflection() -> InvariantBasis:
    """Simultaneous reflection in the plane: J1 = x^2, J2 = y^2, J3 = xy.

    The invariants satisfy J1*J2 = J3^2; the rule is oriented so J1*J2
    rewrites to J3^2.
    """
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


def _basis_three_reflections() -> InvariantBasis:
    """Independent reflections in x, y, z; the cubic-anisotropy invariants."""
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


@pytest.fixture(scope="session")
def basis4() -> InvariantBasis:
    return _basis_two_independent()


@pytest.fixture(scope="session")
def basis5() -> InvariantBasis:
    return _basis_simultaneous_reflection()


@pytest.fixture(scope="session")
def basis6() -> InvariantBasis:
    return _basis_three_reflections()


@pytest.fixture(scope="session")
def all_bases(basis4, basis5, basis6) -> list[InvariantBasis]:
    return [basis4, basis5, basis6]


SGU_PARAM_NAMES = (
    "a",
    "b1",
    "b2",
    "c1",
    "c2",
    "c3",
    "d1",
    "d2",
    "d3",
    "d4",
    "f1",
    "f2",
    "f3",
    "f4",
    "f5",
    "g1",
    "g2",
    "g3",
    "g4",
    "g5",
    "g6",
    "g7",
)

SGU_POTENTIAL_TEXT = (
    "a*J1"
    " + b1*J2 + b2*J1^2"
    " + c1*J3 + c2*J1^3 + c3*J1*J2"
    " + d1*J1^4 + d2*J2^2 + d3*J1^2*J2 + d4*J1*J3"
    " + f1*J1^5 + f2*J1^3*J2 + f3*J1^2*J3 + f4*J1*J2^2 + f5*J2*J3"
    " + g1*J1^6 + g2*J2^3 + g3*J3^2 + g4*J1^4*J2 + g5*J1^3*J3"
    " + g6*J1^2*J2^2 + g7*J1*J2*J3"
)


@pytest.fixture(scope="session")
def sgu_params():
    from orbitred.orbit import ParameterSpec

    return ParameterSpec.make(SGU_PARAM_NAMES, critical=("a",))


@pytest.fixture(scope="session")
def sgu_potential(basis6, sgu_params):
    from orbitred.parser import parse_orbit

    return parse_orbit(SGU_POTENTIAL_TEXT, basis6, sgu_params)


@pytest.fixture(scope="session")
def sgu_report(basis6, sgu_params, sgu_potential):
    from orbitred.pipeline import reduce_potential

    return reduce_potential(sgu_potential, basis6, sgu_params, mode="varying")
