"""Shared example rings: three Calabi-Yau fixtures plus a rank-2 charge lattice."""

from fractions import Fraction

import pytest

from toricff.polyalg import Poly
from toricff.toricring import build_cayley_ring

P2_RAYS = ((1, 0), (0, 1), (-1, -1))
P4_RAYS = (
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
    (-1, -1, -1, -1),
)
P3_RAYS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1))
P1P1_RAYS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def xpoly(r, terms):
    return Poly({exps: Fraction(c) for exps, c in terms.items()})


def fermat(r, power):
    return xpoly(
        r,
        {
            tuple(power if i == j else 0 for i in range(r)): 1
            for j in range(r)
        },
    )


CUBIC = fermat(3, 3)
QUINTIC = fermat(5, 5)
QUADRIC_P2 = fermat(3, 2)
CI_Q1 = fermat(4, 2)
CI_Q2 = xpoly(
    4,
    {
        (2, 0, 0, 0): 1,
        (0, 2, 0, 0): 2,
        (0, 0, 2, 0): 3,
        (0, 0, 0, 2): 4,
    },
)
# bidegree (2,2): (x1^2+x2^2)(x3^2+x4^2) + x1*x2*x3*x4, quasi-smooth
BIDEG22 = xpoly(
    4,
    {
        (2, 0, 2, 0): 1,
        (2, 0, 0, 2): 1,
        (0, 2, 2, 0): 1,
        (0, 2, 0, 2): 1,
        (1, 1, 1, 1): 1,
    },
)


@pytest.fixture(scope="session")
def cubic_ring():
    return build_cayley_ring(P2_RAYS, [CUBIC])


@pytest.fixture(scope="session")
def quintic_ring():
    return build_cayley_ring(P4_RAYS, [QUINTIC])


@pytest.fixture(scope="session")
def ci22_ring():
    return build_cayley_ring(P3_RAYS, [CI_Q1, CI_Q2])


@pytest.fixture(scope="session")
def p1p1_ring():
    return build_cayley_ring(P1P1_RAYS, [BIDEG22])


@pytest.fixture(scope="session")
def cubic_basis(cubic_ring):
    from toricff.jacobired import jacobian_basis

    return jacobian_basis(cubic_ring)


@pytest.fixture(scope="session")
def ci22_basis(ci22_ring):
    from toricff.jacobired import jacobian_basis

    return jacobian_basis(ci22_ring)


@pytest.fixture(scope="session")
def quintic_basis(quintic_ring):
    from toricff.jacobired import jacobian_basis

    return jacobian_basis(quintic_ring)


@pytest.fixture(scope="session")
def cubic_state4(cubic_ring, cubic_basis):
    from toricff.unfolding import run

    return run(cubic_ring, cubic_basis, 4)


@pytest.fixture(scope="session")
def ci22_state3(ci22_ring, ci22_basis):
    from toricff.unfolding import run

    return run(ci22_ring, ci22_basis, 3)
