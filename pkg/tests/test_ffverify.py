"""Independent re-expansion checks over completed unfolding states."""

from fractions import Fraction

import pytest

from toricff.polyalg import Poly
from toricff.supercomplex import SuperElement
from toricff.unfolding import UnfoldingState, run, structure_series
from toricff.ffverify import (
    check_euler_identity,
    check_flat_f_axioms,
    check_fqm2,
    check_weight_homogeneity,
)


def copy_state(state):
    return UnfoldingState(
        ring=state.ring,
        basis=state.basis,
        order=state.order,
        t_weights=state.t_weights,
        u_table=dict(state.u_table),
        a_table=dict(state.a_table),
        lam_table=dict(state.lam_table),
    )


def test_fqm2_passes_cubic(cubic_state4):
    report = check_fqm2(cubic_state4)
    assert report.passed
    assert report.failure is None
    assert report.truncation == 2
    assert report.cases > 0


def test_fqm2_passes_ci22(ci22_state3):
    report = check_fqm2(ci22_state3)
    assert report.passed
    assert report.truncation == 1


def test_fqm2_requires_order_two(cubic_ring, cubic_basis):
    state = run(cubic_ring, cubic_basis, 1)
    with pytest.raises(ValueError):
        check_fqm2(state)


def test_fqm2_detects_corrupt_lambda(cubic_state4):
    bad = copy_state(cubic_state4)
    bad.lam_table[(1, 1)] = bad.lam_table[(1, 1)] + SuperElement(
        {((0, 0, 0, 2), (1,)): Fraction(1)}
    )
    report = check_fqm2(bad)
    assert not report.passed
    assert report.failure is not None
    assert isinstance(report.failure.monomial, tuple)


def test_fqm2_detects_corrupt_u(cubic_state4):
    bad = copy_state(cubic_state4)
    bad.u_table[(1, 1)] = bad.u_table[(1, 1)] + Poly.monomial((1, 1, 1, 1))
    report = check_fqm2(bad)
    assert not report.passed
    assert "Delta" in report.failure.site


def test_axioms_pass(cubic_state4, ci22_state3):
    for state in (cubic_state4, ci22_state3):
        report = check_flat_f_axioms(state)
        assert report.passed
        assert report.failure is None
        assert report.cases > 0


def test_axioms_detect_broken_unit(cubic_state4):
    bad = copy_state(cubic_state4)
    bad.a_table[(0, 1, 1)] = (Fraction(0), Fraction(1))
    report = check_flat_f_axioms(bad)
    assert not report.passed
    assert "unit" in report.failure.site


def test_unit_rows_at_origin(cubic_state4):
    # structural consequence asserted alongside the full check
    for beta in (0, 1):
        series = structure_series(cubic_state4, 0, beta)
        for rho in (0, 1):
            expect = Fraction(1 if rho == beta else 0)
            assert series[rho].coefficient((0, 0)) == expect
    assert all(tuple(sorted(k)) == k for k in cubic_state4.a_table)


def test_weights_pass(cubic_state4, ci22_state3):
    for state in (cubic_state4, ci22_state3):
        report = check_weight_homogeneity(state)
        assert report.passed
        assert report.cases > 0


def test_weights_detect_corrupt_u(cubic_state4):
    bad = copy_state(cubic_state4)
    bad.u_table[(1, 1)] = bad.u_table[(1, 1)] + Poly.constant(4, 1)
    report = check_weight_homogeneity(bad)
    assert not report.passed
    assert "u[" in report.failure.site


def test_weights_detect_corrupt_lambda(cubic_state4):
    bad = copy_state(cubic_state4)
    bad.lam_table[(1, 1)] = bad.lam_table[(1, 1)] + SuperElement(
        {((0, 0, 0, 0), (1,)): Fraction(1)}
    )
    report = check_weight_homogeneity(bad)
    assert not report.passed
    assert "lambda[" in report.failure.site


def test_quintic_direction_weights(quintic_ring, quintic_basis):
    state = run(quintic_ring, quintic_basis, 1)
    assert set(state.t_weights) == {1, 0, -1, -2}
    report = check_weight_homogeneity(state)
    assert report.passed


def test_euler_identity_cubic(cubic_ring, cubic_basis):
    state = run(cubic_ring, cubic_basis, 3)
    report = check_euler_identity(state)
    assert report.passed
    assert report.truncation == 2
    broken = check_euler_identity(state, kappa=SuperElement({}))
    assert not broken.passed
    assert broken.failure is not None


def test_euler_identity_ci22(ci22_state3):
    report = check_euler_identity(ci22_state3)
    assert report.passed
    dropped = SuperElement({((1, 0, 0, 0, 0, 0), (0,)): Fraction(1)})
    broken = check_euler_identity(ci22_state3, kappa=dropped)
    assert not broken.passed
    assert "hbar" in broken.failure.site
