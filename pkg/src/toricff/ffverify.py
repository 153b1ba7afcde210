"""Exact re-expansion checks over a completed unfolding state.

Every check expands both sides of an identity as truncated t-series of
polynomials and compares coefficient by coefficient; a pass means the
residual is identically zero through the stated truncation degree. Failures
carry the first offending t-monomial and the rendered residual, so corrupted
states are located, not just flagged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polyalg import Poly, render_poly
from .supercomplex import (
    SuperElement,
    delta,
    q_f,
    q_s,
    render_super,
    super_weight,
)
from .unfolding import (
    TruncatedSeries,
    gamma_partial,
    gamma_series,
    lambda_series,
    structure_series,
)


@dataclass(frozen=True)
class Failure:
    """First failing coefficient identity of a check."""

    site: str
    monomial: tuple
    weight: int | None
    residual: str


@dataclass(frozen=True)
class VerificationReport:
    check: str
    passed: bool
    truncation: int
    cases: int
    failure: Failure | None


def _render(ring, value):
    if isinstance(value, Poly):
        return render_poly(value, ring.names)
    if isinstance(value, SuperElement):
        return render_super(value, ring.names, ring.eta_names)
    return str(value)


def _residual_weight(ring, value):
    if isinstance(value, Poly) and not value.is_zero():
        exps = sorted(value.terms)[0]
        return ring.degree_of_monomial(exps)[1]
    return None


def _vanishes(value):
    return value.is_zero() if hasattr(value, "is_zero") else value == 0


def _first_residual(left, right):
    keys = sorted(set(left.coefficients) | set(right.coefficients))
    for key in keys:
        a = left.coefficients.get(key)
        b = right.coefficients.get(key)
        if a is None:
            diff = -b
        elif b is None:
            diff = a
        else:
            diff = a - b
        if not _vanishes(diff):
            return key, diff
    return None


def _series_map(series, fn, zero):
    return TruncatedSeries(
        series.dim,
        series.order,
        {key: fn(value) for key, value in series.coefficients.items()},
        zero,
    )


def _expvec(multi, dim):
    out = [0] * dim
    for j in multi:
        out[j] += 1
    return tuple(out)


def _failure(ring, site, key, value):
    return Failure(
        site=site,
        monomial=tuple(key),
        weight=_residual_weight(ring, value),
        residual=_render(ring, value),
    )


def check_fqm2(state):
    """Re-expand both displays of the structure-constant equation.

    First display: dGamma_alpha * dGamma_beta = sum_rho A^rho dGamma_rho
    + Q_{S+Gamma}(Lambda_{alphabeta}); second: u = Delta(lambda) entrywise.
    Both are checked to t-degree order - 2 for every unordered pair.
    """
    if state.order < 2:
        raise ValueError("check_fqm2 needs an order >= 2 state")
    ring = state.ring
    dim = len(state.basis.monomials)
    trunc = state.order - 2
    cases = 0
    for multi in sorted(state.lam_table):
        cases += 1
        diff = delta(state.lam_table[multi]).to_poly() - state.u_table[multi]
        if not diff.is_zero():
            return VerificationReport(
                "fqm2",
                False,
                trunc,
                cases,
                _failure(
                    ring,
                    f"u vs Delta(lambda) at multiset {multi}",
                    _expvec(multi, dim),
                    diff,
                ),
            )
    zero_poly = Poly({})
    gamma = gamma_series(state)
    partials = [gamma_partial(state, a) for a in range(dim)]
    for alpha in range(dim):
        for beta in range(alpha, dim):
            cases += 1
            residual = (partials[alpha] * partials[beta]).truncate(trunc)
            a_series = structure_series(state, alpha, beta)
            for rho in range(dim):
                residual = residual - a_series[rho].convolve(
                    partials[rho], lambda a, b: a * b, zero_poly
                )
            lam = lambda_series(state, alpha, beta)
            residual = residual - _series_map(
                lam, lambda l: q_s(l, ring).to_poly(), zero_poly
            )
            residual = residual - gamma.convolve(
                lam, lambda u, l: q_f(l, u).to_poly(), zero_poly
            )
            hit = _first_residual(
                residual, TruncatedSeries(dim, trunc, {}, zero_poly)
            )
            if hit is not None:
                return VerificationReport(
                    "fqm2",
                    False,
                    trunc,
                    cases,
                    _failure(
                        ring, f"pair ({alpha},{beta})", hit[0], hit[1]
                    ),
                )
    return VerificationReport("fqm2", True, trunc, cases, None)


def check_flat_f_axioms(state):
    """Commutativity, unit row, potentiality, and associativity of A."""
    if state.order < 2:
        raise ValueError("check_flat_f_axioms needs an order >= 2 state")
    ring = state.ring
    dim = len(state.basis.monomials)
    trunc = state.order - 2
    zero = Fraction(0)
    table = [
        [structure_series(state, a, b) for b in range(dim)]
        for a in range(dim)
    ]
    cases = 0
    failure = None
    for alpha in range(dim):
        for beta in range(alpha + 1, dim):
            for rho in range(dim):
                cases += 1
                hit = _first_residual(
                    table[alpha][beta][rho], table[beta][alpha][rho]
                )
                if hit and failure is None:
                    failure = _failure(
                        ring,
                        f"commutativity ({alpha},{beta})->{rho}",
                        hit[0],
                        hit[1],
                    )
    nvars = ring.nvars
    unit = state.basis.index_of[(0,) * nvars]
    for beta in range(dim):
        for rho in range(dim):
            cases += 1
            expect = TruncatedSeries(
                dim,
                trunc,
                {(0,) * dim: Fraction(1)} if rho == beta else {},
                zero,
            )
            hit = _first_residual(table[unit][beta][rho], expect)
            if hit and failure is None:
                failure = _failure(
                    ring, f"unit row beta={beta} rho={rho}", hit[0], hit[1]
                )
    if state.order >= 3:
        for alpha in range(dim):
            for gamma_idx in range(alpha + 1, dim):
                for beta in range(dim):
                    for sigma in range(dim):
                        cases += 1
                        hit = _first_residual(
                            table[alpha][beta][sigma].partial(gamma_idx),
                            table[gamma_idx][beta][sigma].partial(alpha),
                        )
                        if hit and failure is None:
                            failure = _failure(
                                ring,
                                "potentiality "
                                f"({alpha},{beta},{gamma_idx})->{sigma}",
                                hit[0],
                                hit[1],
                            )
    for alpha in range(dim):
        for beta in range(dim):
            for gamma_idx in range(alpha, dim):
                for sigma in range(dim):
                    cases += 1
                    lhs = TruncatedSeries(dim, trunc, {}, zero)
                    rhs = TruncatedSeries(dim, trunc, {}, zero)
                    for rho in range(dim):
                        lhs = lhs + (
                            table[alpha][beta][rho]
                            * table[rho][gamma_idx][sigma]
                        )
                        rhs = rhs + (
                            table[beta][gamma_idx][rho]
                            * table[rho][alpha][sigma]
                        )
                    hit = _first_residual(lhs, rhs)
                    if hit and failure is None:
                        failure = _failure(
                            ring,
                            "associativity "
                            f"({alpha},{beta},{gamma_idx})->{sigma}",
                            hit[0],
                            hit[1],
                        )
    return VerificationReport(
        "flat-f-axioms", failure is None, trunc, cases, failure
    )


def check_weight_homogeneity(state):
    """Every stored table entry carries exactly the weight the grading demands."""
    ring = state.ring
    basis = state.basis
    dim = len(basis.monomials)
    cases = 0
    for i, w in enumerate(basis.weights):
        cases += 1
        if state.t_weights[i] != 1 - w:
            return VerificationReport(
                "weight-homogeneity",
                False,
                state.order,
                cases,
                Failure(
                    site=f"t-weight of direction {i}",
                    monomial=_expvec((i,), dim),
                    weight=state.t_weights[i],
                    residual=f"expected {1 - w}",
                ),
            )
    for multi in sorted(state.u_table):
        target = 1 - sum(state.t_weights[j] for j in multi)
        for exps in state.u_table[multi].terms:
            cases += 1
            found = ring.degree_of_monomial(exps)[1]
            if found != target:
                return VerificationReport(
                    "weight-homogeneity",
                    False,
                    state.order,
                    cases,
                    Failure(
                        site=f"u[{multi}]",
                        monomial=_expvec(multi, dim),
                        weight=found,
                        residual=render_poly(
                            Poly.monomial(exps), ring.names
                        ),
                    ),
                )
    for multi in sorted(state.lam_table):
        target = 2 - sum(state.t_weights[j] for j in multi)
        for exps, etas in state.lam_table[multi].terms:
            cases += 1
            found = super_weight(ring, exps, etas)
            if found != target:
                return VerificationReport(
                    "weight-homogeneity",
                    False,
                    state.order,
                    cases,
                    Failure(
                        site=f"lambda[{multi}]",
                        monomial=_expvec(multi, dim),
                        weight=found,
                        residual=render_super(
                            SuperElement({(exps, etas): Fraction(1)}),
                            ring.names,
                            ring.eta_names,
                        ),
                    ),
                )
    return VerificationReport(
        "weight-homogeneity", True, state.order, cases, None
    )


def _euler_weight(ring, f):
    """Apply the weight Euler operator sum wt(q_a) q_a d/dq_a to f."""
    out = {}
    for exps, coeff in f.terms.items():
        scale = ring.degree_of_monomial(exps)[1]
        if scale:
            out[exps] = coeff * scale
    return Poly(out)


def default_kappa(ring):
    """The odd weight Euler element: sum of wt(q_a) q_a eta_a."""
    nvars = ring.nvars
    terms = {}
    for a, wt in enumerate(ring.var_weights):
        if wt:
            exps = tuple(1 if i == a else 0 for i in range(nvars))
            terms[(exps, (a,))] = Fraction(wt)
    return SuperElement(terms)


def check_euler_identity(state, kappa=None):
    """Both hbar-slices of the Euler-field compatibility, per direction.

    hbar^0: E_wt(S + Gamma) * dGamma_alpha = Q_{S+Gamma}(dGamma_alpha * kappa);
    hbar^1: E_wt(dGamma_alpha) = Delta(dGamma_alpha * kappa) - k dGamma_alpha.
    A kappa override exists so a corrupted Euler element demonstrably fails.
    """
    if state.order < 2:
        raise ValueError("check_euler_identity needs an order >= 2 state")
    ring = state.ring
    dim = len(state.basis.monomials)
    trunc = state.order - 1
    if kappa is None:
        kappa = default_kappa(ring)
    k = ring.k
    zero_poly = Poly({})
    gamma = gamma_series(state)
    e_series = TruncatedSeries(
        dim, state.order, {(0,) * dim: _euler_weight(ring, ring.S)}, zero_poly
    ) + _series_map(gamma, lambda u: _euler_weight(ring, u), zero_poly)
    cases = 0
    for alpha in range(dim):
        ga = gamma_partial(state, alpha)
        gk = _series_map(
            ga, lambda u: SuperElement.from_poly(u) * kappa, SuperElement({})
        )
        cases += 1
        lhs1 = _series_map(ga, lambda u: _euler_weight(ring, u), zero_poly)
        rhs1 = _series_map(
            gk, lambda w: delta(w).to_poly(), zero_poly
        ) - _series_map(ga, lambda u: k * u, zero_poly)
        hit = _first_residual(lhs1, rhs1)
        if hit is not None:
            return VerificationReport(
                "euler-identity",
                False,
                trunc,
                cases,
                _failure(ring, f"hbar^1 direction {alpha}", hit[0], hit[1]),
            )
        cases += 1
        lhs0 = (e_series * ga).truncate(trunc)
        rhs0 = _series_map(
            gk, lambda w: q_s(w, ring).to_poly(), zero_poly
        ) + gamma.convolve(gk, lambda u, w: q_f(w, u).to_poly(), zero_poly)
        hit = _first_residual(lhs0, rhs0)
        if hit is not None:
            return VerificationReport(
                "euler-identity",
                False,
                trunc,
                cases,
                _failure(ring, f"hbar^0 direction {alpha}", hit[0], hit[1]),
            )
    return VerificationReport("euler-identity", True, trunc, cases, None)
