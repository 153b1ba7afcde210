"""Inductive construction of the universal unfolding and structure constants.

Directions are indexed by the Jacobian quotient basis: t^alpha dual to the
basis monomial u_alpha, with wt(t^alpha) = 1 - wt(u_alpha). Tables are keyed
by sorted multi-indices (multisets over the basis index set); gamma and the
structure constants are the generating series

  Gamma            = sum over multisets C of u_C t^C / C!
  A_alphabeta^rho  = sum over multisets C of a_{(alpha,beta)+C}^rho t^C / C!

so the series produced here carry the already-divided coefficients.

Each new multiset gamma of size m >= 2 is settled by a single reduction: with
(alpha, beta) the two smallest entries and C the remaining multiset,

  f = sum over A+B=C of W(A,B) u_{A+alpha} u_{B+beta}
    - sum over A+B=C, B nonempty, of W(A,B) sum_rho a_{(alpha,beta)+A}^rho u_{B+rho}
    - sum over A+B=C, A nonempty, of W(A,B) Q_{u_A}(lambda_{(alpha,beta)+B})

with W(A,B) the componentwise binomial split weight. Reducing f against the
basis defines a_gamma and lambda_gamma, and u_gamma := Delta(lambda_gamma).
For size 2 this is literally the reduction of u_alpha u_beta. The weight of
every stored u_gamma is checked to equal 1 - sum of wt(t) over gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import comb, factorial, prod

from .jacobired import reduce_with_witness
from .polyalg import Poly
from .supercomplex import SuperElement, delta, q_f
from .toricring import NotCalabiYau, is_calabi_yau


class MissingTableEntry(KeyError):
    """A required lower-order table entry has not been computed."""


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Formal series over t-monomials, cut at a fixed total degree.

    Keys are exponent tuples over the direction set; absent keys read as the
    stored zero value, so arithmetic may drop vanishing coefficients freely.
    """

    dim: int
    order: int
    coefficients: dict = field(repr=False)
    zero: object = Fraction(0)

    def __post_init__(self):
        clean = {}
        for key, value in self.coefficients.items():
            key = tuple(key)
            if len(key) != self.dim:
                raise ValueError(f"key {key} has wrong dimension")
            if sum(key) > self.order:
                raise ValueError(f"key {key} beyond truncation {self.order}")
            if not _vanishes(value):
                clean[key] = value
        object.__setattr__(self, "coefficients", clean)

    def coefficient(self, expvec):
        key = tuple(expvec)
        if len(key) != self.dim or sum(key) > self.order:
            raise ValueError(f"monomial {key} outside the series domain")
        return self.coefficients.get(key, self.zero)

    def nonzero_items(self):
        return tuple(sorted(self.coefficients.items(), key=lambda kv: kv[0]))

    def truncate(self, order):
        kept = {k: v for k, v in self.coefficients.items() if sum(k) <= order}
        return TruncatedSeries(self.dim, order, kept, self.zero)

    def __add__(self, other):
        out = dict(self.coefficients)
        for key, value in other.coefficients.items():
            out[key] = out[key] + value if key in out else value
        return TruncatedSeries(
            self.dim, min(self.order, other.order), _clip(out, self.order, other.order), self.zero
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return TruncatedSeries(
            self.dim, self.order, {k: -v for k, v in self.coefficients.items()}, self.zero
        )

    def __mul__(self, other):
        return self.convolve(other, lambda a, b: a * b, self.zero * other.zero)

    def convolve(self, other, pair, zero):
        """Product with a caller-chosen coefficient pairing."""
        order = min(self.order, other.order)
        out = {}
        for akey, avalue in self.coefficients.items():
            for bkey, bvalue in other.coefficients.items():
                key = tuple(x + y for x, y in zip(akey, bkey))
                if sum(key) > order:
                    continue
                value = pair(avalue, bvalue)
                out[key] = out[key] + value if key in out else value
        return TruncatedSeries(self.dim, order, out, zero)

    def partial(self, direction):
        out = {}
        for key, value in self.coefficients.items():
            if key[direction] == 0:
                continue
            lowered = (
                key[:direction] + (key[direction] - 1,) + key[direction + 1 :]
            )
            out[lowered] = key[direction] * value
        return TruncatedSeries(self.dim, self.order - 1, out, self.zero)


def _vanishes(value):
    return value.is_zero() if hasattr(value, "is_zero") else value == 0


def _clip(coefficients, *orders):
    order = min(orders)
    return {k: v for k, v in coefficients.items() if sum(k) <= order}


@dataclass(eq=False)
class UnfoldingState:
    """All tables of one unfolding run, complete through the given order."""

    ring: object
    basis: object
    order: int
    t_weights: tuple
    u_table: dict
    a_table: dict
    lam_table: dict
    inputs: dict | None = None


def _u(state, key):
    got = state.u_table.get(key)
    if got is None:
        raise MissingTableEntry(f"u table lacks {key}")
    return got


def _set_partitions(m, blocks):
    """Unordered partitions of range(m) into exactly `blocks` nonempty blocks."""

    def rec(pos, parts):
        if pos == m:
            if len(parts) == blocks:
                yield [tuple(p) for p in parts]
            return
        if len(parts) + (m - pos) < blocks:
            return
        for part in parts:
            part.append(pos)
            yield from rec(pos + 1, parts)
            part.pop()
        if len(parts) < blocks:
            parts.append([pos])
            yield from rec(pos + 1, parts)
            parts.pop()

    yield from rec(0, [])


def partition_sum(state, multi, i):
    """Sum of u-products over partitions of multi into len(multi) - i blocks."""
    multi = tuple(sorted(multi))
    m = len(multi)
    if not 0 <= i <= m - 1:
        raise ValueError(f"block defect {i} out of range for size {m}")
    total = Poly({})
    for partition in _set_partitions(m, m - i):
        term = None
        for block in partition:
            u = _u(state, tuple(sorted(multi[p] for p in block)))
            term = u if term is None else term * u
        total = total + term
    return total


def _expand(expvec):
    out = []
    for index, count in enumerate(expvec):
        out.extend([index] * count)
    return tuple(out)


def _splits(expvec):
    """All componentwise decompositions A + B = C with binomial weights."""
    for avec in product(*(range(c + 1) for c in expvec)):
        bvec = tuple(c - a for c, a in zip(expvec, avec))
        weight = prod(comb(c, a) for c, a in zip(expvec, avec))
        yield avec, bvec, weight


def _assemble_input(state, multi):
    alpha, beta = multi[0], multi[1]
    dim = len(state.basis.monomials)
    tail = [0] * dim
    for j in multi[2:]:
        tail[j] += 1
    f = Poly({})
    for avec, bvec, weight in _splits(tuple(tail)):
        a_part = _expand(avec)
        b_part = _expand(bvec)
        f = f + weight * (
            _u(state, tuple(sorted(a_part + (alpha,))))
            * _u(state, tuple(sorted(b_part + (beta,))))
        )
        if b_part:
            a_key = tuple(sorted((alpha, beta) + a_part))
            a_vals = state.a_table.get(a_key)
            if a_vals is None:
                raise MissingTableEntry(f"a table lacks {a_key}")
            for rho, value in enumerate(a_vals):
                if value:
                    f = f - (weight * value) * _u(
                        state, tuple(sorted(b_part + (rho,)))
                    )
        if a_part:
            lam_key = tuple(sorted((alpha, beta) + b_part))
            lam = state.lam_table.get(lam_key)
            if lam is None:
                raise MissingTableEntry(f"lambda table lacks {lam_key}")
            if not lam.is_zero():
                f = f - weight * q_f(lam, _u(state, a_part)).to_poly()
    return f


def step(state, multi):
    """Settle one multiset of size >= 2 and store its table entries."""
    multi = tuple(sorted(multi))
    if len(multi) < 2:
        raise ValueError("step needs a multiset of size at least 2")
    f = _assemble_input(state, multi)
    if state.inputs is not None:
        state.inputs[multi] = f
    reduced = reduce_with_witness(state.ring, state.basis, f)
    u_new = delta(reduced.witness).to_poly()
    target = 1 - sum(state.t_weights[j] for j in multi)
    for exps in u_new.terms:
        if state.ring.degree_of_monomial(exps)[1] != target:
            raise ArithmeticError(
                f"u entry for {multi} breaks weight homogeneity"
            )
    state.a_table[multi] = reduced.coefficients
    state.lam_table[multi] = reduced.witness
    state.u_table[multi] = u_new


def run(ring, basis, order, debug=False):
    """Process every multiset of size <= order in canonical order."""
    if order < 1:
        raise ValueError("order must be at least 1")
    if not is_calabi_yau(ring):
        raise NotCalabiYau(
            "the unfolding products only stay in charge 0 for anticanonical "
            f"charge zero, got {ring.c_B}"
        )
    dim = len(basis.monomials)
    state = UnfoldingState(
        ring=ring,
        basis=basis,
        order=order,
        t_weights=tuple(1 - w for w in basis.weights),
        u_table={
            (i,): Poly.monomial(m) for i, m in enumerate(basis.monomials)
        },
        a_table={},
        lam_table={},
        inputs={} if debug else None,
    )
    for size in range(2, order + 1):
        for multi in combinations_with_replacement(range(dim), size):
            step(state, multi)
    return state


def _factorial_of(expvec):
    return prod(factorial(c) for c in expvec)


def _remove_one(multi, value):
    pos = multi.index(value)
    return multi[:pos] + multi[pos + 1 :]


def _expvec(multi, dim):
    out = [0] * dim
    for j in multi:
        out[j] += 1
    return tuple(out)


def gamma_series(state):
    """Gamma as a series of weight-homogeneous polynomials, degree <= order."""
    dim = len(state.basis.monomials)
    coeffs = {}
    for multi, u in state.u_table.items():
        key = _expvec(multi, dim)
        coeffs[key] = Fraction(1, _factorial_of(key)) * u
    return TruncatedSeries(dim, state.order, coeffs, Poly({}))


def gamma_partial(state, alpha):
    """The alpha-derivative of gamma, complete to degree order - 1."""
    dim = len(state.basis.monomials)
    coeffs = {}
    for multi, u in state.u_table.items():
        if alpha not in multi:
            continue
        key = _expvec(_remove_one(multi, alpha), dim)
        coeffs[key] = Fraction(1, _factorial_of(key)) * u
    return TruncatedSeries(dim, state.order - 1, coeffs, Poly({}))


def structure_series(state, alpha, beta):
    """Structure constants toward each basis direction, degree <= order - 2."""
    dim = len(state.basis.monomials)
    per_rho = [{} for _ in range(dim)]
    for multi, values in state.a_table.items():
        if alpha not in multi:
            continue
        rest = _remove_one(multi, alpha)
        if beta not in rest:
            continue
        key = _expvec(_remove_one(rest, beta), dim)
        scale = Fraction(1, _factorial_of(key))
        for rho, value in enumerate(values):
            if value:
                per_rho[rho][key] = scale * value
    return tuple(
        TruncatedSeries(dim, state.order - 2, coeffs, Fraction(0))
        for coeffs in per_rho
    )


def lambda_series(state, alpha, beta):
    """The witness series paired with (alpha, beta), degree <= order - 2."""
    dim = len(state.basis.monomials)
    coeffs = {}
    for multi, lam in state.lam_table.items():
        if alpha not in multi:
            continue
        rest = _remove_one(multi, alpha)
        if beta not in rest:
            continue
        key = _expvec(_remove_one(rest, beta), dim)
        coeffs[key] = Fraction(1, _factorial_of(key)) * lam
    return TruncatedSeries(dim, state.order - 2, coeffs, SuperElement({}))
