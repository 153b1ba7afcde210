"""Graded pieces of the Jacobian ideal and exact reduction onto a basis.

For a Cayley ring with potential S, the degree (c, w) piece of the Jacobian
ideal is spanned by multiplier monomials times the partials of S. A sparse
row echelon form over the graded monomial list, with every row operation
recorded against the original generators, yields three things at once: the
quotient dimension, a canonical monomial basis of the quotient, and for any
reduced element an odd cochain lambda with f = sum(a_i b_i) + Q_S(lambda).

Columns are monomials in descending grevlex order, so the pivot of a row is
its grevlex-leading monomial. Generators are enumerated x partials first,
then y partials, multipliers in descending grevlex; all later determinism
guarantees flow from that fixed order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .polyalg import Poly, grevlex_key, monomial_mul
from .supercomplex import SuperElement, q_s
from .toricring import NotCalabiYau, enumerate_graded_piece, is_calabi_yau


class NotCharge0(Exception):
    """Input to reduction has a monomial outside the basis charge."""


class BasisIncomplete(Exception):
    """A reduction left a nonzero residue at a weight beyond the basis table."""

    def __init__(self, weight):
        super().__init__(f"nonzero quotient residue at weight {weight}")
        self.weight = weight


class NonFiniteQuotient(Exception):
    """A probe weight above the expected range has a nonzero quotient."""

    def __init__(self, weight, dimension):
        super().__init__(
            f"quotient has dimension {dimension} at probe weight {weight}"
        )
        self.weight = weight
        self.dimension = dimension


def _axpy(dst, src, scale):
    """dst += scale * src on sparse dicts, dropping exact zeros."""
    for key, value in src.items():
        new = dst.get(key, Fraction(0)) + scale * value
        if new == 0:
            dst.pop(key, None)
        else:
            dst[key] = new


@dataclass(eq=False)
class GradedIdealPiece:
    """One graded piece, its echelonized generators, and the quotient data."""

    charge: tuple
    weight: int
    monomials: tuple
    generators: tuple
    rank: int
    standard_monomials: tuple
    col_index: dict = field(repr=False)
    pivots: dict = field(repr=False)

    def reduce_vector(self, vec):
        """Reduce a column vector; returns (residue, generator combination).

        The input equals sum(residue) over standard columns plus the recorded
        combination of original generators.
        """
        residue = dict(vec)
        combo = {}
        for col in sorted(residue):
            coeff = residue.get(col)
            if not coeff:
                continue
            hit = self.pivots.get(col)
            if hit is None:
                continue
            row, wit = hit
            _axpy(residue, row, -coeff)
            _axpy(combo, wit, coeff)
        return residue, combo


def ideal_piece(ring, charge, weight):
    """Echelonize the Jacobian ideal in degree (charge, weight)."""
    charge = tuple(charge)
    monomials = tuple(enumerate_graded_piece(ring, (charge, weight)))
    col_index = {m: i for i, m in enumerate(monomials)}
    generators = []
    rows = []
    order = list(range(ring.k, ring.nvars)) + list(range(ring.k))
    for i in order:
        part = ring.s_partials[i]
        if part.is_zero():
            continue
        pcharge, pweight = ring.degree_of_monomial(next(iter(part.terms)))
        mult_degree = (
            tuple(a - b for a, b in zip(charge, pcharge)),
            weight - pweight,
        )
        if mult_degree[1] < 0:
            continue
        for mult in enumerate_graded_piece(ring, mult_degree):
            row = {}
            for exps, coeff in part.terms.items():
                row[col_index[monomial_mul(mult, exps)]] = coeff
            generators.append((mult, i))
            rows.append(row)
    pivots = {}
    for gen_idx, row in enumerate(rows):
        row = dict(row)
        wit = {gen_idx: Fraction(1)}
        while row:
            lead = min(row)
            hit = pivots.get(lead)
            if hit is None:
                inv = Fraction(1) / row[lead]
                pivots[lead] = (
                    {c: v * inv for c, v in row.items()},
                    {g: v * inv for g, v in wit.items()},
                )
                break
            coeff = row[lead]
            _axpy(row, hit[0], -coeff)
            _axpy(wit, hit[1], -coeff)
    # clear pivot columns from the other rows, rightmost first, so every
    # surviving row touches only its pivot and standard columns
    for col in sorted(pivots, reverse=True):
        crow, cwit = pivots[col]
        for other, (row, wit) in pivots.items():
            if other == col or col not in row:
                continue
            coeff = row[col]
            _axpy(row, crow, -coeff)
            _axpy(wit, cwit, -coeff)
    standard = tuple(
        sorted(
            (m for i, m in enumerate(monomials) if i not in pivots),
            key=grevlex_key,
        )
    )
    return GradedIdealPiece(
        charge=charge,
        weight=weight,
        monomials=monomials,
        generators=tuple(generators),
        rank=len(pivots),
        standard_monomials=standard,
        col_index=col_index,
        pivots=pivots,
    )


@dataclass(eq=False)
class JacobianBasis:
    """Monomial basis of the graded Jacobian quotient at one charge."""

    ring: object
    charge: tuple
    max_weight: int
    monomials: tuple
    weights: tuple
    dims: tuple
    index_of: dict = field(repr=False)
    _pieces: dict = field(repr=False)

    def piece(self, weight):
        got = self._pieces.get(weight)
        if got is None:
            got = ideal_piece(self.ring, self.charge, weight)
            self._pieces[weight] = got
        return got

    def dimension(self, weight):
        return self.dims[weight] if 0 <= weight <= self.max_weight else None


def jacobian_basis(ring, allow_non_cy=False, probe_extra_weights=0):
    """Quotient basis at the anticanonical charge, weights 0..n-k.

    The quotient of a quasi-smooth system is concentrated in that weight
    range; probe_extra_weights optionally checks the next few weights are
    empty and raises NonFiniteQuotient otherwise.
    """
    if not allow_non_cy and not is_calabi_yau(ring):
        raise NotCalabiYau(
            f"anticanonical charge {ring.c_B} is nonzero; "
            "pass allow_non_cy=True to take the basis there"
        )
    charge = ring.c_B
    max_weight = ring.n - ring.k
    pieces = {}
    monomials = []
    weights = []
    dims = []
    for w in range(max_weight + 1):
        piece = ideal_piece(ring, charge, w)
        pieces[w] = piece
        dims.append(len(piece.standard_monomials))
        for m in piece.standard_monomials:
            monomials.append(m)
            weights.append(w)
    for w in range(max_weight + 1, max_weight + 1 + probe_extra_weights):
        piece = ideal_piece(ring, charge, w)
        pieces[w] = piece
        extra = len(piece.standard_monomials)
        if extra:
            raise NonFiniteQuotient(w, extra)
    return JacobianBasis(
        ring=ring,
        charge=charge,
        max_weight=max_weight,
        monomials=tuple(monomials),
        weights=tuple(weights),
        dims=tuple(dims),
        index_of={m: i for i, m in enumerate(monomials)},
        _pieces=pieces,
    )


@dataclass(frozen=True)
class ReductionWitness:
    """Coefficients over the basis plus the odd cochain closing the identity."""

    coefficients: tuple
    witness: SuperElement


def reduce_with_witness(ring, basis, f):
    """Express f as basis combination plus Q_S(lambda), with lambda returned.

    Every monomial of f must sit at the basis charge; the weight components
    are reduced independently. The defining identity is re-verified exactly
    before returning.
    """
    by_weight = {}
    for exps, coeff in f.terms.items():
        mcharge, mweight = ring.degree_of_monomial(exps)
        if mcharge != basis.charge:
            raise NotCharge0(
                f"monomial {exps} has charge {mcharge}, expected {basis.charge}"
            )
        by_weight.setdefault(mweight, {})[exps] = coeff
    coefficients = [Fraction(0)] * len(basis.monomials)
    lam_terms = {}
    for w in sorted(by_weight):
        piece = basis.piece(w)
        vec = {piece.col_index[m]: c for m, c in by_weight[w].items()}
        residue, combo = piece.reduce_vector(vec)
        if w <= basis.max_weight:
            for col, coeff in residue.items():
                coefficients[basis.index_of[piece.monomials[col]]] = coeff
        elif residue:
            raise BasisIncomplete(w)
        for gen_idx, coeff in combo.items():
            mult, i = piece.generators[gen_idx]
            key = (mult, (i,))
            lam_terms[key] = lam_terms.get(key, Fraction(0)) + coeff
    witness = SuperElement(lam_terms)
    rebuilt = q_s(witness, ring).to_poly()
    for coeff, mono in zip(coefficients, basis.monomials):
        if coeff:
            rebuilt = rebuilt + Poly.monomial(mono, coeff)
    if rebuilt != f:
        raise ArithmeticError("reduction identity failed to close")
    return ReductionWitness(tuple(coefficients), witness)
