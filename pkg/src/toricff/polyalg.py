"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is a tuple of nonnegative exponents; variable order is fixed by the
caller (Cayley rings put the y variables first). Polynomials are immutable
once built and all arithmetic stays in fractions.Fraction.
"""

from __future__ import annotations

import re
from fractions import Fraction


def grevlex_key(exps):
    """Sort key realizing graded reverse lexicographic order, ascending.

    Higher total degree wins; at equal degree the monomial whose trailing
    exponent difference is negative is the larger one. Earlier positions are
    the more significant variables.
    """
    return (sum(exps), tuple(-e for e in reversed(exps)))


def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms):
        clean = {}
        for exps, coeff in terms.items():
            c = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
            if c != 0:
                clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, exps, coeff=1):
        return cls({tuple(exps): Fraction(coeff)})

    @classmethod
    def constant(cls, nvars, coeff):
        return cls({(0,) * nvars: Fraction(coeff)})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) + coeff
        return Poly(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) - coeff
        return Poly(out)

    def __neg__(self):
        return Poly({e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Poly):
            out = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    key = monomial_mul(e1, e2)
                    out[key] = out.get(key, Fraction(0)) + c1 * c2
            return Poly(out)
        return Poly({e: c * Fraction(other) for e, c in self.terms.items()})

    __rmul__ = __mul__

    def partial(self, i):
        out = {}
        for exps, coeff in self.terms.items():
            if exps[i] > 0:
                lowered = exps[:i] + (exps[i] - 1,) + exps[i + 1 :]
                out[lowered] = out.get(lowered, Fraction(0)) + coeff * exps[i]
        return Poly(out)

    def __repr__(self):
        return f"Poly({self.terms!r})"


def homogeneous_components(f, degree_fn):
    """Split f into its degree_fn-homogeneous pieces, keyed by degree."""
    buckets = {}
    for exps, coeff in f.terms.items():
        buckets.setdefault(degree_fn(exps), {})[exps] = coeff
    return {deg: Poly(terms) for deg, terms in buckets.items()}


def _render_term(exps, coeff, names):
    factors = []
    for name, e in zip(names, exps):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    if not factors:
        return str(coeff)
    body = "*".join(factors)
    if coeff == 1:
        return body
    if coeff == -1:
        return f"-{body}"
    return f"{coeff}*{body}"


def render_poly(f, names, extra=()):
    """Canonical text form: terms in descending grevlex order.

    extra holds rendered odd factors (used by the super layer) appended to
    every term.
    """
    if f.is_zero():
        return "0"
    parts = []
    for exps in sorted(f.terms, key=grevlex_key, reverse=True):
        term = _render_term(exps, f.terms[exps], names)
        if extra:
            tail = "*".join(extra)
            if term == "1":
                term = tail
            elif term == "-1":
                term = f"-{tail}"
            else:
                term = f"{term}*{tail}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        if term.startswith("-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


_FACTOR = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\^(\d+))?$")


def parse_terms(text):
    """Lexical split of a rendered polynomial into (coeff, {name: exp}) pairs."""
    src = text.strip()
    if src == "0":
        return []
    src = src.replace(" - ", " + -")
    out = []
    for chunk in src.split(" + "):
        chunk = chunk.strip()
        sign = Fraction(1)
        if chunk.startswith("-"):
            sign = Fraction(-1)
            chunk = chunk[1:]
        coeff = sign
        powers = {}
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in term {chunk!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"bad factor {factor!r}")
            name, exp = m.group(1), int(m.group(2) or 1)
            powers[name] = powers.get(name, 0) + exp
        out.append((coeff, powers))
    return out


def parse_poly(text, names):
    index = {name: i for i, name in enumerate(names)}
    terms = {}
    for coeff, powers in parse_terms(text):
        exps = [0] * len(names)
        for name, e in powers.items():
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            exps[index[name]] += e
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return Poly(terms)
