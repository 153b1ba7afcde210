"""Odd-variable extension of a Cayley ring and its de Rham realization.

Every ring variable q_i gets an odd partner eta_i. Elements live in two
isomorphic pictures: SuperElement carries sorted eta index tuples, FormElement
carries sorted dq index tuples, and mu translates between them. The operators
below (odd Laplacian, potential contraction, twisted differential, Euler
contraction) all preserve exact rational coefficients.

Sign conventions, with all indices zero based:
  * removing eta_i from a sorted tuple E costs (-1)^(position of i in E),
  * inserting dq_i into a sorted tuple J costs (-1)^(number of entries < i),
  * mu sends (m, E) to (-1)^(sum of E) times (m, complement of E).
"""

from __future__ import annotations

from fractions import Fraction

from .polyalg import Poly, grevlex_key, monomial_mul, parse_terms


class InhomogeneousCohDegree(ValueError):
    """Raised when a bracket input mixes odd degrees."""


def _merge(a, b):
    """Sorted union of two disjoint sorted index tuples with its Koszul sign.

    Returns (None, 0) when the tuples overlap, which kills the term.
    """
    overlap = set(a) & set(b)
    if overlap:
        return None, 0
    inversions = sum(1 for x in a for y in b if x > y)
    return tuple(sorted(a + b)), (-1 if inversions % 2 else 1)


def _sorted_drop(indices, pos):
    return indices[:pos] + indices[pos + 1 :]


def _insert_sign(i, indices):
    below = sum(1 for j in indices if j < i)
    return -1 if below % 2 else 1


class _OddTerms:
    """Shared container: {(exponent tuple, sorted odd index tuple): Fraction}."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        clean = {}
        for (exps, odd), coeff in terms.items():
            c = coeff if isinstance(coeff, Fraction) else Fraction(coeff)
            if c != 0:
                clean[(tuple(exps), tuple(odd))] = c
        self.terms = clean

    @classmethod
    def from_poly(cls, f):
        return cls({(exps, ()): c for exps, c in f.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return type(self) is type(other) and self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + coeff
        return type(self)(out)

    def __sub__(self, other):
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            out[key] = out.get(key, Fraction(0)) - coeff
        return type(self)(out)

    def __neg__(self):
        return type(self)({k: -c for k, c in self.terms.items()})

    def __mul__(self, other):
        if type(other) is type(self):
            out = {}
            for (e1, o1), c1 in self.terms.items():
                for (e2, o2), c2 in other.terms.items():
                    odd, sign = _merge(o1, o2)
                    if odd is None:
                        continue
                    key = (monomial_mul(e1, e2), odd)
                    out[key] = out.get(key, Fraction(0)) + sign * c1 * c2
            return type(self)(out)
        if isinstance(other, Poly):
            return self * type(self).from_poly(other)
        scale = Fraction(other)
        return type(self)({k: c * scale for k, c in self.terms.items()})

    def __rmul__(self, other):
        # scalars and polynomials are even, so no sign appears
        return self.__mul__(other)

    def to_poly(self):
        out = {}
        for (exps, odd), coeff in self.terms.items():
            if odd:
                raise ValueError("element carries odd factors")
            out[exps] = coeff
        return Poly(out)

    def __repr__(self):
        return f"{type(self).__name__}({self.terms!r})"


class SuperElement(_OddTerms):
    """Polynomial in the q variables and their odd partners eta."""


class FormElement(_OddTerms):
    """Polynomial-coefficient differential form in the dq generators."""


def delta(w):
    """Odd Laplacian: sum over i of d/dq_i d/eta_i."""
    out = {}
    for (exps, etas), coeff in w.terms.items():
        for pos, i in enumerate(etas):
            if exps[i] == 0:
                continue
            sign = -1 if pos % 2 else 1
            lowered = exps[:i] + (exps[i] - 1,) + exps[i + 1 :]
            key = (lowered, _sorted_drop(etas, pos))
            out[key] = out.get(key, Fraction(0)) + sign * coeff * exps[i]
    return SuperElement(out)


def _q_parts(w, partials):
    out = {}
    for (exps, etas), coeff in w.terms.items():
        for pos, i in enumerate(etas):
            part = partials[i]
            if part.is_zero():
                continue
            sign = -1 if pos % 2 else 1
            dropped = _sorted_drop(etas, pos)
            for pe, pc in part.terms.items():
                key = (monomial_mul(exps, pe), dropped)
                out[key] = out.get(key, Fraction(0)) + sign * coeff * pc
    return SuperElement(out)


def q_f(w, f):
    """Contraction against the partials of an arbitrary even potential f."""
    nvars = len(next(iter(f.terms), ()))
    if f.is_zero():
        for (exps, _etas) in w.terms:
            nvars = len(exps)
            break
    partials = [f.partial(i) for i in range(nvars)]
    return _q_parts(w, partials)


def q_s(w, ring):
    """Contraction against the partials of the ring potential S."""
    return _q_parts(w, ring.s_partials)


def k_s(w, ring):
    """Twisted Laplacian Q_S + delta."""
    return q_s(w, ring) + delta(w)


def _coh_degree(w):
    degrees = {len(etas) for _exps, etas in w.terms}
    if len(degrees) > 1:
        raise InhomogeneousCohDegree(
            f"mixed odd degrees {sorted(degrees)} in bracket input"
        )
    return degrees.pop() if degrees else 0


def ell2(a, b, ring):
    """Defect bracket of the twisted Laplacian on a pair of elements.

    The first argument must be homogeneous in odd degree, and the potential
    term drops out: the same bracket is produced by delta alone.
    """
    deg = _coh_degree(a)
    sign = -1 if deg % 2 else 1
    return k_s(a * b, ring) - k_s(a, ring) * b - sign * (a * k_s(b, ring))


def mu(w):
    """Isomorphism onto forms: (m, E) goes to signed (m, complement of E)."""
    out = {}
    for (exps, etas), coeff in w.terms.items():
        present = set(etas)
        dqs = tuple(i for i in range(len(exps)) if i not in present)
        sign = -1 if sum(etas) % 2 else 1
        out[(exps, dqs)] = sign * coeff
    return FormElement(out)


def mu_inverse(omega):
    out = {}
    for (exps, dqs), coeff in omega.terms.items():
        present = set(dqs)
        etas = tuple(i for i in range(len(exps)) if i not in present)
        sign = -1 if sum(etas) % 2 else 1
        out[(exps, etas)] = sign * coeff
    return SuperElement(out)


def form_d(omega):
    """Exterior derivative on polynomial-coefficient forms."""
    out = {}
    for (exps, dqs), coeff in omega.terms.items():
        present = set(dqs)
        for i in range(len(exps)):
            if exps[i] == 0 or i in present:
                continue
            sign = _insert_sign(i, dqs)
            lowered = exps[:i] + (exps[i] - 1,) + exps[i + 1 :]
            key = (lowered, tuple(sorted(dqs + (i,))))
            out[key] = out.get(key, Fraction(0)) + sign * coeff * exps[i]
    return FormElement(out)


def _wedge_parts(omega, partials):
    out = {}
    for (exps, dqs), coeff in omega.terms.items():
        present = set(dqs)
        for i, part in enumerate(partials):
            if i in present or part.is_zero():
                continue
            sign = _insert_sign(i, dqs)
            grown = tuple(sorted(dqs + (i,)))
            for pe, pc in part.terms.items():
                key = (monomial_mul(exps, pe), grown)
                out[key] = out.get(key, Fraction(0)) + sign * coeff * pc
    return FormElement(out)


def wedge_df(f, omega):
    """Left wedge by the exact one-form df."""
    nvars = len(next(iter(omega.terms), ((), ()))[0]) if omega.terms else 0
    if omega.is_zero():
        return FormElement({})
    partials = [f.partial(i) for i in range(nvars)]
    return _wedge_parts(omega, partials)


def wedge_ds(omega, ring):
    """Left wedge by dS, partials cached on the ring."""
    return _wedge_parts(omega, ring.s_partials)


def twisted_d(omega, ring):
    """Differential d + dS wedge, conjugate to the twisted Laplacian."""
    return form_d(omega) + wedge_ds(omega, ring)


def contract_euler(omega, phi):
    """Contraction with the Euler field of an integer weight functional phi."""
    out = {}
    for (exps, dqs), coeff in omega.terms.items():
        for pos, j in enumerate(dqs):
            if phi[j] == 0:
                continue
            sign = -1 if pos % 2 else 1
            raised = exps[:j] + (exps[j] + 1,) + exps[j + 1 :]
            key = (raised, _sorted_drop(dqs, pos))
            out[key] = out.get(key, Fraction(0)) + sign * coeff * phi[j]
    return FormElement(out)


def epsilon_w_s(omega, ring):
    """Anticommutator of the twisted differential with the weight contraction.

    On a weight-homogeneous form of weight w this acts as multiplication by
    w + S; the composite below is the definition, that closed form is what the
    tests check.
    """
    theta = contract_euler(omega, ring.var_weights)
    return twisted_d(theta, ring) + contract_euler(
        twisted_d(omega, ring), ring.var_weights
    )


def form_scale(f, omega):
    """Multiply a form by an even polynomial or scalar."""
    if isinstance(f, Poly):
        out = {}
        for (exps, dqs), coeff in omega.terms.items():
            for pe, pc in f.terms.items():
                key = (monomial_mul(exps, pe), dqs)
                out[key] = out.get(key, Fraction(0)) + coeff * pc
        return FormElement(out)
    return omega * f


def super_weight(ring, exps, etas):
    """Weight of one super term; each eta_i weighs 1 - weight(q_i)."""
    wts = ring.var_weights
    return sum(e * w for e, w in zip(exps, wts)) + sum(1 - wts[i] for i in etas)


def render_super(w, names, eta_names):
    """Canonical text form: eta groups ascending, then descending grevlex."""
    if w.is_zero():
        return "0"
    keys = sorted(w.terms, key=lambda k: grevlex_key(k[0]), reverse=True)
    keys.sort(key=lambda k: k[1])
    parts = []
    for exps, etas in keys:
        coeff = w.terms[(exps, etas)]
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        factors.extend(eta_names[i] for i in etas)
        if not factors:
            parts.append(str(coeff))
            continue
        body = "*".join(factors)
        if coeff == 1:
            parts.append(body)
        elif coeff == -1:
            parts.append(f"-{body}")
        else:
            parts.append(f"{coeff}*{body}")
    out = parts[0]
    for term in parts[1:]:
        if term.startswith("-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


def parse_super(text, names, eta_names):
    """Inverse of render_super; tolerates unsorted eta factors via the sign."""
    var_index = {name: i for i, name in enumerate(names)}
    eta_index = {name: i for i, name in enumerate(eta_names)}
    terms = {}
    for coeff, powers in parse_terms(text):
        exps = [0] * len(names)
        seen = []
        dead = False
        for name, e in powers.items():
            if name in var_index:
                exps[var_index[name]] += e
            elif name in eta_index:
                idx = eta_index[name]
                if e > 1 or idx in seen:
                    dead = True
                    break
                seen.append(idx)
            else:
                raise ValueError(f"unknown variable {name!r}")
        if dead:
            continue
        inversions = sum(
            1
            for a in range(len(seen))
            for b in range(a + 1, len(seen))
            if seen[a] > seen[b]
        )
        if inversions % 2:
            coeff = -coeff
        key = (tuple(exps), tuple(sorted(seen)))
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return SuperElement(terms)
