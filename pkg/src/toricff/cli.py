"""Command line driver.

Problem files are plain ``key = value`` text: one ``rays`` line, one
``hypersurface`` line per equation (terms ``coeff (exponents)`` joined by
``+``, exponents over the x-variables only), an ``order`` line, and optional
``monomial-order`` / ``checks`` / ``retain-intermediates`` lines. Reports use
the same key/value shape so their tables can be re-ingested bit-exactly.

Exit codes: 0 when every requested check passes, 1 when a check fails, 2 for
input errors (unparsable files, torsion class groups, non-spanning rays,
refused non-Calabi-Yau input, and the like).
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import groupby
from pathlib import Path

from . import __version__
from .ffverify import (
    check_euler_identity,
    check_flat_f_axioms,
    check_fqm2,
    check_weight_homogeneity,
)
from .intlattice import TorsionClassGroup
from .jacobired import BasisIncomplete, NonFiniteQuotient, jacobian_basis
from .polyalg import Poly, parse_poly, render_poly
from .supercomplex import parse_super, render_super
from .toricring import (
    InhomogeneousHypersurface,
    NotCalabiYau,
    RaysDoNotSpan,
    build_cayley_ring,
    is_calabi_yau,
)
from .unfolding import UnfoldingState, run

CHECKS = {
    "fqm2": check_fqm2,
    "axioms": check_flat_f_axioms,
    "weights": check_weight_homogeneity,
    "euler": check_euler_identity,
}
CHECK_ORDER = ("fqm2", "axioms", "weights", "euler")
CHECK_LABELS = {
    "fqm2": "fqm2",
    "axioms": "flat-f-axioms",
    "weights": "weight-homogeneity",
    "euler": "euler-identity",
}
_NEEDS_ORDER_TWO = {"fqm2", "axioms", "euler"}
CHECK_CHOICES = ("all",) + CHECK_ORDER

_INPUT_ERRORS = (
    TorsionClassGroup,
    RaysDoNotSpan,
    NotCalabiYau,
    InhomogeneousHypersurface,
    NonFiniteQuotient,
    BasisIncomplete,
    ValueError,
)


class ProblemFormatError(ValueError):
    """Problem file rejected; message carries the offending line number."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class ProblemFile:
    """Parsed problem: ray data, hypersurface terms, and run options."""

    rays: tuple
    hypersurfaces: tuple  # per hypersurface, a tuple of (Fraction, exponents)
    order: int
    monomial_order: str = "grevlex"
    checks: str = "all"
    retain_intermediates: bool = False


_TERM = re.compile(r"(-?\d+(?:/\d+)?)\s*\(([^()]*)\)")
_T_FACTOR = re.compile(r"t(\d+)(?:\^(\d+))?")


def _parse_ivec(token, lineno, what):
    token = token.strip()
    if not (token.startswith("(") and token.endswith(")")):
        raise ProblemFormatError(lineno, f"{what}: expected a (…) tuple, got {token!r}")
    body = token[1:-1].replace(" ", "")
    if not body:
        raise ProblemFormatError(lineno, f"{what}: empty tuple")
    try:
        return tuple(int(part) for part in body.split(","))
    except ValueError:
        raise ProblemFormatError(lineno, f"{what}: bad integer tuple {token!r}") from None


def _parse_hypersurface(value, index, lineno, r):
    terms = []
    for chunk in value.split("+"):
        chunk = chunk.strip()
        match = _TERM.fullmatch(chunk)
        if not match:
            raise ProblemFormatError(
                lineno, f"hypersurface {index}: expected 'coeff (exponents)', got {chunk!r}"
            )
        coeff = Fraction(match.group(1))
        exps = _parse_ivec("(" + match.group(2) + ")", lineno, f"hypersurface {index}")
        if len(exps) != r:
            raise ProblemFormatError(
                lineno,
                f"hypersurface {index}: expected {r} exponents, got {len(exps)}",
            )
        if any(e < 0 for e in exps):
            raise ProblemFormatError(
                lineno, f"hypersurface {index}: negative exponent in {chunk!r}"
            )
        terms.append((coeff, exps))
    return tuple(terms)


def parse_problem(text):
    """Parse problem text; raise ProblemFormatError with a line number."""
    rays = None
    hypersurfaces = []
    order = None
    monomial_order = None
    checks = None
    retain = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ProblemFormatError(lineno, f"expected 'key = value', got {line!r}")
        key = key.strip()
        value = value.strip()
        if key == "rays":
            if rays is not None:
                raise ProblemFormatError(lineno, "duplicate rays line")
            rays = tuple(
                _parse_ivec(token, lineno, "rays") for token in value.split()
            )
            if not rays:
                raise ProblemFormatError(lineno, "rays: no tuples given")
            if len({len(ray) for ray in rays}) > 1:
                raise ProblemFormatError(lineno, "rays: mixed dimensions")
        elif key == "hypersurface":
            if rays is None:
                raise ProblemFormatError(lineno, "hypersurface given before rays")
            hypersurfaces.append(
                _parse_hypersurface(
                    value, len(hypersurfaces) + 1, lineno, len(rays)
                )
            )
        elif key == "order":
            if order is not None:
                raise ProblemFormatError(lineno, "duplicate order line")
            try:
                order = int(value)
            except ValueError:
                raise ProblemFormatError(lineno, f"order: not an integer: {value!r}") from None
            if order < 1:
                raise ProblemFormatError(lineno, "order must be at least 1")
        elif key == "monomial-order":
            if monomial_order is not None:
                raise ProblemFormatError(lineno, "duplicate monomial-order line")
            if value != "grevlex":
                raise ProblemFormatError(
                    lineno, f"monomial-order: only grevlex is supported, got {value!r}"
                )
            monomial_order = value
        elif key == "checks":
            if checks is not None:
                raise ProblemFormatError(lineno, "duplicate checks line")
            if value not in CHECK_CHOICES:
                raise ProblemFormatError(
                    lineno,
                    f"checks: expected one of {', '.join(CHECK_CHOICES)}, got {value!r}",
                )
            checks = value
        elif key == "retain-intermediates":
            if retain is not None:
                raise ProblemFormatError(lineno, "duplicate retain-intermediates line")
            if value not in ("yes", "no"):
                raise ProblemFormatError(
                    lineno, f"retain-intermediates: expected yes or no, got {value!r}"
                )
            retain = value == "yes"
        else:
            raise ProblemFormatError(lineno, f"unknown key {key!r}")
    last = len(text.splitlines()) + 1
    if rays is None:
        raise ProblemFormatError(last, "missing rays line")
    if not hypersurfaces:
        raise ProblemFormatError(last, "missing hypersurface lines")
    if order is None:
        raise ProblemFormatError(last, "missing order line")
    return ProblemFile(
        rays=rays,
        hypersurfaces=tuple(hypersurfaces),
        order=order,
        monomial_order=monomial_order or "grevlex",
        checks=checks or "all",
        retain_intermediates=bool(retain),
    )


def _render_ivec(vec):
    return "(" + ",".join(str(v) for v in vec) + ")"


def render_problem(problem):
    """Canonical problem text; parse_problem(render_problem(p)) == p."""
    lines = ["rays = " + " ".join(_render_ivec(ray) for ray in problem.rays)]
    for terms in problem.hypersurfaces:
        lines.append(
            "hypersurface = "
            + " + ".join(f"{coeff} {_render_ivec(exps)}" for coeff, exps in terms)
        )
    lines.append(f"order = {problem.order}")
    lines.append(f"monomial-order = {problem.monomial_order}")
    lines.append(f"checks = {problem.checks}")
    lines.append(
        "retain-intermediates = "
        + ("yes" if problem.retain_intermediates else "no")
    )
    return "\n".join(lines) + "\n"


def _build_ring(problem):
    polys = []
    for terms in problem.hypersurfaces:
        acc = {}
        for coeff, exps in terms:
            acc[exps] = acc.get(exps, Fraction(0)) + coeff
        polys.append(Poly(acc))
    return build_cayley_ring(problem.rays, polys)


def _t_monomial(multi):
    parts = []
    for direction, block in groupby(multi):
        count = len(tuple(block))
        parts.append(f"t{direction}" if count == 1 else f"t{direction}^{count}")
    return "*".join(parts)


def _parse_t_monomial(text):
    out = []
    for token in text.split("*"):
        match = _T_FACTOR.fullmatch(token)
        if not match:
            raise ValueError(f"bad t-monomial {text!r}")
        out.extend([int(match.group(1))] * int(match.group(2) or 1))
    return tuple(sorted(out))


def _header_lines(kind):
    return [
        f"# toricff {kind} report",
        f"version = {__version__}",
        "convention.monomial-order = grevlex",
        "convention.witness-rule = rref-canonical",
        "convention.charge-basis = row-hermite",
    ]


def _problem_lines(problem):
    return ["[problem]"] + render_problem(problem).splitlines()


def _grading_lines(ring):
    lines = ["[grading]"]
    lines.append(f"n = {ring.n}")
    lines.append(f"r = {ring.r}")
    lines.append(f"k = {ring.k}")
    lines.append(f"rank = {ring.charge_rank}")
    for i, name in enumerate(ring.names):
        charge = ",".join(str(c) for c in ring.var_charges[i])
        lines.append(f"deg.{name} = ({charge} | {ring.var_weights[i]})")
    lines.append("c_B = (" + ",".join(str(c) for c in ring.c_B) + ")")
    lines.append("calabi-yau = " + ("yes" if is_calabi_yau(ring) else "no"))
    return lines


def _basis_lines(ring, basis):
    lines = ["[basis]"]
    lines.append("charge = (" + ",".join(str(c) for c in basis.charge) + ")")
    lines.append(f"max-weight = {basis.max_weight}")
    lines.append("dims = " + " ".join(str(d) for d in basis.dims))
    for i, mono in enumerate(basis.monomials):
        lines.append(f"basis.{i} = {render_poly(Poly.monomial(mono), ring.names)}")
        lines.append(f"basis.{i}.weight = {basis.weights[i]}")
        lines.append(f"basis.{i}.t-weight = {1 - basis.weights[i]}")
    return lines


def _table_lines(state):
    ring = state.ring
    dim = len(state.basis.monomials)
    sort_key = lambda multi: (len(multi), multi)
    lines = ["[tables]"]
    lines.append(f"order = {state.order}")
    for multi in sorted(state.u_table, key=sort_key):
        rendered = render_poly(state.u_table[multi], ring.names)
        lines.append(f"u.{_t_monomial(multi)} = {rendered}")
    for multi in sorted(state.a_table, key=sort_key):
        row = state.a_table[multi]
        for rho in range(dim):
            lines.append(f"a.{_t_monomial(multi)}.{rho} = {row[rho]}")
    for multi in sorted(state.lam_table, key=sort_key):
        rendered = render_super(
            state.lam_table[multi], ring.names, ring.eta_names
        )
        lines.append(f"lambda.{_t_monomial(multi)} = {rendered}")
    if state.inputs:
        for multi in sorted(state.inputs, key=sort_key):
            rendered = render_poly(state.inputs[multi], ring.names)
            lines.append(f"input.{_t_monomial(multi)} = {rendered}")
    return lines


def _run_checks(state, selection):
    selected = CHECK_ORDER if selection == "all" else (selection,)
    results = []
    for key in selected:
        if state.order < 2 and key in _NEEDS_ORDER_TWO:
            results.append((key, None))
        else:
            results.append((key, CHECKS[key](state)))
    return results


def _verification_lines(results):
    lines = ["[verification]"]
    passed = True
    for key, report in results:
        label = CHECK_LABELS[key]
        if report is None:
            lines.append(f"check.{label} = skipped (needs order >= 2)")
            continue
        lines.append(f"check.{label} = " + ("pass" if report.passed else "fail"))
        lines.append(f"check.{label}.truncation = {report.truncation}")
        lines.append(f"check.{label}.cases = {report.cases}")
        if report.failure is not None:
            fail = report.failure
            lines.append(f"check.{label}.failure.site = {fail.site}")
            lines.append(
                f"check.{label}.failure.monomial = {_render_ivec(fail.monomial)}"
            )
            if fail.weight is not None:
                lines.append(f"check.{label}.failure.weight = {fail.weight}")
            lines.append(f"check.{label}.failure.residual = {fail.residual}")
        passed = passed and report.passed
    lines.append("status = " + ("pass" if passed else "fail"))
    return lines, passed


def cmd_grading(problem):
    """Charge/weight summary of the ray data and hypersurface degrees."""
    ring = _build_ring(problem)
    lines = _header_lines("grading") + _problem_lines(problem) + _grading_lines(ring)
    return 0, "\n".join(lines) + "\n"


def cmd_basis(problem, allow_non_cy=False):
    """Graded quotient basis report with per-weight dimensions."""
    ring = _build_ring(problem)
    basis = jacobian_basis(ring, allow_non_cy=allow_non_cy)
    lines = (
        _header_lines("basis")
        + _problem_lines(problem)
        + _grading_lines(ring)
        + _basis_lines(ring, basis)
    )
    return 0, "\n".join(lines) + "\n"


def cmd_unfold(problem):
    """Full unfolding run: tables to the requested order plus verification."""
    ring = _build_ring(problem)
    basis = jacobian_basis(ring)
    state = run(ring, basis, problem.order, debug=problem.retain_intermediates)
    results = _run_checks(state, problem.checks)
    check_lines, passed = _verification_lines(results)
    lines = (
        _header_lines("unfolding")
        + _problem_lines(problem)
        + _grading_lines(ring)
        + _basis_lines(ring, basis)
        + _table_lines(state)
        + check_lines
    )
    return (0 if passed else 1), "\n".join(lines) + "\n"


def _split_sections(text):
    sections = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections.setdefault(current, [])
        elif current is not None:
            sections[current].append(line)
    return sections


def ingest_report(text):
    """Rebuild the unfolding state from a report's tables, bit-exactly."""
    sections = _split_sections(text)
    if "problem" not in sections or "tables" not in sections:
        raise ValueError("report lacks [problem] or [tables] sections")
    problem = parse_problem("\n".join(sections["problem"]) + "\n")
    ring = _build_ring(problem)
    basis = jacobian_basis(ring, allow_non_cy=True)
    dim = len(basis.monomials)
    order = None
    u_table = {}
    a_rows = {}
    lam_table = {}
    inputs = {}
    for line in sections["tables"]:
        key, sep, value = line.partition(" = ")
        if not sep:
            raise ValueError(f"bad table line {line!r}")
        if key == "order":
            order = int(value)
        elif key.startswith("u."):
            u_table[_parse_t_monomial(key[2:])] = parse_poly(value, ring.names)
        elif key.startswith("a."):
            body, _, rho = key[2:].rpartition(".")
            a_rows.setdefault(_parse_t_monomial(body), {})[int(rho)] = Fraction(value)
        elif key.startswith("lambda."):
            lam_table[_parse_t_monomial(key[7:])] = parse_super(
                value, ring.names, ring.eta_names
            )
        elif key.startswith("input."):
            inputs[_parse_t_monomial(key[6:])] = parse_poly(value, ring.names)
        else:
            raise ValueError(f"unknown table key {key!r}")
    if order is None:
        raise ValueError("report tables lack an order line")
    a_table = {
        multi: tuple(row.get(rho, Fraction(0)) for rho in range(dim))
        for multi, row in a_rows.items()
    }
    return UnfoldingState(
        ring=ring,
        basis=basis,
        order=order,
        t_weights=tuple(1 - w for w in basis.weights),
        u_table=u_table,
        a_table=a_table,
        lam_table=lam_table,
        inputs=inputs or None,
    )


def _emit(text, out_path):
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="toricff",
        description="Unfolding tables and flat F-manifold checks for "
        "hypersurfaces in toric varieties.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_grading = sub.add_parser("grading", help="print the charge/weight summary")
    p_basis = sub.add_parser("basis", help="print the graded quotient basis")
    p_unfold = sub.add_parser("unfold", help="run the unfolding and its checks")
    for p in (p_grading, p_basis, p_unfold):
        p.add_argument("problem", help="path to a problem file")
        p.add_argument("--out", help="write the report here instead of stdout")
    p_basis.add_argument(
        "--allow-non-cy",
        action="store_true",
        help="take the basis at the anticanonical charge even when c_B != 0",
    )
    p_unfold.add_argument(
        "--order", type=int, help="override the truncation order"
    )
    p_unfold.add_argument(
        "--checks",
        choices=CHECK_CHOICES,
        help="override which verification checks run",
    )
    args = parser.parse_args(argv)
    try:
        text = Path(args.problem).read_text()
    except OSError as exc:
        print(f"error: cannot read {args.problem}: {exc}", file=sys.stderr)
        return 2
    try:
        problem = parse_problem(text)
        if args.command == "grading":
            code, report = cmd_grading(problem)
        elif args.command == "basis":
            code, report = cmd_basis(problem, allow_non_cy=args.allow_non_cy)
        else:
            if args.order is not None:
                if args.order < 1:
                    raise ValueError("--order must be at least 1")
                problem = replace(problem, order=args.order)
            if args.checks is not None:
                problem = replace(problem, checks=args.checks)
            code, report = cmd_unfold(problem)
    except _INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
