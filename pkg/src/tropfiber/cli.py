"""Command-line interface.

Exit status: 0 on success, 1 for unreadable input or malformed arguments,
2 when the input is well formed but violates an invariant or precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import balancing, metrics, polytope, tropical
from .polytope import InvariantError, NotInteriorError, ParseError, Polytope
from .ratlin import LinAlgError, fmt, fmt_vec, to_rational

BUNDLED = ("cp2", "blowup1", "blowup2a", "blowup2b")


class UsageError(Exception):
    """Exit 1: bad input text or arguments."""


class DomainError(Exception):
    """Exit 2: the input makes sense but the request cannot be honoured."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --- argument helpers ----------------------------------------------------------

def _rat_vector(text: str, what: str) -> tuple:
    try:
        return tuple(to_rational(x) for x in text.split(","))
    except LinAlgError:
        raise UsageError(f"malformed {what} {text!r}") from None


def _int_vector(text: str, what: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"malformed {what} {text!r}: expected comma-separated integers") from None


def _params(items) -> dict:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"malformed parameter {item!r}: expected NAME=P/Q")
        try:
            out[name.strip()] = to_rational(value)
        except LinAlgError:
            raise UsageError(f"malformed parameter {item!r}") from None
    return out


def _read(path: str) -> str:
    p = Path(path)
    if not p.exists() and path in BUNDLED:
        from . import example_path
        return example_path(path).read_text()
    try:
        return p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _polytope(args, path=None) -> Polytope:
    text = _read(path or args.file)
    return polytope.parse(text, params=_params(getattr(args, "param", None)))


def _point(args, P: Polytope) -> tuple:
    u = _rat_vector(args.u, "point")
    if len(u) != P.dim:
        raise UsageError(f"point has {len(u)} coordinates, polytope has dimension {P.dim}")
    return u


def _direction(text, P: Polytope) -> tuple:
    m = _int_vector(text, "direction")
    if len(m) != P.dim:
        raise UsageError(f"direction has {len(m)} entries, polytope has dimension {P.dim}")
    return m


def _tol(args) -> Fraction:
    try:
        t = to_rational(args.tol)
    except LinAlgError:
        raise UsageError(f"malformed tolerance {args.tol!r}") from None
    if t <= 0:
        raise UsageError("tolerance must be positive")
    return t


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _write_json(args, doc):
    if args.json:
        Path(args.json).write_text(_dump(doc))


def _write_svg(args, P: Polytope, **kw):
    if not args.svg:
        return
    if P.dim != 2:
        raise DomainError("SVG output needs a 2-dimensional polytope")
    from .plotting import render
    Path(args.svg).write_text(render(P, **kw))


def _print_complex(C: tropical.PLComplex, out):
    print(f"{len(C.cells)} cell(s)", file=out)
    for c in C.cells:
        print(f"  dim {c.dim}  witness {fmt_vec(c.witness)}", file=out)
        for kind, rel in (("eq", "="), ("ge", ">="), ("gt", ">")):
            for a, b in getattr(c.system, kind):
                print(f"    {_linear(a)} {rel} {fmt(b)}", file=out)


def _linear(a) -> str:
    parts = []
    for i, x in enumerate(a, 1):
        if x == 0:
            continue
        coef = "" if abs(x) == 1 else fmt(abs(x)) + "*"
        sign = "-" if x < 0 else "+"
        parts.append((sign, f"{coef}u{i}"))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        text += f" {sign} {term}"
    return text


def _primary_layers(P: Polytope):
    return [(f"m={fmt_vec(m)}", tropical.trop_relative(P, m)) for m in balancing.primary_normals(P)]


# --- commands ------------------------------------------------------------------

def cmd_validate(args, out):
    P = polytope.parse(_read(args.file), params=_params(args.param), check=False)
    report = polytope.validate(P)
    for line in report.lines():
        print(line, file=out)
    _write_json(args, {"ok": report.ok,
                       "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                                  for c in report.checks]})
    if not report.ok:
        raise DomainError(report.first_failure())
    print(f"valid: {P.dim}-dimensional polytope with {P.m} facets", file=out)


def cmd_primary_normals(args, out):
    P = _polytope(args)
    ns = balancing.primary_normals(P)
    for m in ns:
        print(fmt_vec(m), file=out)
    print(f"{len(ns)} primary normal(s); bound C(m, n-1) = {balancing.primary_bound(P)}", file=out)
    _write_json(args, {"dim": P.dim, "primary_normals": [list(m) for m in ns]})


def cmd_trop(args, out):
    P = _polytope(args)
    m = _direction(args.m, P)
    C = tropical.trop_relative(P, m)
    _print_complex(C, out)
    _write_json(args, C.to_json())
    _write_svg(args, P, layers=[(f"m={fmt_vec(m)}", C)], title=f"Trop(P, {fmt_vec(m)})")


def cmd_detect(args, out):
    P = _polytope(args)
    C = balancing.detect(P)
    pts = tropical.isolated_points(C)
    _print_complex(C, out)
    print("isolated points: " + (", ".join(fmt_vec(p) for p in pts) or "none"), file=out)
    _write_json(args, {**C.to_json(), "points": [[fmt(x) for x in p] for p in pts]})
    _write_svg(args, P, layers=_primary_layers(P), locus=C, points=pts, title="detected locus")


def cmd_member(args, out):
    P = _polytope(args)
    u = _point(args, P)
    if not P.is_interior(u):
        raise DomainError(f"not interior: {fmt_vec(u)}")
    if args.m:
        m = _direction(args.m, P)
        v = tropical.member(P, m, u)
        print(f"m={fmt_vec(m)}: {str(v).lower()}", file=out)
        _write_json(args, {"point": [fmt(x) for x in u], "m": list(m), "member": v})
        return
    verdicts = [(m, tropical.member(P, m, u)) for m in balancing.primary_normals(P)]
    for m, v in verdicts:
        print(f"m={fmt_vec(m)}: {str(v).lower()}", file=out)
    overall = all(v for _, v in verdicts)
    failing = [m for m, v in verdicts if not v]
    print(f"strongly bulk-balanced: {str(overall).lower()}", file=out)
    if failing:
        print("failing directions: " + ", ".join(fmt_vec(m) for m in failing), file=out)
    _write_json(args, {"point": [fmt(x) for x in u],
                       "directions": [{"m": list(m), "member": v} for m, v in verdicts],
                       "strongly_bulk_balanced": overall,
                       "failing": [list(m) for m in failing]})


def cmd_leading_term(args, out):
    P = _polytope(args)
    u = _point(args, P)
    try:
        F = polytope.energy_filtration(P, u)
    except NotInteriorError as exc:
        raise DomainError(str(exc)) from None
    B = balancing.adapted_basis(P, u)
    L = balancing.leading_term_system(P, u, B, generalized=args.generalized)
    ok = balancing.solvable_over_torus(P, u)
    print(f"point {fmt_vec(u)}", file=out)
    print("energy levels", file=out)
    for l, (s, g) in enumerate(zip(F.levels, F.groups), 1):
        print(f"  S_{l} = {fmt(s)}  facets {list(g)}  d_{l} = {F.d[l - 1]}", file=out)
    print(f"  kappa = {F.kappa}", file=out)
    print(f"adapted basis (D = {B.scale})", file=out)
    for (l, s), j, e in zip(B.slots, B.flag, B.vectors):
        print(f"  e*_{{{l},{s}}} = {fmt_vec(e)}  from facet {j}", file=out)
    print("leading term equation" + (" (generalized)" if args.generalized else ""), file=out)
    for line in L.lines():
        print("  " + line, file=out)
    print(f"verdict: {'solvable' if ok else 'unsolvable'}", file=out)
    _write_json(args, {
        "point": [fmt(x) for x in u],
        "levels": [fmt(s) for s in F.levels],
        "groups": [list(g) for g in F.groups],
        "d": list(F.d), "kappa": F.kappa,
        "basis": {"scale": B.scale, "flag": list(B.flag),
                  "vectors": [[fmt(x) for x in e] for e in B.vectors]},
        "equations": L.lines(),
        "solvable": ok,
    })


def cmd_trop_poly(args, out):
    try:
        doc = json.loads(_read(args.file))
        f = tropical.TropicalPolynomial.from_json(doc)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed tropical polynomial: {exc}") from None
    C = tropical.trop_poly(f)
    _print_complex(C, out)
    _write_json(args, C.to_json())


def cmd_balanced(args, out):
    P = _polytope(args)
    pts = balancing.balanced_candidates(P)
    cs = [tropical.log_derivative_trop(P, i) for i in range(1, P.dim + 1)]
    C = tropical.intersect(cs, P.interior(), provenance="balanced")
    print("balanced candidates: " + (", ".join(fmt_vec(p) for p in pts) or "none"), file=out)
    _write_json(args, {**C.to_json(), "points": [[fmt(x) for x in p] for p in pts]})
    _write_svg(args, P, layers=[(f"i={i}", c) for i, c in enumerate(cs, 1)], locus=C, points=pts,
               title="balanced candidates")


def _set_from_file(path, args):
    text = _read(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON: {exc}") from None
    if isinstance(doc, dict) and "cells" in doc:
        try:
            return tropical.PLComplex.from_json(doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{path}: malformed complex: {exc}") from None
    return polytope.from_dict(doc, params=_params(args.param))


def cmd_hausdorff(args, out):
    A = _set_from_file(args.file_a, args)
    B = _set_from_file(args.file_b, args)
    box = None
    if args.box:
        b = _rat_vector(args.box, "box")
        if len(b) != 4:
            raise UsageError("box needs four numbers x0,y0,x1,y1")
        box = ((b[0], b[1]), (b[2], b[3]))
    I = metrics.hausdorff(A, B, _tol(args), box)
    print(f"hausdorff in [{fmt(I.lower)}, {fmt(I.upper)}]  ~ {float(I.lower):.9f}", file=out)
    _write_json(args, I.to_json())


def cmd_converge(args, out):
    P = _polytope(args)
    m = _direction(args.m, P)
    if args.steps < 1:
        raise UsageError("--steps must be positive")
    fam = metrics.PerturbationFamily.dyadic(P, args.facet, args.steps, strict=args.strict)
    rows = metrics.convergence_experiment(fam, m, _tol(args))
    print(metrics.format_table(rows), file=out)
    _write_json(args, [r.to_json() for r in rows])


def cmd_render(args, out):
    P = _polytope(args)
    if not args.svg:
        raise UsageError("render needs --svg PATH")
    layers = [(f"m={fmt_vec(m)}", tropical.trop_relative(P, m))
              for m in (_direction(t, P) for t in args.m)] if args.m else _primary_layers(P)
    locus = balancing.detect(P) if args.detect else None
    pts = tropical.isolated_points(locus) if locus is not None else []
    _write_svg(args, P, layers=layers, locus=locus, points=pts, title=P.name)
    print(f"wrote {args.svg}", file=out)


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS, help="write JSON result to PATH")
    common.add_argument("--svg", metavar="PATH", default=argparse.SUPPRESS, help="write an SVG figure to PATH")
    common.add_argument("--tol", metavar="P/Q", default=argparse.SUPPRESS, help="distance tolerance")

    parser = _Parser(prog="tropfiber", parents=[common],
                     description="Exact detection of strongly bulk-balanced toric fibers.")
    parser.set_defaults(json=None, svg=None, tol="1/1000000")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, file=True):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if file:
            p.add_argument("file", help="polytope JSON file or bundled name (" + ", ".join(BUNDLED) + ")")
            p.add_argument("--param", action="append", metavar="NAME=P/Q",
                           help="value for a templated offset, e.g. c=3/4")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check polytope invariants")
    add("primary-normals", cmd_primary_normals, "list primary normals")
    p = add("trop", cmd_trop, "tropicalization relative to a direction")
    p.add_argument("--m", required=True, help="direction, e.g. 0,1")
    add("detect", cmd_detect, "strongly bulk-balanced locus")
    p = add("member", cmd_member, "pointwise membership verdicts")
    p.add_argument("--u", required=True, help="interior point, e.g. 5/16,1/4")
    p.add_argument("--m", help="single direction")
    p = add("leading-term", cmd_leading_term, "leading term equation at a point")
    p.add_argument("--u", required=True, help="interior point")
    p.add_argument("--generalized", action="store_true", help="attach symbolic units to every term")
    p = sub.add_parser("trop-poly", parents=[common], help="tropical hypersurface of a polynomial")
    p.add_argument("file", help="tropical polynomial JSON")
    p.set_defaults(func=cmd_trop_poly)
    add("balanced", cmd_balanced, "isolated points of the log-derivative intersection")
    p = sub.add_parser("hausdorff", parents=[common], help="Hausdorff distance interval")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--box", help="clip box x0,y0,x1,y1 for unbounded complexes")
    p.add_argument("--param", action="append", metavar="NAME=P/Q")
    p.set_defaults(func=cmd_hausdorff)
    p = add("converge", cmd_converge, "distance of tropicalizations under facet translation")
    p.add_argument("--facet", type=int, required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--strict", action="store_true", help="require every translate to be a valid polytope")
    p = add("render", cmd_render, "draw a planar polytope with tropicalizations")
    p.add_argument("--m", action="append", help="direction to draw (repeatable; default: primary normals)")
    p.add_argument("--detect", action="store_true", help="emphasize the detected locus")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args, out)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, InvariantError, NotInteriorError, metrics.MetricError,
            balancing.PreconditionError, tropical.EmptySupportError,
            tropical.NotInIntersectionError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
