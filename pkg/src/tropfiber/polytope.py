"""Moment polytopes in H-description.

A polytope is ``{u : l_j(u) >= 0}`` with ``l_j(u) = <u, v_j> - lambda_j``,
primitive integer normals ``v_j`` and rational offsets ``lambda_j``.
Facet and coordinate indices in this API are 1-based, matching the order
of facets in the JSON file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from pathlib import Path
from typing import Sequence

from . import hspace, ratlin
from .hspace import HSystem
from .ratlin import fmt, to_rational


class PolytopeError(ValueError):
    """Base class for polytope problems."""


class ParseError(PolytopeError):
    """The document is not a well-formed polytope description."""


class InvariantError(PolytopeError):
    """The description is well formed but violates a polytope invariant."""


@dataclass(frozen=True)
class Facet:
    normal: tuple
    offset: Fraction

    def value(self, u: Sequence) -> Fraction:
        return ratlin.dot(self.normal, u) - self.offset


@dataclass(frozen=True)
class Polytope:
    dim: int
    facets: tuple
    name: str = field(default="", compare=False)

    @property
    def m(self) -> int:
        return len(self.facets)

    @property
    def normals(self) -> list[tuple]:
        return [f.normal for f in self.facets]

    def facet(self, j: int) -> Facet:
        if not 1 <= j <= self.m:
            raise IndexError(f"facet index {j} out of range 1..{self.m}")
        return self.facets[j - 1]

    def values(self, u: Sequence) -> list[Fraction]:
        self._check_point(u)
        return list(_facet_values(self, tuple(Fraction(x) for x in u)))

    def _check_point(self, u):
        if len(u) != self.dim:
            raise ValueError(f"point of dimension {len(u)} for a dim-{self.dim} polytope")

    def is_interior(self, u: Sequence) -> bool:
        return all(v > 0 for v in self.values(u))

    def system(self) -> HSystem:
        """The closed polytope as an HSystem."""
        return HSystem(self.dim, ge=tuple((f.normal, f.offset) for f in self.facets))

    def interior(self) -> HSystem:
        """Int(P) as strict rows."""
        return HSystem(self.dim, gt=tuple((f.normal, f.offset) for f in self.facets))

    def bounding_box(self) -> tuple[tuple, tuple]:
        lo, hi = [], []
        S = self.system()
        for i in range(self.dim):
            e = [0] * self.dim
            e[i] = 1
            _, vmax, _ = hspace.optimize(S, e, maximize=True)
            _, vmin, _ = hspace.optimize(S, e, maximize=False)
            lo.append(vmin)
            hi.append(vmax)
        return tuple(lo), tuple(hi)

    def vertices(self) -> list[tuple]:
        return hspace.vertices(self.system())

    def to_json(self) -> dict:
        doc = {"dim": self.dim,
               "facets": [{"normal": list(f.normal), "offset": fmt(f.offset)} for f in self.facets]}
        if self.name:
            doc = {"name": self.name, **doc}
        return doc


def _facet_values(P: Polytope, u: tuple) -> tuple:
    # integer arithmetic over a common denominator, one Fraction per facet
    d = lcm(*(x.denominator for x in u))
    nums = [x.numerator * (d // x.denominator) for x in u]
    out = []
    for f in P.facets:
        s = sum(a * b for a, b in zip(f.normal, nums))
        out.append(Fraction(s * f.offset.denominator - f.offset.numerator * d, d * f.offset.denominator))
    return tuple(out)


# --- parsing -------------------------------------------------------------------

def _offset(raw, params: dict) -> Fraction:
    # offsets are rationals, or a (signed) parameter name such as "-c"
    if isinstance(raw, str):
        s = raw.strip()
        sign = -1 if s.startswith("-") else 1
        name = s.lstrip("+-").strip()
        if name in params:
            return sign * params[name]
    try:
        return to_rational(raw)
    except ratlin.LinAlgError as exc:
        raise ParseError(str(exc)) from None


def from_dict(doc: dict, params: dict | None = None, check: bool = True) -> Polytope:
    """Build a polytope from its JSON document, validating invariants when ``check``."""
    if not isinstance(doc, dict):
        raise ParseError("polytope document must be a JSON object")
    try:
        dim = doc["dim"]
        raw_facets = doc["facets"]
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from None
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"dim must be a positive integer, got {dim!r}")
    if not isinstance(raw_facets, list) or not raw_facets:
        raise ParseError("facets must be a nonempty list")
    values = {}
    for k, v in (doc.get("params") or {}).items():
        try:
            values[k] = to_rational(v)
        except ratlin.LinAlgError as exc:
            raise ParseError(f"parameter {k}: {exc}") from None
    for k, v in (params or {}).items():
        values[k] = to_rational(v)
    facets = []
    for k, raw in enumerate(raw_facets, start=1):
        if not isinstance(raw, dict) or "normal" not in raw or "offset" not in raw:
            raise ParseError(f"facet {k} needs 'normal' and 'offset'")
        normal = raw["normal"]
        if not isinstance(normal, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in normal):
            raise ParseError(f"facet {k}: normal must be a list of integers")
        if len(normal) != dim:
            raise ParseError(f"facet {k}: normal has dimension {len(normal)}, expected {dim}")
        try:
            offset = _offset(raw["offset"], values)
        except ParseError as exc:
            raise ParseError(f"facet {k}: {exc}") from None
        facets.append(Facet(tuple(normal), offset))
    P = Polytope(dim, tuple(facets), name=str(doc.get("name", "")))
    if check:
        report = validate(P)
        if not report.ok:
            raise InvariantError(report.first_failure())
    return P


def parse(text: str, params: dict | None = None, check: bool = True) -> Polytope:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_dict(doc, params=params, check=check)


def load(path, params: dict | None = None, check: bool = True) -> Polytope:
    return parse(Path(path).read_text(), params=params, check=check)


def from_facets(facets, dim: int | None = None, name: str = "", check: bool = True) -> Polytope:
    """Convenience constructor from ``[(normal, offset), ...]``."""
    fs = tuple(Facet(tuple(int(x) for x in n), to_rational(o)) for n, o in facets)
    P = Polytope(dim or len(fs[0].normal), fs, name=name)
    if check:
        report = validate(P)
        if not report.ok:
            raise InvariantError(report.first_failure())
    return P


# --- validation ----------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def get(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def first_failure(self) -> str:
        for c in self.checks:
            if not c.passed:
                return c.detail
        return ""

    def lines(self) -> list[str]:
        width = max(len(c.name) for c in self.checks)
        return [f"{c.name:<{width}}  {'pass' if c.passed else 'FAIL'}  {c.detail}".rstrip()
                for c in self.checks]


def validate(P: Polytope) -> ValidationReport:
    """Check primitivity, full dimension, boundedness and irredundancy."""
    checks = []

    bad = [j for j, f in enumerate(P.facets, 1)
           if ratlin.is_zero(f.normal) or ratlin.primitive(f.normal) != f.normal]
    if bad:
        checks.append(Check("primitive", False, "; ".join(f"non-primitive normal at facet {j}" for j in bad)))
    else:
        checks.append(Check("primitive", True))

    nonzero = all(not ratlin.is_zero(f.normal) for f in P.facets)
    full = nonzero and hspace.feasible(P.interior()) is not None
    checks.append(Check("full_dimensional", full, "" if full else "polytope has empty interior"))

    bounded = nonzero and hspace.is_bounded(P.system())
    checks.append(Check("bounded", bounded, "" if bounded else "polytope is unbounded"))

    if not full:
        checks.append(Check("irredundant", False, "not checked: polytope is not full-dimensional"))
    else:
        # in a full-dimensional polytope, facet j is a genuine facet iff some
        # point has l_j = 0 and every other (distinct) l_i > 0
        redundant = []
        for j, f in enumerate(P.facets, 1):
            if any(g == f for g in P.facets[: j - 1]):
                redundant.append(j)
                continue
            others = tuple((g.normal, g.offset) for g in P.facets if g != f)
            face = HSystem(P.dim, eq=((f.normal, f.offset),), gt=others)
            if hspace.feasible(face) is None:
                redundant.append(j)
        checks.append(Check("irredundant", not redundant,
                            "; ".join(f"redundant facet {j}" for j in redundant)))
    return ValidationReport(tuple(checks))


# --- queries -------------------------------------------------------------------

def facet_value(P: Polytope, j: int, u: Sequence) -> Fraction:
    P._check_point(u)
    return P.facet(j).value([to_rational(x) for x in u])


class NotInteriorError(PolytopeError):
    pass


def _require_interior(P: Polytope, u):
    if not P.is_interior(u):
        raise NotInteriorError(f"not interior: {ratlin.fmt_vec(u)}")


@dataclass(frozen=True)
class EnergyFiltration:
    point: tuple
    levels: tuple          # S_1 < S_2 < ...
    groups: tuple          # facet indices per level, ascending
    a: tuple               # group sizes
    d: tuple               # rank jumps
    kappa: int

    def level_of(self, j: int) -> int:
        return next(l for l, g in enumerate(self.groups, 1) if j in g)


def energy_filtration(P: Polytope, u: Sequence) -> EnergyFiltration:
    u = tuple(to_rational(x) for x in u)
    vals = P.values(u)
    if not all(v > 0 for v in vals):
        raise NotInteriorError(f"not interior: {ratlin.fmt_vec(u)}")
    levels = tuple(sorted(set(vals)))
    groups = tuple(tuple(j for j in range(1, P.m + 1) if vals[j - 1] == s) for s in levels)
    d, kappa = _rank_jumps(P, groups)
    return EnergyFiltration(u, levels, groups, tuple(len(g) for g in groups), d, kappa)


@lru_cache(maxsize=4096)
def _rank_jumps(P: Polytope, groups: tuple):
    d, seen, prev = [], [], 0
    kappa = None
    for l, g in enumerate(groups, 1):
        seen.extend(P.facet(j).normal for j in g)
        r = ratlin.rank(seen)
        d.append(r - prev)
        prev = r
        if kappa is None and r == P.dim:
            kappa = l
    if kappa is None:
        raise InvariantError("facet normals do not span the ambient space")
    return tuple(d), kappa


@dataclass(frozen=True)
class LeadingPotential:
    """The leading order potential as a y-form (valuations l_j(u)) and an x-form (valuations -lambda_j)."""
    point: tuple
    y_form: object
    x_form: object

    def monomials(self) -> list[str]:
        out = []
        for j, (val, exp) in enumerate(self.y_form.terms, 1):
            mono = "*".join(f"y{i}^{e}" for i, e in enumerate(exp, 1) if e) or "1"
            out.append(f"{mono} T^{fmt(val)}")
        return out


def leading_order_potential(P: Polytope, u: Sequence) -> LeadingPotential:
    from .tropical import TropicalPolynomial

    u = tuple(to_rational(x) for x in u)
    _require_interior(P, u)
    y = TropicalPolynomial(P.dim, tuple((f.value(u), f.normal) for f in P.facets))
    x = TropicalPolynomial(P.dim, tuple((-f.offset, f.normal) for f in P.facets))
    return LeadingPotential(u, y, x)


def translate_facet(P: Polytope, j: int, delta, check: bool = True) -> Polytope:
    """Shift facet j outward by ``delta`` (l_j -> l_j + delta), keeping every normal.

    With ``check=False`` the shifted inequality system is returned even when
    it is no longer an irredundant polytope; its tropicalizations are still
    defined since they only depend on the affine functions.
    """
    delta = to_rational(delta)
    f = P.facet(j)
    facets = list(P.facets)
    facets[j - 1] = Facet(f.normal, f.offset - delta)
    Q = Polytope(P.dim, tuple(facets), name=P.name)
    if not check:
        return Q
    report = validate(Q)
    if not report.ok:
        raise InvariantError(f"translating facet {j} by {fmt(delta)}: {report.first_failure()}")
    return Q
