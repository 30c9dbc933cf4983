"""Tropical hypersurfaces and relative tropicalizations as polyhedral complexes.

A tropical polynomial is a list of ``(valuation, exponent)`` terms and is
read as the min-plus function ``u -> min(val + <u, exp>)``.  Its
tropicalization is where that minimum is attained at least twice.  Cells
are exact :class:`HSystem` objects, so every geometric question reduces to
rational LPs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

from . import hspace, ratlin
from .hspace import HSystem
from .polytope import Polytope
from .ratlin import fmt, to_rational


class EmptySupportError(ValueError):
    pass


@dataclass(frozen=True)
class TropicalPolynomial:
    dim: int
    terms: tuple

    def __post_init__(self):
        merged: dict = {}
        for val, exp in self.terms:
            exp = tuple(int(x) for x in exp)
            if len(exp) != self.dim:
                raise ValueError(f"exponent {exp} does not have dimension {self.dim}")
            val = to_rational(val)
            # keep the smaller valuation when exponents repeat
            if exp not in merged or val < merged[exp]:
                merged[exp] = val
        if not merged:
            raise ValueError("a tropical polynomial needs at least one term")
        object.__setattr__(self, "terms", tuple((v, e) for e, v in merged.items()))

    def values(self, u: Sequence) -> list[Fraction]:
        return [val + ratlin.dot(exp, u) for val, exp in self.terms]

    def evaluate(self, u: Sequence) -> Fraction:
        return min(self.values(u))

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "terms": [{"valuation": fmt(v), "exponent": list(e)} for v, e in self.terms]}

    @classmethod
    def from_json(cls, doc: dict) -> "TropicalPolynomial":
        return cls(int(doc["dim"]), tuple((to_rational(t["valuation"]), tuple(t["exponent"]))
                                          for t in doc["terms"]))


@dataclass(frozen=True)
class Cell:
    system: HSystem
    dim: int
    witness: tuple
    tags: tuple = field(default=(), compare=False)

    def contains_point(self, u: Sequence) -> bool:
        return self.system.contains_point(u)

    def sort_key(self):
        return (self.dim, self.system.key())

    def to_json(self) -> dict:
        return {"system": self.system.to_json(), "dim": self.dim,
                "witness": [fmt(x) for x in self.witness]}

    @classmethod
    def from_json(cls, doc: dict) -> "Cell":
        return cls(HSystem.from_json(doc["system"]), int(doc["dim"]),
                   tuple(to_rational(x) for x in doc["witness"]))


@dataclass(frozen=True)
class PLComplex:
    dim: int
    cells: tuple
    provenance: str = ""

    def __len__(self):
        return len(self.cells)

    def contains_point(self, u: Sequence) -> bool:
        return any(c.contains_point(u) for c in self.cells)

    def cells_containing(self, u: Sequence) -> list[Cell]:
        return [c for c in self.cells if c.contains_point(u)]

    def to_json(self) -> dict:
        return {"dim": self.dim, "provenance": self.provenance,
                "cells": [c.to_json() for c in self.cells]}

    @classmethod
    def from_json(cls, doc: dict) -> "PLComplex":
        return cls(int(doc["dim"]), tuple(Cell.from_json(c) for c in doc["cells"]),
                   doc.get("provenance", ""))


# --- canonicalization ----------------------------------------------------------

def make_cell(S: HSystem, tags=()) -> Cell | None:
    """Canonical cell for S, or None when S is empty."""
    got = hspace.canonical(S)
    if got is None:
        return None
    C, dim, witness = got
    return Cell(C, dim, witness, tags)


def canonicalize(dim: int, cells, provenance: str = "") -> PLComplex:
    """Drop cells lying inside another cell and sort the rest.

    Set-equal cells are merged; a cell strictly contained in another adds
    nothing to the union and is dropped as well.
    """
    cells = sorted(cells, key=Cell.sort_key)
    kept: list[Cell] = []
    # larger cells first so that containment only needs checking one way
    for c in sorted(cells, key=lambda c: (-c.dim, c.sort_key())):
        # the witness test is a cheap necessary condition before the LPs
        if any(c.dim <= k.dim and k.system.contains_point(c.witness)
               and hspace.contains(c.system, k.system) for k in kept):
            continue
        kept.append(c)
    return PLComplex(dim, tuple(sorted(kept, key=Cell.sort_key)), provenance)


def same_complex(A: PLComplex, B: PLComplex) -> bool:
    """Cell-for-cell set equality of two canonical complexes."""
    if A.dim != B.dim or len(A) != len(B):
        return False

    def covered(X, Y):
        return all(any(c.system == d.system for d in Y.cells)
                   or any(c.dim == d.dim and hspace.same_set(c.system, d.system) for d in Y.cells)
                   for c in X.cells)

    return covered(A, B) and covered(B, A)


# --- constructions -------------------------------------------------------------

def _pair_system(f: TropicalPolynomial, s: int, t: int) -> HSystem:
    vs, es = f.terms[s]
    vt, et = f.terms[t]
    eq = ((tuple(a - b for a, b in zip(es, et)), vt - vs),)
    ge = []
    for r, (vr, er) in enumerate(f.terms):
        if r in (s, t):
            continue
        # vr + <u, er> >= vs + <u, es>
        ge.append((tuple(a - b for a, b in zip(er, es)), vs - vr))
    return HSystem(f.dim, eq=eq, ge=tuple(ge))


def trop_poly(f: TropicalPolynomial, ambient: HSystem | None = None,
              provenance: str = "") -> PLComplex:
    """Corner locus of f, one cell per term pair before canonicalization."""
    cells = []
    for s, t in combinations(range(len(f.terms)), 2):
        S = _pair_system(f, s, t)
        if ambient is not None:
            S = S & ambient
        c = make_cell(S, tags=(s, t))
        if c is not None:
            cells.append(c)
    return canonicalize(f.dim, cells, provenance or "trop_poly")


def support(P: Polytope, m: Sequence[int]) -> list[int]:
    """1-based indices of facets whose normal pairs nontrivially with m."""
    return list(_support(P, tuple(m)))


@lru_cache(maxsize=4096)
def _support(P: Polytope, m: tuple) -> tuple:
    return tuple(j for j, f in enumerate(P.facets, 1) if ratlin.dot(m, f.normal) != 0)


def relative_polynomial(P: Polytope, m: Sequence[int]) -> TropicalPolynomial:
    js = support(P, m)
    if not js:
        raise EmptySupportError("empty support")
    return TropicalPolynomial(P.dim, tuple((-P.facet(j).offset, P.facet(j).normal) for j in js))


def _check_direction(P: Polytope, m):
    if len(m) != P.dim:
        raise ValueError(f"direction of dimension {len(m)} for a dim-{P.dim} polytope")
    return tuple(int(x) for x in m)


def trop_relative(P: Polytope, m: Sequence[int], ambient: HSystem | None = None) -> PLComplex:
    m = _check_direction(P, m)
    prov = f"trop_relative m={ratlin.fmt_vec(m)}"
    if ratlin.is_zero(m):
        S = ambient if ambient is not None else HSystem(P.dim)
        c = make_cell(S, tags=("all",))
        return PLComplex(P.dim, (c,) if c else (), prov)
    return trop_poly(relative_polynomial(P, m), ambient, prov)


def unit_vector(n: int, i: int) -> tuple:
    if not 1 <= i <= n:
        raise IndexError(f"coordinate index {i} out of range 1..{n}")
    return tuple(int(k == i - 1) for k in range(n))


def log_derivative_trop(P: Polytope, i: int, ambient: HSystem | None = None) -> PLComplex:
    """Tropicalization of x_i dPO/dx_i, i.e. the relative tropicalization along e_i."""
    C = trop_relative(P, unit_vector(P.dim, i), ambient)
    return PLComplex(C.dim, C.cells, f"log_derivative i={i}")


def log_derivative_polynomial(P: Polytope, i: int) -> TropicalPolynomial:
    """x-form terms of x_i dPO/dx_i: differentiation keeps terms with a nonzero i-th exponent."""
    unit_vector(P.dim, i)
    terms = [(-f.offset, f.normal) for f in P.facets if f.normal[i - 1] != 0]
    if not terms:
        raise EmptySupportError("empty support")
    return TropicalPolynomial(P.dim, tuple(terms))


def intersect(cs: Sequence[PLComplex], ambient: HSystem | None = None,
              provenance: str = "") -> PLComplex:
    if not cs:
        raise ValueError("nothing to intersect")
    dim = cs[0].dim
    if any(c.dim != dim for c in cs):
        raise ValueError("dimension mismatch")
    if ambient is not None and ambient.dim != dim:
        raise ValueError("dimension mismatch")
    start = ambient if ambient is not None else HSystem(dim)
    current = [Cell(start, dim, (), ())]
    for C in cs:
        nxt = []
        for a, b in product(current, C.cells):
            c = make_cell(a.system & b.system, tags=a.tags + (b.tags,))
            if c is not None:
                nxt.append(c)
        current = list(canonicalize(dim, nxt).cells)
        if not current:
            break
    return canonicalize(dim, current, provenance or "intersect")


def member(gen, selector, u: Sequence) -> bool:
    """Pointwise test: is the minimum over the support attained at least twice at u?

    ``gen`` is a Polytope (``selector`` is the direction m) or a
    TropicalPolynomial (``selector`` is None or a list of term indices).
    """
    u = tuple(to_rational(x) for x in u)
    if isinstance(gen, Polytope):
        m = _check_direction(gen, selector)
        if len(u) != gen.dim:
            raise ValueError("point dimension mismatch")
        if ratlin.is_zero(m):
            return True
        js = support(gen, m)
        if not js:
            raise EmptySupportError("empty support")
        allv = gen.values(u)
        vals = [allv[j - 1] for j in js]
    else:
        if len(u) != gen.dim:
            raise ValueError("point dimension mismatch")
        vals = gen.values(u)
        if selector is not None:
            vals = [vals[k] for k in selector]
            if not vals:
                raise EmptySupportError("empty support")
    lo = min(vals)
    return vals.count(lo) >= 2


def isolated_points(C: PLComplex) -> list[tuple]:
    pts = []
    for c in C.cells:
        if c.dim != 0:
            continue
        if any(d.dim > 0 and d.contains_point(c.witness) for d in C.cells):
            continue
        pts.append(c.witness)
    return sorted(set(pts))


class NotInIntersectionError(ValueError):
    pass


def properly_at(u: Sequence, A: PLComplex, B: PLComplex, codim_a: int, codim_b: int) -> bool:
    u = tuple(to_rational(x) for x in u)
    C = intersect([A, B])
    here = C.cells_containing(u)
    if not here:
        raise NotInIntersectionError(f"{ratlin.fmt_vec(u)} is not in both complexes")
    expected = C.dim - codim_a - codim_b
    return all(c.dim <= expected for c in here) and any(c.dim == expected for c in here)


def interior_system(P: Polytope) -> HSystem:
    return P.interior()
