"""Detection of strongly bulk-balanced fibers.

Two independent routes are provided.  The tropical route intersects the
relative tropicalizations over all primary normals.  The algebraic route
builds an adapted basis at a point, writes out the leading term equations
level by level and applies the combinatorial solvability criterion.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

from . import ratlin
from .polytope import (EnergyFiltration, NotInteriorError, Polytope,
                       _require_interior, energy_filtration)
from .ratlin import fmt, to_rational
from .tropical import (PLComplex, intersect, isolated_points,
                       log_derivative_trop, member, support, trop_relative)


def primary_normals(P: Polytope) -> list[tuple]:
    """Sign-canonical primitive normals of the hyperplanes spanned by facet normals."""
    return list(_primary_normals(P))


@lru_cache(maxsize=256)
def _primary_normals(P: Polytope) -> tuple:
    n = P.dim
    found = set()
    normals = P.normals
    if n == 1:
        return ()
    for combo in combinations(normals, n - 1):
        if ratlin.rank(combo) == n - 1:
            found.add(ratlin.kernel_primitive(combo, n))
    return tuple(sorted(found))


def primary_bound(P: Polytope) -> int:
    return comb(P.m, P.dim - 1)


def detect(P: Polytope) -> PLComplex:
    cs = [trop_relative(P, m) for m in primary_normals(P)]
    return intersect(cs, P.interior(), provenance="detect")


def is_strongly_bulk_balanced(P: Polytope, u: Sequence) -> bool:
    u = tuple(to_rational(x) for x in u)
    vals = P.values(u)
    if not all(v > 0 for v in vals):
        raise NotInteriorError(f"not interior: {ratlin.fmt_vec(u)}")
    for m in _primary_normals(P):
        sub = [vals[j - 1] for j in support(P, m)]
        if sub.count(min(sub)) < 2:
            return False
    return True


class PreconditionError(ValueError):
    pass


def find_separating_primary_normal(P: Polytope, u: Sequence, m: Sequence[int]) -> tuple:
    """A primary normal whose relative tropicalization misses u, given one direction that does.

    Keep the normals orthogonal to m, then add normals from the support of m
    that stay independent of the unique minimizer's normal until the span is a
    hyperplane.  Its normal sees the minimizer and nothing below it.
    """
    u = tuple(to_rational(x) for x in u)
    m = tuple(int(x) for x in m)
    _require_interior(P, u)
    if ratlin.is_zero(m) or member(P, m, u):
        raise PreconditionError("u is in Trop(P, m)")
    n = P.dim
    js = support(P, m)
    allv = P.values(u)
    vals = {j: allv[j - 1] for j in js}
    j1 = min(js, key=lambda j: (vals[j], j))
    v1 = P.facet(j1).normal

    basis: list[tuple] = []
    for f in P.facets:
        if ratlin.dot(m, f.normal) == 0 and ratlin.rank(basis + [f.normal]) > len(basis):
            basis.append(f.normal)
    for j in js:
        if len(basis) == n - 1:
            break
        if j == j1:
            continue
        v = P.facet(j).normal
        if ratlin.rank(basis + [v, v1]) == len(basis) + 2:
            basis.append(v)
    mt = ratlin.kernel_primitive(basis, n)
    if member(P, mt, u):  # cannot happen for a valid polytope
        raise AssertionError("separating construction failed")
    return mt


# --- adapted bases and leading term equations ----------------------------------

@dataclass(frozen=True)
class AdaptedBasis:
    """Basis e*_{l,s} adapted to the energy filtration at a point.

    ``slots`` lists (l, s) in basis order, ``flag`` the facet realizing each
    slot and ``coords[j-1]`` the integer coordinates of v_j.
    """
    filtration: EnergyFiltration
    slots: tuple
    flag: tuple
    vectors: tuple
    scale: int
    coords: tuple

    def slot_index(self, l: int, s: int) -> int:
        return self.slots.index((l, s))


def adapted_basis(P: Polytope, u: Sequence, reverse_ties: bool = False) -> AdaptedBasis:
    """Greedy flag through the filtration levels; ``reverse_ties`` scans each level from the highest facet index."""
    F = energy_filtration(P, u)
    slots, flag, vectors, D, coords = _flag_basis(P, F.groups, reverse_ties)
    return AdaptedBasis(F, slots, flag, vectors, D, coords)


@lru_cache(maxsize=4096)
def _flag_basis(P: Polytope, groups: tuple, reverse_ties: bool):
    slots, flag, chosen = [], [], []
    for l, group in enumerate(groups, 1):
        s = 0
        for j in (reversed(group) if reverse_ties else group):
            v = P.facet(j).normal
            if ratlin.rank(chosen + [v]) > len(chosen):
                chosen.append(v)
                s += 1
                slots.append((l, s))
                flag.append(j)
        if len(chosen) == P.dim:
            break
    # D is the index of the flag lattice, so every v_j gets integer coordinates
    D = abs(ratlin.det(chosen))
    assert D.denominator == 1 and D > 0
    D = int(D)
    vectors = tuple(tuple(ratlin.Fraction(x, D) for x in v) for v in chosen)
    coords = []
    for f in P.facets:
        c = ratlin.coords_in_basis(f.normal, vectors)
        assert all(x.denominator == 1 for x in c)
        coords.append(tuple(int(x) for x in c))
    return tuple(slots), tuple(flag), vectors, D, tuple(coords)


def _var(l: int, s: int) -> str:
    return f"y_{{{l},{s}}}"


@dataclass(frozen=True)
class Term:
    coeff: object          # int, a symbol name, or (multiplier, symbol)
    exponent: tuple        # over the basis slots

    def render(self, slots) -> str:
        parts = []
        for (l, s), e in zip(slots, self.exponent):
            if e == 1:
                parts.append(_var(l, s))
            elif e:
                parts.append(f"{_var(l, s)}^{e}")
        mono = "*".join(parts)
        c = self.coeff
        if isinstance(c, str):
            c = (1, c)
        if isinstance(c, tuple):
            mult, sym = c
            head = {1: "", -1: "-"}.get(mult, f"{mult}*") + sym
            return f"{head}*{mono}" if mono else head
        if c == 1:
            return mono or "1"
        if c == -1:
            return f"-{mono}" if mono else "-1"
        return f"{c}*{mono}" if mono else str(c)


def _render_poly(terms: Sequence[Term], slots) -> str:
    if not terms:
        return "0"
    out = ""
    for k, t in enumerate(sorted(terms, key=lambda t: t.exponent)):
        r = t.render(slots)
        if k == 0:
            out = r
        elif r.startswith("-"):
            out += " - " + r[1:]
        else:
            out += " + " + r
    return out


@dataclass(frozen=True)
class LaurentSystem:
    basis: AdaptedBasis
    generalized: bool
    levels: tuple       # per level l <= kappa: tuple of (facet index, Term)
    equations: tuple    # tuple of ((l, s), tuple of Term)

    def level_polynomial(self, l: int) -> str:
        return _render_poly([t for _, t in self.levels[l - 1]], self.basis.slots)

    def lines(self) -> list[str]:
        out = []
        for l in range(1, len(self.levels) + 1):
            out.append(f"(PO)_{l} = {self.level_polynomial(l)}")
        for (l, s), terms in self.equations:
            out.append(f"{_var(l, s)} d(PO)_{l}/d{_var(l, s)} = {_render_poly(terms, self.basis.slots)} = 0")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def leading_term_system(P: Polytope, u: Sequence, basis: AdaptedBasis | None = None,
                        generalized: bool = False) -> LaurentSystem:
    u = tuple(to_rational(x) for x in u)
    if basis is None:
        basis = adapted_basis(P, u)
    F = energy_filtration(P, u)
    if F != basis.filtration:
        raise ValueError("basis was built for a different point")
    levels, equations = [], []
    for l in range(1, F.kappa + 1):
        terms = []
        for a, j in enumerate(F.groups[l - 1], 1):
            coeff = f"c_{{{l},{a}}}" if generalized else 1
            terms.append((j, Term(coeff, basis.coords[j - 1])))
        levels.append(tuple(terms))
        for s in range(1, F.d[l - 1] + 1):
            k = basis.slot_index(l, s)
            deriv = []
            for _, t in terms:
                e = t.exponent[k]
                if e == 0:
                    continue
                if isinstance(t.coeff, str):
                    c = (e, t.coeff)
                else:
                    c = t.coeff * e
                deriv.append(Term(c, t.exponent))
            equations.append(((l, s), tuple(deriv)))
    return LaurentSystem(basis, generalized, tuple(levels), tuple(equations))


def solvable_over_torus(P: Polytope, u: Sequence, reverse_ties: bool = False) -> bool:
    """Combinatorial solvability of the generalized leading term equation.

    Each level splits into the flag terms, which are pure powers of one slot
    variable, and a correction made of the other terms.  The system has a
    solution for some choice of units iff every slot derivative of every
    correction is nonzero.
    """
    B = adapted_basis(P, u, reverse_ties=reverse_ties)
    F = B.filtration
    flag = set(B.flag)
    for l in range(1, F.kappa + 1):
        correction = [j for j in F.groups[l - 1] if j not in flag]
        for s in range(1, F.d[l - 1] + 1):
            k = B.slot_index(l, s)
            if not any(B.coords[j - 1][k] != 0 for j in correction):
                return False
    return True


def balanced_candidates(P: Polytope) -> list[tuple]:
    cs = [log_derivative_trop(P, i) for i in range(1, P.dim + 1)]
    return isolated_points(intersect(cs, P.interior(), provenance="balanced"))


def describe_point(p: Sequence) -> str:
    return "(" + ", ".join(fmt(x) for x in p) + ")"
