"""Hausdorff distance brackets between planar polyhedral sets, and convergence runs.

Sets are split into convex pieces (points, segments, polygons).  Squared
distances are compared exactly; only the final square roots are rounded,
outward, to a dyadic grid finer than the requested tolerance.

The directed distance ``sup_{a in A} d(a, B)`` is bracketed by branch and
bound over a simplicial subdivision of A.  On a simplex every ``d(., B_k)``
is convex, so its maximum sits at a vertex; the minimum over k of those
vertex maxima bounds the sup of ``d(., B)`` from above.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from . import hspace
from .hspace import HSystem
from .polytope import Polytope, translate_facet, validate
from .ratlin import fmt, to_rational
from .tropical import PLComplex, trop_relative


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class DistanceInterval:
    lower: Fraction
    upper: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, x) -> bool:
        return self.lower <= to_rational(x) <= self.upper

    def to_json(self) -> dict:
        return {"lower": fmt(self.lower), "upper": fmt(self.upper)}


# --- convex pieces -------------------------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple]:
    """Counter-clockwise hull without collinear points (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def box_system(lo: Sequence, hi: Sequence) -> HSystem:
    ge = []
    for i in range(2):
        e = [0, 0]
        e[i] = 1
        ge.append((tuple(e), to_rational(lo[i])))
        ge.append((tuple(-x for x in e), -to_rational(hi[i])))
    return HSystem(2, ge=tuple(ge))


def pieces(X, box=None) -> list[list[tuple]]:
    """Convex pieces of a Polytope or PLComplex as hull vertex lists."""
    if isinstance(X, Polytope):
        systems = [X.system()]
        dim = X.dim
    elif isinstance(X, PLComplex):
        systems = [c.system.closure() for c in X.cells]
        dim = X.dim
    else:
        raise TypeError("expected a Polytope or PLComplex")
    if dim != 2:
        raise MetricError("hausdorff distance is implemented for dimension 2 only")
    out = []
    for S in systems:
        if box is not None:
            S = S & box_system(*box)
        if not hspace.is_bounded(S):
            raise MetricError("unbounded set: supply a bounding box")
        vs = hspace.vertices(S)
        if vs:
            out.append(convex_hull(vs))
    if not out:
        raise MetricError("empty set")
    return out


def _sq(p, q) -> Fraction:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def _seg_sq(p, a, b) -> Fraction:
    dx, dy = b[0] - a[0], b[1] - a[1]
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)
    if t <= 0:
        return _sq(p, a)
    if t >= 1:
        return _sq(p, b)
    return _sq(p, (a[0] + t * dx, a[1] + t * dy))


def piece_sq_distance(p, piece) -> Fraction:
    """Exact squared distance from p to a convex piece."""
    if len(piece) == 1:
        return _sq(p, piece[0])
    if len(piece) == 2:
        return _seg_sq(p, piece[0], piece[1])
    k = len(piece)
    if all(_cross(piece[i], piece[(i + 1) % k], p) >= 0 for i in range(k)):
        return Fraction(0)
    return min(_seg_sq(p, piece[i], piece[(i + 1) % k]) for i in range(k))


def _simplices(piece) -> list[tuple]:
    if len(piece) <= 2:
        return [tuple(piece)]
    return [(piece[0], piece[i], piece[i + 1]) for i in range(1, len(piece) - 1)]


def _split(simplex) -> list[tuple]:
    if len(simplex) == 2:
        a, b = simplex
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        return [(a, mid), (mid, b)]
    # bisect the longest edge of a triangle
    a, b, c = simplex
    edges = sorted([(_sq(a, b), 0), (_sq(b, c), 1), (_sq(c, a), 2)], reverse=True)
    k = edges[0][1]
    p, q, r = [(a, b, c), (b, c, a), (c, a, b)][k]
    mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
    return [(p, mid, r), (mid, q, r)]


# --- dyadic square roots ---------------------------------------------------------

def _bits_for(tol: Fraction) -> int:
    k = 0
    while Fraction(1, 2 ** k) > tol / 8:
        k += 1
    return k


def sqrt_lo(x: Fraction, k: int) -> Fraction:
    s = 4 ** k
    return Fraction(isqrt((x.numerator * s) // x.denominator), 2 ** k)


def sqrt_hi(x: Fraction, k: int) -> Fraction:
    s = 4 ** k
    n = -((-x.numerator * s) // x.denominator)  # ceiling
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 2 ** k)


def directed(A: list, B: list, tol: Fraction) -> DistanceInterval:
    """Bracket sup over A of the distance to B."""
    k = _bits_for(tol)
    cache: dict = {}

    def f(p):
        v = cache.get(p)
        if v is None:
            v = min(piece_sq_distance(p, b) for b in B)
            cache[p] = v
        return v

    def upper(simplex):
        return min(max(piece_sq_distance(v, b) for v in simplex) for b in B)

    best = Fraction(0)  # squared lower bound, attained at an evaluated point
    heap = []
    counter = 0
    for piece in A:
        for s in _simplices(piece):
            best = max(best, max(f(v) for v in s))
            heapq.heappush(heap, (-upper(s), counter, s))
            counter += 1
    while heap:
        neg_u, _, s = heap[0]
        U = -neg_u
        if U <= best or sqrt_hi(U, k) - sqrt_lo(best, k) <= tol:
            break
        heapq.heappop(heap)
        if len(s) == 1:
            continue
        for child in _split(s):
            best = max(best, max(f(v) for v in child))
            cu = upper(child)
            if cu > best:
                heapq.heappush(heap, (-cu, counter, child))
                counter += 1
    U = max(best, -heap[0][0]) if heap else best
    return DistanceInterval(sqrt_lo(best, k), max(sqrt_hi(U, k), sqrt_lo(best, k)))


def hausdorff(A, B, tol=Fraction(1, 10 ** 6), box=None) -> DistanceInterval:
    """Interval of width at most ``tol`` around the Hausdorff distance of A and B.

    ``box`` is ``(lo, hi)`` and clips both sets; it is required when a
    complex has unbounded cells.
    """
    tol = to_rational(tol)
    if tol <= 0:
        raise MetricError("tolerance must be positive")
    pa, pb = pieces(A, box), pieces(B, box)
    ab = directed(pa, pb, tol)
    ba = directed(pb, pa, tol)
    return DistanceInterval(max(ab.lower, ba.lower), max(ab.upper, ba.upper))


# --- convergence experiments -----------------------------------------------------

@dataclass(frozen=True)
class PerturbationFamily:
    """Single-facet translates of a base polytope.

    With ``strict`` every translate must be a valid polytope.  Otherwise a
    translate may carry a redundant facet; it is then only used as a system
    of affine functions (its tropicalization is still well defined).
    """
    base: Polytope
    facet: int
    deltas: tuple
    strict: bool = True

    def __post_init__(self):
        ds = tuple(to_rational(d) for d in self.deltas)
        if any(d < 0 for d in ds):
            raise MetricError("deltas must be nonnegative")
        if any(a <= b for a, b in zip(ds, ds[1:])):
            raise MetricError("deltas must be strictly decreasing")
        object.__setattr__(self, "deltas", ds)
        self.base.facet(self.facet)
        if self.strict:
            for d in ds:
                translate_facet(self.base, self.facet, d)

    def members(self) -> list[Polytope]:
        return [translate_facet(self.base, self.facet, d, check=self.strict) for d in self.deltas]

    def valid(self) -> list[bool]:
        """Which translates are valid polytopes."""
        return [validate(Q).ok for Q in self.members()]

    @classmethod
    def dyadic(cls, base: Polytope, facet: int, steps: int, strict: bool = True) -> "PerturbationFamily":
        return cls(base, facet, tuple(Fraction(1, 2 ** k) for k in range(1, steps + 1)), strict)


@dataclass(frozen=True)
class ExperimentRow:
    delta: Fraction
    interval: DistanceInterval

    def to_json(self) -> dict:
        return {"delta": fmt(self.delta), **self.interval.to_json()}


def inflated_box(P: Polytope, pad=1):
    lo, hi = P.bounding_box()
    return tuple(x - pad for x in lo), tuple(x + pad for x in hi)


def convergence_experiment(fam: PerturbationFamily, m: Sequence[int],
                           tol=Fraction(1, 10 ** 6)) -> list[ExperimentRow]:
    box = inflated_box(fam.base)
    ref = trop_relative(fam.base, m)
    rows = []
    for d, Q in zip(fam.deltas, fam.members()):
        rows.append(ExperimentRow(d, hausdorff(trop_relative(Q, m), ref, tol, box)))
    return rows


def format_table(rows: Sequence[ExperimentRow]) -> str:
    head = ("delta", "lower", "upper")
    body = [(fmt(r.delta), fmt(r.interval.lower), fmt(r.interval.upper)) for r in rows]
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(row, widths)) for row in [head, *body]]
    return "\n".join(lines)
