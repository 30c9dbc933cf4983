"""Exact systems of rational linear equalities and (strict) inequalities.

An :class:`HSystem` describes ``{u : <a,u> = b (eq), <a,u> >= b (ge), <a,u> > b (gt)}``.
Every predicate here is decided by an exact two-phase simplex with
Bland's rule and fraction-free integer pivoting, so results are
deterministic and never depend on a tolerance.
"""

from __future__ import annotations

import itertools
from math import lcm
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import ratlin
from .ratlin import Fraction as Q
from .ratlin import fmt, to_rational

Row = tuple  # (coeffs: tuple[Fraction, ...], rhs: Fraction)


class InfeasibleError(ValueError):
    pass


def _q(x) -> Fraction:
    return x if type(x) is Fraction else Q(x)


def _row(coeffs, b) -> Row:
    return tuple(_q(x) for x in coeffs), _q(b)


def _normalized(rows) -> bool:
    return type(rows) is tuple and all(
        type(r) is tuple and type(r[0]) is tuple and type(r[1]) is Fraction
        and all(type(x) is Fraction for x in r[0]) for r in rows)


@dataclass(frozen=True)
class HSystem:
    dim: int
    eq: tuple = ()
    ge: tuple = ()
    gt: tuple = ()

    def __post_init__(self):
        for kind in ("eq", "ge", "gt"):
            rows = getattr(self, kind)
            if not _normalized(rows):
                rows = tuple(_row(a, b) for a, b in rows)
            for a, _ in rows:
                if len(a) != self.dim:
                    raise ValueError(f"{kind} row of length {len(a)} in a dim-{self.dim} system")
                if kind != "eq" and ratlin.is_zero(a):
                    raise ValueError("inequality rows need a nonzero coefficient vector")
            object.__setattr__(self, kind, rows)

    @classmethod
    def make(cls, dim, eq=(), ge=(), gt=()):
        return cls(dim, tuple(eq), tuple(ge), tuple(gt))

    def __and__(self, other: "HSystem") -> "HSystem":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return HSystem(self.dim, self.eq + other.eq, self.ge + other.ge, self.gt + other.gt)

    def closure(self) -> "HSystem":
        return HSystem(self.dim, self.eq, self.ge + self.gt, ())

    def contains_point(self, u: Sequence) -> bool:
        return (all(ratlin.dot(a, u) == b for a, b in self.eq)
                and all(ratlin.dot(a, u) >= b for a, b in self.ge)
                and all(ratlin.dot(a, u) > b for a, b in self.gt))

    def key(self) -> tuple:
        return (self.eq, self.ge, self.gt)

    def to_json(self) -> dict:
        def enc(rows):
            return [[[_json_num(x) for x in a], fmt(b)] for a, b in rows]
        return {"dim": self.dim, "eq": enc(self.eq), "ge": enc(self.ge), "gt": enc(self.gt)}

    @classmethod
    def from_json(cls, doc: dict) -> "HSystem":
        def dec(rows):
            return tuple((tuple(to_rational(x) for x in a), to_rational(b)) for a, b in rows)
        return cls(int(doc["dim"]), dec(doc.get("eq", [])), dec(doc.get("ge", [])), dec(doc.get("gt", [])))


def _json_num(x):
    x = Q(x)
    return x.numerator if x.denominator == 1 else fmt(x)


# --- simplex -----------------------------------------------------------------

def _int_row(coeffs, rhs):
    # scale a rational row and its right-hand side to integers
    rhs = _q(rhs)
    d = rhs.denominator
    for x in coeffs:
        d = lcm(d, _q(x).denominator)
    return [int(x * d) for x in coeffs], int(rhs * d), d


def _simplex(a_rows, b, c):
    """maximize c.x  s.t.  A x = b, x >= 0, for integer A and b.

    Returns ("optimal", value, x) | ("unbounded", None, None) | ("infeasible", None, None).

    The tableau is kept fraction free: every entry is an integer and the
    true tableau is ``T / d`` for the running pivot ``d``.  Integer-preserving
    Gauss-Jordan steps keep the divisions exact.
    """
    nvar = len(c)
    m = len(a_rows)
    rows = []
    for r, bi in zip(a_rows, b):
        if bi < 0:
            r, bi = [-x for x in r], -bi
        rows.append((r, bi))
    c_scale = 1
    for x in c:
        c_scale = lcm(c_scale, Q(x).denominator)
    cs = [int(Q(x) * c_scale) for x in c]

    # columns: x (nvar), artificials (m), rhs
    width = nvar + m + 1
    tab = []
    for i, (r, bi) in enumerate(rows):
        row = r + [0] * m + [bi]
        row[nvar + i] = 1
        tab.append(row)
    z1 = [0] * width  # phase 1: maximize -sum(artificials)
    for row in tab:
        for j in range(nvar):
            z1[j] -= row[j]
        z1[-1] -= row[-1]
    z2 = [-x for x in cs] + [0] * (m + 1)
    basis = [nvar + i for i in range(m)]
    d = 1

    def pivot(r, col):
        nonlocal d
        p = tab[r][col]
        pr = tab[r]
        for tgt in (tab, (z1, z2)):
            for i, row in enumerate(tgt):
                if tgt is tab and i == r:
                    continue
                f = row[col]
                if f == 0:
                    row[:] = [(p * x) // d for x in row] if p != d else row
                else:
                    row[:] = [(p * x - f * y) // d for x, y in zip(row, pr)]
        d = p
        basis[r] = col

    def run(z, ncols):
        while True:
            enter = None
            in_basis = set(basis)
            for j in range(ncols):
                if z[j] < 0 and j not in in_basis:
                    enter = j
                    break
            if enter is None:
                return "optimal"
            best = None
            for i, row in enumerate(tab):
                a = row[enter]
                if a > 0:
                    if best is None:
                        best = i
                        continue
                    bb = tab[best]
                    lhs, rhs = row[-1] * bb[enter], bb[-1] * a
                    if lhs < rhs or (lhs == rhs and basis[i] < basis[best]):
                        best = i
            if best is None:
                return "unbounded"
            pivot(best, enter)

    run(z1, nvar + m)
    if z1[-1] != 0:
        return "infeasible", None, None
    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab):
        if basis[i] >= nvar:
            j = next((j for j in range(nvar) if tab[i][j] != 0), None)
            if j is None:
                del tab[i]
                del basis[i]
                continue
            if tab[i][j] < 0:
                tab[i] = [-x for x in tab[i]]
            pivot(i, j)
        i += 1
    if run(z2, nvar) == "unbounded":
        return "unbounded", None, None
    x = [Q(0)] * nvar
    for i, bv in enumerate(basis):
        x[bv] = Q(tab[i][-1], d)
    return "optimal", Q(z2[-1], d) / c_scale, x


def _lp(dim, eq, ge, objective, soft=()):
    """maximize objective.u (+ t if soft rows given) over free u.

    ``soft`` rows are imposed as <a,u> - b >= t with 0 <= t <= 1.
    Returns (status, value, u, t).
    """
    n = dim
    k = len(ge)
    s = len(soft)
    use_t = s > 0
    nvar = 2 * n + k + s + (2 if use_t else 0)
    t_col = 2 * n + k + s
    a_rows, bs = [], []

    def add(a, b, slack=None, with_t=False):
        # the whole equation is scaled, so slack and t pick up the same factor
        ia, ib, f = _int_row(a, b)
        r = ia + [-x for x in ia] + [0] * (nvar - 2 * n)
        if slack is not None:
            r[slack] = -f
        if with_t:
            r[t_col] = -f
        a_rows.append(r)
        bs.append(ib)

    for a, b in eq:
        add(a, b)
    for idx, (a, b) in enumerate(ge):
        add(a, b, slack=2 * n + idx)
    for idx, (a, b) in enumerate(soft):
        add(a, b, slack=2 * n + k + idx, with_t=True)
    if use_t:
        r = [0] * nvar
        r[t_col] = 1
        r[t_col + 1] = 1
        a_rows.append(r)
        bs.append(1)
    c = [Q(0)] * nvar
    if objective is not None:
        for i, x in enumerate(objective):
            c[i] = Q(x)
            c[n + i] = -Q(x)
    if use_t:
        c[t_col] = Q(1)
    status, value, x = _simplex(a_rows, bs, c)
    if status != "optimal":
        return status, None, None, None
    u = tuple(x[i] - x[n + i] for i in range(n))
    t = x[t_col] if use_t else None
    return status, value, u, t


# --- public predicates ---------------------------------------------------------

def feasible(S: HSystem):
    """A rational point satisfying every row (strict rows strictly), or None."""
    status, _, u, t = _lp(S.dim, S.eq, S.ge, None, soft=S.gt)
    if status == "infeasible":
        return None
    if S.gt and t <= 0:
        return None
    return u


def optimize(S: HSystem, objective: Sequence, maximize: bool = True):
    """Optimize a linear functional over the weak closure.

    Returns ``(status, value, point)``; status is "optimal", "unbounded" or "infeasible".
    """
    obj = [Q(x) if maximize else -Q(x) for x in objective]
    status, value, u, _ = _lp(S.dim, S.eq, S.ge + S.gt, obj)
    if status != "optimal":
        return status, None, None
    return status, (value if maximize else -value), u


def implicit_equalities(S: HSystem) -> list[int]:
    """Indices into ``S.ge`` of rows attained with equality at every point of the closure."""
    C = S.closure()
    if not S.ge and feasible(C) is None:
        raise InfeasibleError("empty system")
    out = []
    for i, (a, b) in enumerate(S.ge):
        status, value, _ = optimize(C, a, maximize=True)
        if status == "infeasible":
            raise InfeasibleError("empty system")
        if status == "optimal" and value == b:
            out.append(i)
    return out


def affine_dim(S: HSystem) -> int:
    """Dimension of the affine hull of the solution set; -1 when empty."""
    if feasible(S) is None:
        return -1
    imp = implicit_equalities(S)
    vecs = [a for a, _ in S.eq] + [S.ge[i][0] for i in imp]
    return S.dim - ratlin.rank(vecs)


def _scale_positive(a, b):
    """Rescale a row by a positive factor to a primitive integer coefficient vector."""
    ints = ratlin.clear_denominators(a)
    j = next(i for i, x in enumerate(a) if x != 0)
    f = Q(ints[j]) / a[j]
    return tuple(Q(x) for x in ints), b * f


def remove_redundant(S: HSystem, _implicit=None) -> HSystem:
    """Minimal equivalent system in canonical row form.

    Implicit equalities are promoted, equalities are put in reduced echelon
    form, inequalities are reduced modulo the equalities and scaled to
    primitive integer coefficients, redundant rows are dropped and the
    remainder sorted lexicographically.
    """
    if _implicit is None:
        if feasible(S) is None:
            raise InfeasibleError("cannot canonicalize an empty system")
        _implicit = implicit_equalities(S)
    imp = set(_implicit)
    eq_rows = list(S.eq) + [S.ge[i] for i in sorted(imp)]
    ge_rows = [r for i, r in enumerate(S.ge) if i not in imp]
    gt_rows = list(S.gt)

    n = S.dim
    red, piv = ratlin.rref([list(a) + [b] for a, b in eq_rows]) if eq_rows else ([], [])
    eqs = []
    for row in red:
        a, b = tuple(row[:n]), row[n]
        if ratlin.is_zero(a):
            continue  # consistent 0 = 0
        eqs.append(_scale_positive(a, b))
    red = [r for r in red if not ratlin.is_zero(r[:n])]
    piv = [p for p in piv if p < n]

    def reduce_row(a, b):
        a = list(a)
        for row, p in zip(red, piv):
            f = a[p]
            if f:
                a = [x - f * y for x, y in zip(a, row[:n])]
                b = b - f * row[n]
        return tuple(a), b

    ineqs = {}  # coeffs -> (b, strict)
    for strict, rows in ((False, ge_rows), (True, gt_rows)):
        for a, b in rows:
            a, b = reduce_row(a, b)
            if ratlin.is_zero(a):
                continue  # satisfied everywhere since S is nonempty
            a, b = _scale_positive(a, b)
            prev = ineqs.get(a)
            if prev is None or b > prev[0] or (b == prev[0] and strict):
                ineqs[a] = (b, strict)
    order = sorted(ineqs)
    kept = {a: ineqs[a] for a in order}
    for a in order:
        b, strict = kept.pop(a)
        rest = HSystem(n, tuple(eqs),
                       tuple((x, y) for x, (y, s) in kept.items() if not s),
                       tuple((x, y) for x, (y, s) in kept.items() if s))
        neg = tuple(-x for x in a)
        if strict:
            violator = rest & HSystem(n, ge=((neg, -b),))
        else:
            violator = rest & HSystem(n, gt=((neg, -b),))
        if feasible(violator) is not None:
            kept[a] = (b, strict)
    ge = tuple(sorted((a, b) for a, (b, s) in kept.items() if not s))
    gt = tuple(sorted((a, b) for a, (b, s) in kept.items() if s))
    return HSystem(n, tuple(sorted(eqs)), ge, gt)


def relative_interior_point(S: HSystem, _implicit=None):
    """A point in the relative interior of the solution set (None if empty)."""
    if _implicit is None:
        if feasible(S) is None:
            return None
        _implicit = implicit_equalities(S)
    imp = set(_implicit)
    eq = S.eq + tuple(S.ge[i] for i in sorted(imp))
    soft = tuple(r for i, r in enumerate(S.ge) if i not in imp) + S.gt
    if not soft:
        return feasible(HSystem(S.dim, eq))
    status, _, u, t = _lp(S.dim, eq, (), None, soft=soft)
    assert status == "optimal" and t > 0
    return u


def canonical(S: HSystem):
    """``(remove_redundant(S), affine_dim(S), relative interior point)``, or None if S is empty.

    One LP maximizing the common slack of all inequalities settles the usual
    case where no inequality is implicitly tight.
    """
    status, _, u, t = _lp(S.dim, S.eq, (), None, soft=S.ge + S.gt)
    if status == "infeasible":
        return None
    if not (S.ge or S.gt) or t > 0:
        C = remove_redundant(S, _implicit=())
    else:
        if feasible(S) is None:
            return None
        C = remove_redundant(S)
    dim = S.dim - ratlin.rank([a for a, _ in C.eq]) if C.eq else S.dim
    return C, dim, relative_interior_point(C, _implicit=())


def _implied(row, A: HSystem, strict: bool) -> bool:
    # cheap syntactic check that A already states the row
    if strict:
        return row in A.gt
    return row in A.ge or row in A.gt or row in A.eq


def contains(A: HSystem, B: HSystem) -> bool:
    """True iff the solution set of A is a subset of that of B."""
    if A.dim != B.dim:
        raise ValueError("dimension mismatch")
    if feasible(A) is None:
        return True
    n = A.dim
    for a, b in B.eq:
        if (a, b) in A.eq:
            continue
        neg = tuple(-x for x in a)
        if feasible(A & HSystem(n, gt=((a, b),))) is not None:
            return False
        if feasible(A & HSystem(n, gt=((neg, -b),))) is not None:
            return False
    for a, b in B.ge:
        if _implied((a, b), A, False):
            continue
        if feasible(A & HSystem(n, gt=((tuple(-x for x in a), -b),))) is not None:
            return False
    for a, b in B.gt:
        if _implied((a, b), A, True):
            continue
        if feasible(A & HSystem(n, ge=((tuple(-x for x in a), -b),))) is not None:
            return False
    return True


def same_set(A: HSystem, B: HSystem) -> bool:
    return contains(A, B) and contains(B, A)


def is_bounded(S: HSystem) -> bool:
    C = S.closure()
    for i in range(S.dim):
        e = [0] * S.dim
        e[i] = 1
        for sense in (True, False):
            status, _, _ = optimize(C, e, maximize=sense)
            if status == "unbounded":
                return False
    return True


def vertices(S: HSystem) -> list[tuple]:
    """Extreme points of the closure of a bounded system in dimension <= 3."""
    if S.dim > 3:
        raise ValueError("vertex enumeration is limited to dimension <= 3")
    if feasible(S.closure()) is None:
        return []
    if not is_bounded(S):
        raise ValueError("unbounded system has no vertex description")
    C = S.closure()
    rows = list(C.eq) + list(C.ge)
    n = S.dim
    found = set()
    for combo in itertools.combinations(rows, n):
        p = ratlin.solve([a for a, _ in combo], [b for _, b in combo])
        if p is not None and C.contains_point(p):
            found.add(p)
    return sorted(found)
