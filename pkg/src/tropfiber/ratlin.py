"""Exact rational and integer linear algebra.

Rationals are :class:`fractions.Fraction` (arbitrary precision, always in
lowest terms).  Vectors are plain tuples; matrices are sequences of rows.
Nothing in this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Rational = Fraction
IntVector = tuple  # tuple[int, ...]
RatVector = tuple  # tuple[Fraction, ...]


class LinAlgError(ValueError):
    pass


def to_rational(x) -> Fraction:
    """Parse an int, Fraction or a ``"p/q"`` / ``"p"`` string exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise LinAlgError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        try:
            num, _, den = s.partition("/")
            if not den:
                return Fraction(int(num))
            return Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError):
            raise LinAlgError(f"malformed rational {x!r}") from None
    raise LinAlgError(f"not a rational: {x!r}")


def fmt(q) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def fmt_vec(v: Iterable) -> str:
    return "(" + ", ".join(fmt(x) for x in v) + ")"


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise LinAlgError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), 0)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def primitive(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries."""
    v = tuple(int(x) for x in v)
    g = reduce(gcd, v, 0)
    if g == 0:
        raise LinAlgError("not primitivizable: zero vector")
    return tuple(x // g for x in v)


def canonical_sign(v: Sequence) -> tuple:
    """Flip ``v`` so that its first nonzero entry is positive."""
    for x in v:
        if x != 0:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def clear_denominators(v: Sequence) -> IntVector:
    """Smallest positive multiple of a rational vector that is integral and primitive."""
    fs = [Fraction(x) for x in v]
    d = reduce(lcm, (f.denominator for f in fs), 1)
    ints = [int(f * d) for f in fs]
    if all(x == 0 for x in ints):
        return tuple(ints)
    return primitive(ints)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    if any(len(r) != ncols for r in m):
        raise LinAlgError("rows of mixed dimension")
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _int_rank(rows: list[list[int]]) -> int:
    # fraction-free elimination; entries stay integers
    r = 0
    ncols = len(rows[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [p * a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def rank(vs: Sequence[Sequence]) -> int:
    """Rank over Q of a list of vectors; the empty list has rank 0."""
    if not vs:
        return 0
    dims = {len(v) for v in vs}
    if len(dims) != 1:
        raise LinAlgError("vectors of mixed dimension")
    if all(type(x) is int for v in vs for x in v):
        return _int_rank([list(v) for v in vs])
    return len(rref(vs)[1])


def nullspace(rows: Sequence[Sequence], dim: int) -> list[RatVector]:
    """Basis of {x : <r, x> = 0 for every row r}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    red, piv = rref(rows)
    free = [c for c in range(dim) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * dim
        x[f] = Fraction(1)
        for row, pc in zip(red, piv):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def kernel_primitive(vs: Sequence[Sequence[int]], dim: int | None = None) -> IntVector:
    """Primitive integer normal to the hyperplane spanned by ``vs``.

    The sign is fixed so the first nonzero entry is positive.
    """
    if dim is None:
        if not vs:
            raise LinAlgError("dimension required for an empty spanning set")
        dim = len(vs[0])
    if any(len(v) != dim for v in vs):
        raise LinAlgError("vectors of mixed dimension")
    if rank(vs) != dim - 1:
        raise LinAlgError("kernel not a line")
    (k,) = nullspace(vs, dim)
    return canonical_sign(clear_denominators(k))


def solve(a: Sequence[Sequence], b: Sequence) -> RatVector | None:
    """Unique solution of the square system a x = b, or None if singular."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    red, piv = rref(aug)
    if piv != list(range(n)):
        return None
    return tuple(row[n] for row in red)


def coords_in_basis(v: Sequence, basis: Sequence[Sequence]) -> RatVector:
    """Coordinates c with v = sum c_i * basis_i."""
    n = len(v)
    if len(basis) != n or any(len(b) != n for b in basis):
        raise LinAlgError("basis must consist of n vectors of dimension n")
    cols = [[basis[j][i] for j in range(n)] for i in range(n)]
    c = solve(cols, v)
    if c is None:
        raise LinAlgError("singular basis")
    return c


def det(a: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact elimination."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return sign * out


def combine(coeffs: Sequence, vectors: Sequence[Sequence]) -> RatVector:
    """sum coeffs_i * vectors_i."""
    n = len(vectors[0])
    return tuple(sum((Fraction(c) * v[i] for c, v in zip(coeffs, vectors)), Fraction(0)) for i in range(n))
