import json
import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
import tropfiber as tf
from tropfiber import metrics, ratlin
from tropfiber.hspace import HSystem
from tropfiber.metrics import MetricError, PerturbationFamily
from tropfiber.tropical import PLComplex, make_cell

TOL = F(1, 10 ** 6)


def cx(*systems):
    return PLComplex(2, tuple(make_cell(S) for S in systems))


def point(x, y):
    return HSystem(2, eq=(((1, 0), F(x)), ((0, 1), F(y))))


def hseg(y, x0, x1):
    return HSystem(2, eq=(((0, 1), F(y)),), ge=(((1, 0), F(x0)), ((-1, 0), -F(x1))))


def hull(pts):
    rows = set()
    for p, q in combinations(pts, 2):
        a = (q[1] - p[1], p[0] - q[0])
        b = ratlin.dot(a, p)
        sides = [ratlin.dot(a, r) - b for r in pts]
        if all(s >= 0 for s in sides):
            rows.add((a, b))
        elif all(s <= 0 for s in sides):
            rows.add(((-a[0], -a[1]), -b))
    return HSystem(2, ge=tuple(rows))


def test_identical_sets():
    P = tf.load_example("blowup2b")
    I = metrics.hausdorff(P, P, TOL)
    assert I.contains(0) and I.upper <= TOL
    C = tf.detect(P)
    assert metrics.hausdorff(C, C, TOL).upper <= TOL


def test_three_four_five():
    I = metrics.hausdorff(cx(point(0, 0)), cx(point(3, 4)), TOL)
    assert I.contains(5) and I.width <= TOL


def test_parallel_segments():
    I = metrics.hausdorff(cx(hseg(0, 0, 1)), cx(hseg(F(1, 2), 0, 1)), TOL)
    assert I.contains(F(1, 2)) and I.width <= TOL


def test_irrational_distance_is_bracketed():
    I = metrics.hausdorff(cx(point(0, 0)), cx(point(1, 1)), TOL)
    assert I.lower ** 2 <= 2 <= I.upper ** 2 and I.width <= TOL


def test_segment_to_triangle():
    tri = cx(hull([(F(0), F(0)), (F(2), F(0)), (F(0), F(2))]))
    seg = cx(hseg(3, 0, 2))
    # farthest triangle point from the segment is a bottom vertex, at distance 3
    I = metrics.hausdorff(tri, seg, TOL)
    assert I.contains(3)


def test_polytope_distance_under_translation():
    P = tf.load_example("blowup2b")
    Q = tf.translate_facet(P, 4, F(1, 4))  # top edge u2 <= 5 moves to u2 <= 21/4
    # the new corner (29/4, 21/4) is nearest to the old corner (7, 5)
    I = metrics.hausdorff(P, Q, TOL)
    assert I.lower ** 2 <= F(1, 8) <= I.upper ** 2 and I.width <= TOL


def test_errors():
    line = tf.trop_poly(tf.TropicalPolynomial(2, ((0, (1, 0)), (0, (0, 0)))))
    with pytest.raises(MetricError, match="bounding box"):
        metrics.hausdorff(line, line)
    assert metrics.hausdorff(line, line, TOL, box=((-1, -1), (1, 1))).upper <= TOL
    with pytest.raises(MetricError, match="empty"):
        metrics.hausdorff(PLComplex(2, ()), cx(point(0, 0)))
    with pytest.raises(MetricError, match="tolerance"):
        metrics.hausdorff(cx(point(0, 0)), cx(point(0, 0)), 0)
    cube = tf.polytope.from_facets([((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((-1, -1, -1), -1)])
    with pytest.raises(MetricError, match="dimension 2"):
        metrics.hausdorff(cube, cube)
    with pytest.raises(TypeError):
        metrics.hausdorff([(0, 0)], cx(point(0, 0)))


def test_dyadic_square_roots():
    for x in (F(2), F(1, 3), F(49, 4), F(0)):
        lo, hi = metrics.sqrt_lo(x, 20), metrics.sqrt_hi(x, 20)
        assert lo ** 2 <= x <= hi ** 2 and hi - lo <= F(1, 2 ** 20)
    assert metrics.sqrt_lo(F(9, 4), 4) == metrics.sqrt_hi(F(9, 4), 4) == F(3, 2)


def test_convex_hull():
    pts = [(0, 0), (2, 0), (1, 0), (2, 2), (0, 2), (1, 1)]
    assert metrics.convex_hull(pts) == [(0, 0), (2, 0), (2, 2), (0, 2)]


def test_interval_json():
    I = metrics.DistanceInterval(F(1, 4), F(1, 3))
    assert I.to_json() == {"lower": "1/4", "upper": "1/3"}
    assert I.width == F(1, 12)


# --- convergence experiments -----------------------------------------------------

def test_family_validation(ex2):
    with pytest.raises(MetricError, match="decreasing"):
        PerturbationFamily(ex2, 1, (F(1, 8), F(1, 4)))
    with pytest.raises(MetricError, match="nonnegative"):
        PerturbationFamily(ex2, 1, (F(-1, 8),))
    with pytest.raises(tf.InvariantError):
        PerturbationFamily.dyadic(ex2, 1, 3)
    fam = PerturbationFamily.dyadic(ex2, 1, 3, strict=False)
    assert fam.valid() == [False, False, True]
    with pytest.raises(IndexError):
        PerturbationFamily(ex2, 9, (F(1, 8),))


def test_convergence_ex2(ex2):
    fam = PerturbationFamily.dyadic(ex2, 1, 8, strict=False)
    rows = metrics.convergence_experiment(fam, (1, 0), TOL)
    uppers = [r.interval.upper for r in rows]
    assert all(u > 0 for u in uppers)
    assert uppers == sorted(uppers, reverse=True)
    assert uppers[-1] < F(1, 16)
    assert all(r.interval.width <= TOL for r in rows)
    json.dumps([r.to_json() for r in rows])
    table = metrics.format_table(rows).splitlines()
    assert table[0].split() == ["delta", "lower", "upper"] and len(table) == 9


def test_convergence_zero_delta(ex2):
    fam = PerturbationFamily(ex2, 1, (F(1, 8), F(0)))
    rows = metrics.convergence_experiment(fam, (1, 0), TOL)
    assert rows[-1].interval.contains(0)


def test_convergence_blowup1(blowup1):
    fam = PerturbationFamily.dyadic(blowup1, 4, 5, strict=False)
    uppers = [r.interval.upper for r in metrics.convergence_experiment(fam, (0, 1), TOL)]
    assert all(a >= b for a, b in zip(uppers, uppers[1:]))


# --- properties ------------------------------------------------------------------

coord = st.integers(-6, 6).map(lambda k: F(k, 2))
pt = st.tuples(coord, coord)


def _triangle(pts):
    (a, b), (c, d), (e, f) = pts
    if (c - a) * (f - b) == (d - b) * (e - a):
        return None
    return cx(hull(list(pts)))


@given(st.lists(pt, min_size=3, max_size=3, unique=True), st.lists(pt, min_size=3, max_size=3, unique=True))
@settings(max_examples=40, deadline=None)
def test_symmetry(a, b):
    A, B = _triangle(a), _triangle(b)
    if A is None or B is None:
        return
    I, J = metrics.hausdorff(A, B, TOL), metrics.hausdorff(B, A, TOL)
    assert I.lower <= J.upper and J.lower <= I.upper
    assert I.width <= TOL


@given(*(st.lists(pt, min_size=3, max_size=3, unique=True) for _ in range(3)))
@settings(max_examples=25, deadline=None)
def test_triangle_inequality(a, b, c):
    A, B, C = _triangle(a), _triangle(b), _triangle(c)
    if None in (A, B, C):
        return
    ac = metrics.hausdorff(A, C, TOL).upper
    ab = metrics.hausdorff(A, B, TOL).upper
    bc = metrics.hausdorff(B, C, TOL).upper
    assert ac <= ab + bc + 3 * TOL


def test_matches_sampled_distance():
    rng = random.Random(7)
    for _ in range(15):
        def segs(k):
            out = []
            for _ in range(k):
                p = (F(rng.randint(-8, 8), 2), F(rng.randint(-8, 8), 2))
                q = (F(rng.randint(-8, 8), 2), F(rng.randint(-8, 8), 2))
                out.append((p, q))
            return out
        sa, sb = segs(2), segs(3)

        A = cx(*[_segment_system(p, q) for p, q in sa])
        B = cx(*[_segment_system(p, q) for p, q in sb])
        I = metrics.hausdorff(A, B, TOL)
        approx = oracle.hausdorff_sampled(sa, sb, samples=1201)
        assert float(I.lower) - 1e-9 <= approx + 0.02 and approx <= float(I.upper) + 0.02


def _segment_system(p, q):
    if p == q:
        return point(*p)
    a = (q[1] - p[1], p[0] - q[0])
    d = (q[0] - p[0], q[1] - p[1])
    return HSystem(2, eq=((a, ratlin.dot(a, p)),),
                   ge=((d, ratlin.dot(d, p)), ((-d[0], -d[1]), -ratlin.dot(d, q))))
