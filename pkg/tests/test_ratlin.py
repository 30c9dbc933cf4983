from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from tropfiber import ratlin
from tropfiber.ratlin import LinAlgError

ints = st.integers(-20, 20)
vec2 = st.tuples(ints, ints)
vec3 = st.tuples(ints, ints, ints)
rats = st.fractions(min_value=-10, max_value=10, max_denominator=12)


@pytest.mark.parametrize("v,want", [((2, 4), (1, 2)), ((0, 0, 3), (0, 0, 1)), ((-2, 2), (-1, 1))])
def test_primitive(v, want):
    assert ratlin.primitive(v) == want


def test_primitive_zero():
    with pytest.raises(LinAlgError, match="not primitivizable"):
        ratlin.primitive((0, 0))


@pytest.mark.parametrize("vs,want", [
    ([(1, 0), (1, 1), (0, 1), (-1, -1), (0, -1)], 2),
    ([(1, 1)], 1),
    ([], 0),
    ([(F(1, 2), F(1, 3)), (3, 2)], 1),
])
def test_rank(vs, want):
    assert ratlin.rank(vs) == want


def test_rank_mixed_dimensions():
    with pytest.raises(LinAlgError):
        ratlin.rank([(1, 0), (1, 0, 0)])


@pytest.mark.parametrize("vs,dim,want", [
    ([(1, 1)], 2, (1, -1)),
    ([(1, 0)], 2, (0, 1)),
    ([(1, 0, 0), (0, 1, 0)], 3, (0, 0, 1)),
])
def test_kernel_primitive(vs, dim, want):
    assert ratlin.kernel_primitive(vs, dim) == want


def test_kernel_not_a_line():
    with pytest.raises(LinAlgError, match="kernel not a line"):
        ratlin.kernel_primitive([(1, 0, 0)], 3)
    with pytest.raises(LinAlgError, match="kernel not a line"):
        ratlin.kernel_primitive([(1, 0), (0, 1)], 2)


@pytest.mark.parametrize("v,basis,want", [
    ((3, 1), [(1, 0), (1, 1)], (2, 1)),
    ((0, 1), [(1, 0), (0, 1)], (0, 1)),
])
def test_coords_in_basis(v, basis, want):
    assert ratlin.coords_in_basis(v, basis) == want


def test_coords_singular():
    with pytest.raises(LinAlgError, match="singular"):
        ratlin.coords_in_basis((1, 0), [(1, 0), (2, 0)])


@pytest.mark.parametrize("text,want", [("3/4", F(3, 4)), ("-2", F(-2)), (" 6/8 ", F(3, 4)), (5, F(5))])
def test_to_rational(text, want):
    assert ratlin.to_rational(text) == want


@pytest.mark.parametrize("bad", ["1/0", "x", "1.5", True, None])
def test_to_rational_rejects(bad):
    with pytest.raises(LinAlgError):
        ratlin.to_rational(bad)


def test_fmt():
    assert ratlin.fmt(F(6, 3)) == "2"
    assert ratlin.fmt(F(-1, 4)) == "-1/4"
    assert ratlin.fmt_vec((F(1, 3), 0)) == "(1/3, 0)"


def test_det():
    assert ratlin.det([(1, 1), (1, -1)]) == -2
    assert ratlin.det([(1, 2), (2, 4)]) == 0


@given(vec3, st.integers(-9, 9))
def test_primitive_scale_invariant(v, k):
    assume(any(v) and k)
    kv = tuple(k * x for x in v)
    if k > 0:
        assert ratlin.primitive(kv) == ratlin.primitive(v)
    # primitive keeps orientation, so negative multiples agree up to sign
    assert ratlin.canonical_sign(ratlin.primitive(kv)) == ratlin.canonical_sign(ratlin.primitive(v))


@given(st.lists(vec3, min_size=2, max_size=2))
def test_kernel_is_orthogonal_and_primitive(vs):
    assume(ratlin.rank(vs) == 2)
    m = ratlin.kernel_primitive(vs, 3)
    assert all(ratlin.dot(m, v) == 0 for v in vs)
    assert ratlin.primitive(m) == m
    assert next(x for x in m if x) > 0


@given(st.lists(st.tuples(rats, rats), min_size=2, max_size=2), st.tuples(rats, rats))
def test_coords_round_trip(basis, c):
    assume(ratlin.det(basis) != 0)
    v = ratlin.combine(c, basis)
    assert ratlin.coords_in_basis(v, basis) == c


@given(st.lists(vec3, max_size=5))
def test_integer_rank_matches_rational_rank(vs):
    fr = [tuple(F(x) for x in v) for v in vs]
    assert ratlin.rank(vs) == ratlin.rank(fr)
