import json
import random
from fractions import Fraction as F

import pytest

import tropfiber as tf
from tropfiber import metrics, polytope, ratlin
from tropfiber.polytope import InvariantError, NotInteriorError, ParseError

EX2_DOC = {"dim": 2, "facets": [
    {"normal": [1, 0], "offset": "0"}, {"normal": [1, 1], "offset": "1/4"},
    {"normal": [0, 1], "offset": "0"}, {"normal": [-1, -1], "offset": "-1"},
    {"normal": [0, -1], "offset": "-1/2"}]}


def doc(*facets, dim=2):
    return {"dim": dim, "facets": [{"normal": list(n), "offset": o} for n, o in facets]}


def test_parse_example_2():
    P = polytope.parse(json.dumps(EX2_DOC))
    assert P.m == 5 and P.dim == 2
    assert P.facet(2).offset == F(1, 4)
    assert P.facets == tf.load_example("blowup2a").facets


def test_bundled_examples_validate():
    for name in tf.EXAMPLES:
        assert polytope.validate(tf.load_example(name)).ok


def test_blowup1_parameter():
    assert tf.load_example("blowup1").facet(4).offset == F(-1, 2)
    assert tf.load_example("blowup1", c=F(3, 4)).facet(4).offset == F(-3, 4)


def test_non_primitive_normal():
    with pytest.raises(InvariantError, match="non-primitive normal at facet 1"):
        polytope.from_dict(doc(((2, 0), "0"), ((0, 1), "0"), ((-1, -1), "-1")))


def test_redundant_facet():
    with pytest.raises(InvariantError, match="redundant facet 4"):
        polytope.from_dict(doc(((1, 0), "0"), ((0, 1), "0"), ((-1, -1), "-1"), ((1, 0), "-5")))


def test_duplicate_facet_is_redundant():
    r = polytope.validate(polytope.from_facets(
        [((1, 0), 0), ((0, 1), 0), ((-1, -1), -1), ((0, 1), 0)], check=False))
    assert r.get("irredundant").detail == "redundant facet 4"


def test_validate_example_3():
    r = polytope.validate(tf.load_example("blowup2b"))
    assert r.ok and [c.name for c in r.checks] == ["primitive", "full_dimensional", "bounded", "irredundant"]


def test_validate_unbounded_strip():
    r = polytope.validate(polytope.from_facets([((1, 0), 0), ((-1, 0), -1)], check=False))
    assert not r.get("bounded").passed
    assert r.get("full_dimensional").passed


def test_validate_empty():
    r = polytope.validate(polytope.from_facets([((1, 0), 1), ((-1, 0), 1)], check=False))
    assert not r.get("full_dimensional").passed
    assert not r.ok


def test_validate_flat():
    # a segment in the plane is not full dimensional
    r = polytope.validate(polytope.from_facets(
        [((1, 0), 0), ((-1, 0), 0), ((0, 1), 0), ((0, -1), -1)], check=False))
    assert not r.get("full_dimensional").passed


@pytest.mark.parametrize("text,match", [
    ("{", "invalid JSON"),
    ("[]", "JSON object"),
    ('{"dim": 2}', "missing field"),
    ('{"dim": 0, "facets": []}', "positive integer"),
    ('{"dim": 2, "facets": []}', "nonempty"),
    ('{"dim": 2, "facets": [{"normal": [1, 0]}]}', "needs"),
    ('{"dim": 2, "facets": [{"normal": [1, 0, 0], "offset": "0"}]}', "dimension 3"),
    ('{"dim": 2, "facets": [{"normal": [1.5, 0], "offset": "0"}]}', "integers"),
    ('{"dim": 2, "facets": [{"normal": [1, 0], "offset": "1/0"}]}', "malformed"),
    ('{"dim": 2, "facets": [{"normal": [1, 0], "offset": "-c"}]}', "malformed"),
])
def test_parse_errors(text, match):
    with pytest.raises(ParseError, match=match):
        polytope.parse(text)


def test_json_round_trip():
    P = tf.load_example("blowup2b")
    assert polytope.from_dict(P.to_json()) == P


def test_facet_value(ex2, ex3, cp2):
    assert polytope.facet_value(ex2, 4, (F(3, 8), F(1, 4))) == F(3, 8)
    assert polytope.facet_value(ex3, 5, (3, F(5, 2))) == F(3, 2)
    assert polytope.facet_value(cp2, 3, (F(1, 2), F(1, 2))) == 0
    with pytest.raises(IndexError):
        polytope.facet_value(ex2, 6, (0, 0))
    with pytest.raises(ValueError):
        polytope.facet_value(ex2, 1, (0, 0, 0))


def test_energy_filtration_ex2(ex2):
    E = polytope.energy_filtration(ex2, (F(3, 8), F(1, 4)))
    assert E.levels == (F(1, 4), F(3, 8))
    assert E.groups == ((3, 5), (1, 2, 4))
    assert E.a == (2, 3) and E.d == (1, 1) and E.kappa == 2

    E = polytope.energy_filtration(ex2, (F(5, 16), F(1, 4)))
    assert E.levels == (F(1, 4), F(5, 16), F(7, 16))
    assert E.groups == ((3, 5), (1, 2), (4,))
    assert E.d == (1, 1, 0) and E.kappa == 2


def test_energy_filtration_cp2(cp2):
    E = polytope.energy_filtration(cp2, (F(1, 3), F(1, 3)))
    assert E.levels == (F(1, 3),) and E.a == (3,) and E.d == (2,) and E.kappa == 1


def test_energy_filtration_boundary(cp2):
    with pytest.raises(NotInteriorError, match="not interior"):
        polytope.energy_filtration(cp2, (0, F(1, 2)))
    with pytest.raises(NotInteriorError):
        polytope.energy_filtration(cp2, (2, 2))


def test_leading_order_potential(cp2, ex2, ex3):
    L = polytope.leading_order_potential(cp2, (F(1, 3), F(1, 3)))
    assert [e for _, e in L.y_form.terms] == [(1, 0), (0, 1), (-1, -1)]
    assert [v for v, _ in L.y_form.terms] == [F(1, 3)] * 3
    assert L.monomials()[2] == "y1^-1*y2^-1 T^1/3"
    L = polytope.leading_order_potential(ex3, (1, 1))
    assert [v for v, _ in L.x_form.terms] == [0, 0, 2, 5, 1]
    L = polytope.leading_order_potential(ex2, (F(3, 8), F(1, 4)))
    assert [v for v, _ in L.y_form.terms] == [F(3, 8), F(3, 8), F(1, 4), F(3, 8), F(1, 4)]


def test_x_form_is_position_independent(ex3):
    a = polytope.leading_order_potential(ex3, (1, 1)).x_form
    b = polytope.leading_order_potential(ex3, (3, F(5, 2))).x_form
    assert a == b


def test_translate_facet(ex2, cp2):
    Q = polytope.translate_facet(ex2, 1, F(1, 8))
    assert Q.facet(1).offset == F(-1, 8) and Q.normals == ex2.normals
    assert polytope.translate_facet(ex2, 1, 0) == ex2
    with pytest.raises(InvariantError, match="empty interior"):
        polytope.translate_facet(cp2, 3, -2)
    with pytest.raises(InvariantError, match="redundant facet 1"):
        polytope.translate_facet(ex2, 1, F(1, 2))
    Q = polytope.translate_facet(ex2, 1, F(1, 2), check=False)
    assert not polytope.validate(Q).ok


# --- properties on random interior points ----------------------------------------

def _interior_points(P, n, seed):
    rng = random.Random(seed)
    lo, hi = P.bounding_box()
    out = []
    while len(out) < n:
        u = tuple(F(rng.randint(int(a * 48), int(b * 48)), 48) for a, b in zip(lo, hi))
        if P.is_interior(u):
            out.append(u)
    return out


@pytest.mark.parametrize("name", tf.EXAMPLES)
def test_filtration_invariants(name):
    P = tf.load_example(name)
    for u in _interior_points(P, 150, 1):
        E = polytope.energy_filtration(P, u)
        assert min(E.levels) > 0
        assert list(E.levels) == sorted(set(E.levels))
        assert sorted(j for g in E.groups for j in g) == list(range(1, P.m + 1))
        assert sum(E.a) == P.m and sum(E.d[:E.kappa]) == P.dim
        assert E.kappa <= len(E.levels)
        prefix = [P.facet(j).normal for g in E.groups[:E.kappa] for j in g]
        assert ratlin.rank(prefix) == P.dim
        if E.kappa > 1:
            shorter = [P.facet(j).normal for g in E.groups[:E.kappa - 1] for j in g]
            assert ratlin.rank(shorter) < P.dim


def test_translation_changes_only_that_facet(ex3):
    rng = random.Random(4)
    for _ in range(40):
        j = rng.randint(1, ex3.m)
        delta = F(rng.randint(1, 8), 16)
        Q = polytope.translate_facet(ex3, j, delta)
        u = _interior_points(ex3, 1, rng.random())[0]
        before, after = ex3.values(u), Q.values(u)
        assert after[j - 1] == before[j - 1] + delta
        assert [a for k, a in enumerate(after) if k != j - 1] == \
            [b for k, b in enumerate(before) if k != j - 1]


@pytest.mark.parametrize("name,j", [("blowup2b", 3), ("blowup2b", 4), ("cp2", 1), ("blowup1", 4)])
def test_translate_distance_bound(name, j):
    # distance between a polytope and a valid single-facet translate is at least |delta|/|v_j|
    P = tf.load_example(name)
    v = P.facet(j).normal
    tol = F(1, 10 ** 6)
    for delta in (F(1, 8), F(1, 32)):
        Q = polytope.translate_facet(P, j, delta)
        I = metrics.hausdorff(P, Q, tol)
        # compare squares: (lower + tol)^2 |v|^2 >= delta^2
        assert (I.lower + tol) ** 2 * ratlin.dot(v, v) >= delta ** 2
