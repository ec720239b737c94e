from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ppdivisor.convex import (MINUS_INFINITY, Cone, Polyhedron, contains, dual_cone, format_polyhedron,
                              linear_image, minkowski_difference, minkowski_sum, scale, support_min,
                              translate)
from ppdivisor.errors import EmptyPolyhedron, NotPointed, RankMismatch, TailMismatch, TailViolation
from ppdivisor.exact_linalg import Matrix
from strategies import cones, int_vectors, polyhedra, rational_vectors, tails


def _box(n, r=3):
    return list(product(range(-r, r + 1), repeat=n))


def test_cone_canonical_form():
    c = Cone([(2, 0), (1, 1), (0, 3), (1, 0)])
    assert c.generators == ((0, 1), (1, 0))
    assert c == Cone.orthant(2)
    assert Cone([(1, 0), (-1, 0)]).lineality == ((1, 0),)
    assert not Cone([(1, 0), (-1, 0)]).is_pointed
    assert Cone.zero(2).is_zero


def test_full_and_zero_are_dual():
    assert dual_cone(Cone.zero(3)) == Cone.full(3)
    assert dual_cone(Cone.full(2)) == Cone.zero(2)
    assert dual_cone(Cone.orthant(2)) == Cone.orthant(2)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(
    st.lists(int_vectors(n, -3, 3), max_size=4), st.just(n))))
def test_cone_membership_from_raw_generators(data):
    gens, n = data
    c = Cone(gens, n)
    for x in _box(n, 2):
        assert c.contains_point(x) == oracles.in_cone(x, gens)


@given(cones())
def test_halfspaces_cut_out_the_cone(c):
    assert Cone.from_halfspaces(c.halfspaces, c.ambient_rank) == c
    for g in c.generators:
        assert all(sum(a * b for a, b in zip(h, g)) >= 0 for h in c.halfspaces)


def test_polyhedron_vertices_are_canonical():
    p = Polyhedron([(0,), (Fraction(1, 2),), (Fraction(1, 4),)])
    assert p.vertices == ((0,), (Fraction(1, 2),))
    q = Polyhedron([(0, 0), (1, 0), (0, 1), (Fraction(1, 3), Fraction(1, 3))])
    assert len(q.vertices) == 3
    r = Polyhedron([(0, 0), (1, 1)], Cone.orthant(2))
    assert r.vertices == ((0, 0),)


def test_polyhedron_errors():
    with pytest.raises(EmptyPolyhedron):
        Polyhedron([])
    with pytest.raises(NotPointed):
        Polyhedron([(0,)], Cone([(1,), (-1,)]))
    with pytest.raises(RankMismatch):
        Polyhedron([(0,), (0, 1)])
    with pytest.raises(EmptyPolyhedron):
        Polyhedron.from_halfspaces([((1,), -1), ((-1,), 0)], 1)
    with pytest.raises(NotPointed):
        Polyhedron.from_halfspaces([((1, 0), 0)], 2)


def test_format_polyhedron():
    assert format_polyhedron(Polyhedron.point([Fraction(1, 2)])) == "{1/2}"
    assert format_polyhedron(Polyhedron.interval(0, Fraction(1, 6))) == "[0,1/6]"
    assert format_polyhedron(Polyhedron([(1,)], Cone([(1,)]))) == "[1,+oo)"
    assert format_polyhedron(Polyhedron([(1,)], Cone([(-1,)]))) == "(-oo,1]"
    assert format_polyhedron(Polyhedron.point((1, 2))) == "{(1,2)}"


@given(polyhedra())
def test_halfspace_round_trip(p):
    assert Polyhedron.from_halfspaces(p.halfspaces, p.ambient_rank) == p


@given(polyhedra(n=2))
def test_from_halfspaces_matches_brute_force_vertices(p):
    verts = oracles.vertices(p.halfspaces, 2)
    assert tuple(verts) == tuple(tuple(Fraction(x) for x in v) for v in p.vertices)


@given(polyhedra(), st.data())
def test_support_min_against_vertex_minimum(p, data):
    u = data.draw(int_vectors(p.ambient_rank, -5, 5))
    expected = oracles.minimize(p.halfspaces, p.ambient_rank, u)
    got = support_min(p, u)
    if expected is None:
        assert got is MINUS_INFINITY
    else:
        assert got == expected


@st.composite
def polyhedron_pairs(draw):
    n = draw(st.integers(1, 2))
    tail = draw(tails(n))
    return draw(polyhedra(tail=tail)), draw(polyhedra(tail=tail))


@given(polyhedron_pairs(), st.data())
def test_support_min_is_additive(pair, data):
    a, b = pair
    u = data.draw(int_vectors(a.ambient_rank, -5, 5))
    s = support_min(minkowski_sum(a, b), u)
    if dual_cone(a.tail).contains_point(u):
        assert s == support_min(a, u) + support_min(b, u)
    else:
        assert s is MINUS_INFINITY


@given(polyhedron_pairs())
def test_minkowski_sum_commutes(pair):
    a, b = pair
    assert minkowski_sum(a, b) == minkowski_sum(b, a)
    assert minkowski_sum(a, Polyhedron.trivial(a.tail)) == a


@given(polyhedron_pairs())
def test_minkowski_difference_is_largest_fit(pair):
    a, b = pair
    big = minkowski_sum(a, b)
    # (a + b) - b recovers a for convex a
    assert minkowski_difference(big, b) == a
    diff = minkowski_difference(big, a)
    assert contains(big, minkowski_sum(diff, a))


def test_minkowski_difference_examples():
    I = Polyhedron.interval(0, 1)
    assert minkowski_difference(I, Polyhedron.interval(0, Fraction(1, 3))) == Polyhedron.interval(0, Fraction(2, 3))
    assert minkowski_difference(I, Polyhedron.point([Fraction(1, 2)])) == Polyhedron.interval(Fraction(-1, 2), Fraction(1, 2))
    with pytest.raises(EmptyPolyhedron):
        minkowski_difference(Polyhedron.interval(0, 1), Polyhedron.interval(0, 2))
    with pytest.raises(TailMismatch):
        minkowski_sum(Polyhedron([(0,)], Cone([(1,)])), Polyhedron.point([0]))


@given(polyhedra(), st.builds(Fraction, st.integers(1, 6), st.integers(1, 4)), st.data())
def test_scale_and_translate(p, r, data):
    t = data.draw(rational_vectors(p.ambient_rank))
    assert scale(scale(p, r), 1 / r) == p
    moved = translate(p, t)
    assert translate(moved, tuple(-x for x in t)) == p
    assert contains(moved, Polyhedron([tuple(x + y for x, y in zip(p.vertices[0], t))], p.tail))


def test_contains():
    assert contains(Polyhedron.interval(0, 1), Polyhedron.point([Fraction(1, 2)]))
    assert not contains(Polyhedron.point([0]), Polyhedron.interval(0, 1))
    ray = Polyhedron([(0,)], Cone([(1,)]))
    assert contains(ray, Polyhedron([(2,)], Cone([(1,)])))
    assert not contains(Polyhedron([(2,)], Cone([(1,)])), ray)


def test_linear_image():
    p = Polyhedron([(0, 0), (1, 0)], Cone([(0, 1)]))
    img = linear_image(p, Matrix([[1, 1]]), Cone([(1,)]))
    assert img == Polyhedron([(0,)], Cone([(1,)]))
    with pytest.raises(TailViolation):
        linear_image(p, Matrix([[1, -1]]), Cone([(1,)]))


@settings(max_examples=100)
@given(polyhedra(), st.data())
def test_linear_image_support_adjunction(p, data):
    k = p.ambient_rank
    F = Matrix(data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=k, max_size=k),
                                  min_size=1, max_size=2)), k)
    img_tail = p.tail.image(F)
    if not img_tail.is_pointed:
        return
    img = linear_image(p, F, img_tail)
    u2 = data.draw(int_vectors(F.nrows, -4, 4))
    lhs = support_min(img, u2)
    rhs = support_min(p, F.T @ u2)
    assert lhs == rhs or (lhs is MINUS_INFINITY and rhs is MINUS_INFINITY)
