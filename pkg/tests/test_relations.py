import itertools

import pytest
from hypothesis import given

from freeballean.relations import (GroundMismatch, Relation, compose, inverse,
                                   power, sort_points)

from strategies import relations

G = ("p0", "p1", "p2", "p3")


def near(k):
    return Relation.of(G, [(x, y) for x in G for y in G if abs(int(x[1:]) - int(y[1:])) <= k])


def test_compose_line_steps():
    assert compose(near(1), near(1)) == near(2)


def test_compose_diagonal_and_full():
    a = near(1)
    assert compose(Relation.diagonal(G), a) == a
    assert compose(Relation.full(G), Relation.full(G)) == Relation.full(G)


def test_inverse_examples():
    a = Relation.of(G, [("p0", "p1")]).union(Relation.diagonal(G))
    assert inverse(a) == Relation.of(G, [("p1", "p0")]).union(Relation.diagonal(G))
    assert inverse(near(2)) == near(2)


def test_ground_mismatch():
    with pytest.raises(GroundMismatch):
        compose(near(1), Relation.diagonal(G[:3]))
    with pytest.raises(GroundMismatch):
        Relation.of(G[:2], [("p0", "p3")])


def test_natural_point_order():
    assert sort_points(["p10", "p2", "p1"]) == ("p1", "p2", "p10")


def test_power_is_iterated_compose():
    a = near(1)
    assert power(a, 1) == a
    assert power(a, 3) == compose(compose(a, a), a)


def test_exhaustive_two_points():
    ground = ("a", "b")
    pairs = [(x, y) for x in ground for y in ground]
    rels = [Relation.of(ground, s) for k in range(5) for s in itertools.combinations(pairs, k)]
    for a, b in itertools.product(rels, repeat=2):
        assert inverse(compose(a, b)) == compose(inverse(b), inverse(a))
        for c in rels[::3]:
            assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(relations(), relations(), relations())
def test_associative(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(relations())
def test_inverse_involution(a):
    assert inverse(inverse(a)) == a


@given(relations(), relations())
def test_inverse_of_compose(a, b):
    assert inverse(compose(a, b)) == compose(inverse(b), inverse(a))


@given(relations(), relations())
def test_compose_ball_order(a, b):
    # (a o b)[x] is the b-image of the a-image of x
    for x in a.ground:
        assert compose(a, b).image(x) == b.image_of_set(a.image(x))
