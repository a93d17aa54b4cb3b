from fractions import Fraction

import pytest
from hypothesis import given

from freeballean.ballean import E
from freeballean.vectors import (Decomposition, DiffTerm, FreeVector, IdealBaseParams,
                                 add, coordinate_sum, evaluate, negate, scale, vec,
                                 verify_decomposition)

from strategies import free_vectors, rationals

D = FreeVector.diff
P = IdealBaseParams.of


def test_arithmetic_examples():
    assert add(D("p1", "p0"), D("p0", "p1")) == FreeVector()
    assert coordinate_sum(D("p2", "p1")) == 0
    assert coordinate_sum(3 * FreeVector.basis("p0") + D("p2", "p1")) == 3
    assert negate(vec(p0=1)) == vec(p0=-1)
    assert scale(Fraction(1, 2), vec(p0=2)) == vec(p0=1)


def test_no_zero_entries():
    v = FreeVector({"p0": 0, "p1": Fraction(1, 2)})
    assert set(v) == {"p1"}
    assert (v - v).support == frozenset()


def test_evaluate_examples():
    p = P(1, 2, 1, "p0")
    assert evaluate(Decomposition.build([(("p2", "p1"), 1)], 0, p)) == D("p2", "p1")
    assert evaluate(Decomposition.build([(("p1", "p0"), 1), (("p0", "p1"), 1)], 0, p)) == FreeVector()
    assert evaluate(Decomposition.build([], 2, p)) == vec(p0=2)


def test_verify_examples(line4):
    p = P(1, 2, 1, "p0")
    assert verify_decomposition(Decomposition.build([(("p2", "p1"), 1)], 0, p), line4)
    assert not verify_decomposition(Decomposition.build([(("p3", "p1"), 1)], 0, p), line4)
    assert not verify_decomposition(Decomposition.build([(("p2", "p1"), 3)], 0, p), line4)
    assert not verify_decomposition(Decomposition.build([], 2, p), line4)
    assert not verify_decomposition(Decomposition.build([], 0, P(1, 9, 1, "p0")), line4)
    two = [(("p2", "p1"), 1)] * 2
    assert not verify_decomposition(Decomposition.build(two, 0, p), line4)


def test_params_validation():
    with pytest.raises(ValueError):
        P(0, 1, 1, "p0")
    with pytest.raises(ValueError):
        E(0, 1)


@given(free_vectors(), free_vectors())
def test_vector_space_laws(u, v):
    assert u + v == v + u
    assert u - u == FreeVector()
    assert coordinate_sum(u + v) == coordinate_sum(u) + coordinate_sum(v)
    assert hash(u + v) == hash(v + u)


@given(rationals(), rationals(), rationals())
def test_coordinate_sum_is_z_coeff(a, b, mu):
    d = Decomposition((DiffTerm("p1", "p0", a), DiffTerm("p3", "p2", b)), mu, P(3, 2, 1, "p0"))
    assert coordinate_sum(evaluate(d)) == mu
    assert evaluate(d.negated()) == -evaluate(d)
