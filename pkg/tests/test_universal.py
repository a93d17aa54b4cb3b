import random
from fractions import Fraction

import pytest
from hypothesis import given

from freeballean.ballean import E, check_coarse_map, identity_map, preset
from freeballean.membership import ideal_membership
from freeballean.universal import (DepthExceeded, Descriptor, StandardVectorBallean,
                                   check_linear_coarse, extension_certificate,
                                   generated_ideal_closure, linear_extension)
from freeballean.vectors import FreeVector, IdealBaseParams, vec

from strategies import free_vectors

INDEX = {f"p{i}": [i] for i in range(4)}


def test_linear_extension_examples():
    h = linear_extension(INDEX)
    assert h(FreeVector.diff("p3", "p1")) == (2,)
    assert h(FreeVector()) == (0,)
    assert h(vec(p2=Fraction(1, 2), p0=Fraction(1, 2))) == (1,)


def test_partial_map_rejected():
    with pytest.raises(ValueError):
        linear_extension({"p0": [0]}, ["p0", "p1"])


@given(free_vectors())
def test_uniqueness(v):
    a = linear_extension(INDEX)
    b = linear_extension({x: list(c) for x, c in reversed(list(INDEX.items()))})
    assert a(v) == b(v)


def test_box_table(line4):
    h = linear_extension(INDEX, line4.ground)
    rep = check_linear_coarse(h, line4, StandardVectorBallean(1), r_range=range(1, 5))
    assert rep.ok
    for (n, e), m in rep.table.items():
        assert m == max(1, n * n * (e.level - 1))
    assert rep.table[(1, E(2))] == 1


def test_box_counterexample(line4):
    h = linear_extension(INDEX, line4.ground)
    rep = check_linear_coarse(h, line4, StandardVectorBallean(1, max_m=3))
    assert not rep.ok
    (n, e), v = rep.counterexample
    assert StandardVectorBallean.norm(h(v)) > 3


def test_constant_to_box(line4):
    h = linear_extension({x: [2] for x in line4.ground}, line4.ground)
    rep = check_linear_coarse(h, line4, StandardVectorBallean(1))
    assert all(m == 2 * n for (n, e), m in rep.table.items())


def test_identity_free_table(line4):
    h = linear_extension(identity_map(line4), line4.ground)
    rep = check_linear_coarse(h, line4, line4, samples=10)
    assert rep.ok
    assert all(p == IdealBaseParams(n, e, "p0") for (n, e), p in rep.table.items())


def test_extension_certificates(line4, line8):
    ident = extension_certificate(identity_map(line4), line4, line4, samples=10)
    assert ident.ok and all(p.entourage == e for (n, e), p in ident.param_map.items())

    double = {f"p{i}": f"p{2 * i}" for i in range(4)}
    cert = extension_certificate(double, line4, line8, samples=10)
    assert cert.ok
    assert cert.param_map[(2, E(2))] == IdealBaseParams(2, E(3), "p0")

    const = extension_certificate({x: "p5" for x in line4.ground}, line4, line8, samples=10)
    assert const.ok
    assert all(p == IdealBaseParams(n, E(1), "p5") for (n, e), p in const.param_map.items())


def test_extension_functorial(line4, line8):
    f = {f"p{i}": f"p{2 * i}" for i in range(4)}
    g = {f"p{i}": f"p{i // 2}" for i in range(8)}
    rf, rg = check_coarse_map(f, line4, line8), check_coarse_map(g, line8, line4)
    comp = extension_certificate({x: g[f[x]] for x in line4.ground}, line4, line4, samples=5)
    for (n, e), p in comp.param_map.items():
        bound = rg.apply(rf.apply(e))
        assert line4.entourage(p.entourage) <= line4.entourage(bound)


def test_closure_examples(line4):
    rng = random.Random(0)
    d = Descriptor(2, 1, 2, False)      # D + D
    assert d.envelope() == (2, 2)
    for _ in range(10):
        c = d.sample(line4, "p0", rng)
        assert ideal_membership(FreeVector(_value(c)), IdealBaseParams(2, E(2), "p0"), line4)
    assert Descriptor(1, 2, 2, False).envelope() == (2, 2)
    assert Descriptor(1, 3, 0, True).envelope() == (3, 1)


def _value(c):
    from freeballean.vectors import evaluate
    return evaluate(c)


def test_closure_probe(line4):
    rep = generated_ideal_closure(line4, depth=2, samples=3, n_max=2)
    assert rep.ok
    assert rep.observed_depth[(1, 2)] is not None
    with pytest.raises(DepthExceeded):
        generated_ideal_closure(line4, depth=5)
