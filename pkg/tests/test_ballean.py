import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from freeballean.ballean import (E, FiniteMetric, GradedBallean, NormalizationWarning,
                                 ball, ball_of_set, check_asymorphism, check_axioms,
                                 check_coarse_map, compose_moduli, identity_map,
                                 is_bounded, line_metric, metric_ballean,
                                 metric_from_scale, preset, product, restrict)
from freeballean.relations import Relation


def test_balls_on_line(line4):
    assert ball(line4, "p1", E(2)) == {"p0", "p1", "p2"}
    assert ball(line4, "p0", E(1)) == {"p0"}
    assert ball(line4, "p0", E(2, 3)) == {"p0", "p1", "p2", "p3"}
    assert ball_of_set(line4, ["p0", "p3"], E(2)) == {"p0", "p1", "p2", "p3"}


@given(st.sampled_from(["p0", "p1", "p2", "p3"]), st.integers(1, 4), st.integers(1, 3),
       st.integers(0, 3), st.integers(0, 2))
def test_ball_monotone(x, r, k, dr, dk):
    b = preset("line", 4)
    r2 = min(r + dr, b.L)
    assert ball(b, x, E(r, k)) <= ball(b, x, E(r2, k + dk))


def test_bounded_witnesses(line4):
    w = is_bounded(line4, ["p0", "p1"])
    assert (w.center, w.entourage) == ("p0", E(2))
    w = is_bounded(line4, ["p0"])
    assert (w.center, w.entourage) == ("p0", E(1))
    w = is_bounded(line4, [])
    assert w is not None and w.entourage == E(1)


def test_bounded_whole_line(line4):
    # the lexicographic minimum is (2,2) around p1, not the top level
    w = is_bounded(line4, line4.ground)
    assert (w.center, w.entourage) == ("p1", E(2, 2))
    assert set(line4.ground) <= ball(line4, "p0", E(line4.L))


def test_metric_levels(line4):
    assert line4.L == 4
    assert line4.level(1) == Relation.diagonal(line4.ground)
    assert line4.level(2).pairs == {(x, y) for x in line4.ground for y in line4.ground
                                    if abs(int(x[1]) - int(y[1])) <= 1}
    assert line4.level(4) == Relation.full(line4.ground)


def test_axioms_pass_on_constructors(line4):
    for b in (line4, preset("cycle", 5), preset("grid", 2), restrict(line4, ["p1", "p3"]),
              product(line4, preset("line", 2))):
        assert check_axioms(b).ok


def test_axiom_mutations(line4):
    levels = list(line4.levels)
    g = line4.ground
    no_diag = GradedBallean(g, tuple(levels[:1] + [Relation(g, levels[1].pairs - {("p2", "p2")})] + levels[2:]))
    rep = check_axioms(no_diag)
    assert rep.first_failure.name == "diagonal"
    assert rep.first_failure.witness == ("p2", "p2")

    shrunk = Relation(g, levels[2].pairs - {("p0", "p1"), ("p1", "p0")})
    non_mono = GradedBallean(g, tuple(levels[:2] + [shrunk] + levels[3:]))
    assert "monotonicity" in check_axioms(non_mono).failed()

    asym = GradedBallean(g, tuple(levels[:1] + [Relation(g, levels[1].pairs - {("p1", "p0")})] + levels[2:]))
    assert check_axioms(asym).first_failure.name == "symmetry"

    short_top = GradedBallean(g, levels[:3])
    assert check_axioms(short_top).first_failure.name == "connectedness"


def test_normalisation_warns():
    with pytest.warns(NormalizationWarning):
        b = GradedBallean.from_pairs(["a", "b"], [[("a", "b")], [("a", "b")]])
    assert check_axioms(b).ok
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        GradedBallean.from_pairs(["a", "b"], [[("a", "b")]], normalize=False)


def test_restrict(line4):
    sub = restrict(line4, ["p0", "p1"])
    assert sub.ground == ("p0", "p1")
    assert sub.level(2) == Relation.full(sub.ground)
    assert restrict(line4, line4.ground) == line4
    assert restrict(line4, ["p0"]).size == 1
    with pytest.raises(ValueError):
        restrict(line4, [])


def test_product():
    l2 = preset("line", 2)
    g = product(l2, l2)
    assert g.size == 4
    assert ball(g, "(p0,p0)", E(2)) == {"(p0,p0)", "(p0,p1)", "(p1,p0)", "(p1,p1)"}
    assert g.level(1) == Relation.diagonal(g.ground)
    one = preset("line", 1)
    p = product(l2, one)
    assert check_asymorphism({"p0": "(p0,p0)", "p1": "(p1,p0)"}, l2, p).ok


def test_metric_validation():
    with pytest.raises(ValueError):
        FiniteMetric.from_rows(["a", "b", "c"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]]).validate()
    with pytest.raises(ValueError):
        FiniteMetric.from_rows(["a", "b"], [[0, 1], [2, 0]]).validate()


def test_coarse_map_tables(line4, line8):
    ident = check_coarse_map(identity_map(line4), line4, line4)
    assert ident.levels() == {r: E(r) for r in range(1, 5)}
    const = check_coarse_map({x: "p0" for x in line4.ground}, line4, line4)
    assert set(const.levels().values()) == {E(1)}
    double = check_coarse_map({f"p{i}": f"p{2 * i}" for i in range(4)}, line4, line8)
    assert double.levels()[2] == E(3)


def test_doubled_metric_asymorphism(line4):
    doubled = metric_ballean(line_metric(4).scaled(2))
    res = check_asymorphism(identity_map(line4), line4, doubled)
    assert res.ok
    assert all(res.forward.levels()[r] == E(2 * r - 1) for r in range(1, 4))


def test_asymorphism_rejects_non_bijection(line4):
    with pytest.raises(ValueError):
        check_asymorphism({x: "p0" for x in line4.ground}, line4, line4)


def test_compose_moduli_bounds_composite(line4, line8):
    f = {f"p{i}": f"p{2 * i}" for i in range(4)}
    g = {f"p{i}": f"p{i // 2}" for i in range(8)}
    rho, sigma = check_coarse_map(f, line4, line8), check_coarse_map(g, line8, line4)
    comp = {x: g[f[x]] for x in line4.ground}
    direct = check_coarse_map(comp, line4, line4)
    bound = compose_moduli(rho, sigma)
    for r in range(1, line4.L + 1):
        assert line4.entourage(direct.apply(E(r))) <= line4.entourage(bound.apply(E(r)))


def test_metric_from_scale(line4):
    m = metric_from_scale(line4)
    assert m.d[("p0", "p3")] <= 6
    assert check_asymorphism(identity_map(line4), line4, metric_ballean(m)).ok
    one = preset("line", 1)
    assert metric_from_scale(one).diameter == Fraction(0)
