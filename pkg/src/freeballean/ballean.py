"""Finitely presented balleans.

A :class:`GradedBallean` is a finite ground set together with a monotone
scale of reflexive, symmetric relations ``levels[0] <= levels[1] <= ...``
whose last member is the full square.  The coarse structure it presents is
generated by the powers ``eps_r^k``; we never materialise anything beyond
those powers.

Levels and powers are 1-based throughout, matching how radii are written:
``EffectiveEntourage(2, 3)`` is the third power of the second level.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _cartesian
from typing import Iterable, Mapping

from .relations import (Relation, compose, inverse, pair_key, point_key,
                        sort_points, GroundMismatch)


class NormalizationWarning(UserWarning):
    """Emitted when a presentation had to be symmetrised or given a diagonal."""


class MetricError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class EffectiveEntourage:
    level: int
    power: int = 1

    def __post_init__(self):
        if self.level < 1 or self.power < 1:
            raise ValueError(f"entourage indices start at 1, got {self.level}, {self.power}")

    def __str__(self):
        return f"({self.level},{self.power})"


E = EffectiveEntourage


@dataclass(frozen=True, eq=False)
class GradedBallean:
    ground: tuple[str, ...]
    levels: tuple[Relation, ...]
    _powers: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.ground:
            raise ValueError("a ballean needs at least one point")
        if not self.levels:
            raise ValueError("a ballean needs at least one level")

    def __eq__(self, other):
        if not isinstance(other, GradedBallean):
            return NotImplemented
        return self.ground == other.ground and self.levels == other.levels

    def __hash__(self):
        return hash((self.ground, self.levels))

    @classmethod
    def from_pairs(cls, points: Iterable[str], level_pairs: Iterable[Iterable],
                   normalize: bool = True) -> "GradedBallean":
        """Build from raw pair lists, one list per level.

        With ``normalize`` each level is replaced by ``eps | eps^-1 | diag``
        (a :class:`NormalizationWarning` says so when that changed anything).
        Monotonicity and fullness of the top level are left for
        :func:`check_axioms` to judge.
        """
        ground = sort_points(points)
        levels = []
        touched = []
        for i, pairs in enumerate(level_pairs, start=1):
            rel = Relation.of(ground, (tuple(p) for p in pairs))
            if normalize:
                sym = Relation(ground, rel.pairs | inverse(rel).pairs
                               | Relation.diagonal(ground).pairs)
                if sym != rel:
                    touched.append(i)
                rel = sym
            levels.append(rel)
        if touched:
            warnings.warn(f"levels {touched} were symmetrised / given the diagonal",
                          NormalizationWarning, stacklevel=2)
        return cls(ground, tuple(levels))

    @property
    def L(self) -> int:
        return len(self.levels)

    @property
    def size(self) -> int:
        return len(self.ground)

    def level(self, r: int) -> Relation:
        if not 1 <= r <= self.L:
            raise IndexError(f"level {r} out of range 1..{self.L}")
        return self.levels[r - 1]

    def power(self, r: int, k: int = 1) -> Relation:
        """``eps_r^k``, memoised per instance."""
        if k < 1:
            raise IndexError(f"power {k} must be >= 1")
        base = self.level(r)
        key = (r, k)
        hit = self._powers.get(key)
        if hit is not None:
            return hit
        rel = base if k == 1 else compose(self.power(r, k - 1), base)
        self._powers[key] = rel
        return rel

    def entourage(self, e: EffectiveEntourage) -> Relation:
        return self.power(e.level, e.power)

    def max_power(self) -> int:
        # on n points eps^(n-1) is already the transitive closure
        return max(1, self.size - 1)

    def contains_pair(self, pair, e: EffectiveEntourage) -> bool:
        return tuple(pair) in self.entourage(e).pairs

    def least_level(self, x: str, y: str) -> int | None:
        for r in range(1, self.L + 1):
            if (x, y) in self.levels[r - 1].pairs:
                return r
        return None


# ---------------------------------------------------------------- balls

def ball(b: GradedBallean, x: str, e: EffectiveEntourage) -> frozenset:
    if x not in b.ground:
        raise KeyError(f"unknown point {x!r}")
    return b.entourage(e).image(x)


def ball_of_set(b: GradedBallean, xs: Iterable[str], e: EffectiveEntourage) -> frozenset:
    xs = set(xs)
    unknown = xs - set(b.ground)
    if unknown:
        raise KeyError(f"unknown points {sorted(unknown, key=point_key)}")
    return b.entourage(e).image_of_set(xs)


@dataclass(frozen=True)
class BoundedWitness:
    center: str
    entourage: EffectiveEntourage


def is_bounded(b: GradedBallean, ys: Iterable[str]) -> BoundedWitness | None:
    """Least ``(level, power, point)`` with ``ys`` inside one ball, or None.

    The empty set is bounded by convention, witnessed by the first point at
    ``(1, 1)``.
    """
    ys = set(ys)
    unknown = ys - set(b.ground)
    if unknown:
        raise KeyError(f"unknown points {sorted(unknown, key=point_key)}")
    if not ys:
        return BoundedWitness(b.ground[0], E(1, 1))
    for r in range(1, b.L + 1):
        for k in range(1, b.max_power() + 1):
            rel = b.power(r, k)
            for x in b.ground:
                if ys <= rel.image(x):
                    return BoundedWitness(x, E(r, k))
    return None


# ---------------------------------------------------------------- axioms

@dataclass(frozen=True)
class AxiomCheck:
    name: str
    ok: bool
    level: int | None = None
    witness: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def first_failure(self) -> AxiomCheck | None:
        return next((c for c in self.checks if not c.ok), None)

    def failed(self) -> set[str]:
        return {c.name for c in self.checks if not c.ok}


AXIOMS = ("ground", "diagonal", "symmetry", "monotonicity", "composition", "connectedness")


def check_axioms(b: GradedBallean) -> AxiomReport:
    """Check a presentation level by level.

    Composition closure is read on the ``(level, power)`` base: the product
    of two levels must sit inside the square of the larger one.  That holds
    exactly when the scale is monotone, so a monotonicity break usually
    shows up twice.
    """
    checks = []
    ground = b.ground
    gset = set(ground)

    bad = None
    for r, rel in enumerate(b.levels, start=1):
        if rel.ground != ground:
            stray = next((p for p in rel.sorted_pairs() if p[0] not in gset or p[1] not in gset), None)
            bad = (r, stray)
            break
    checks.append(AxiomCheck("ground", bad is None, *(bad or (None, None)),
                             detail="" if bad is None else "level uses a different ground set"))
    if bad is not None:
        return AxiomReport(tuple(checks))

    def first(pred):
        for r, rel in enumerate(b.levels, start=1):
            w = pred(r, rel)
            if w is not None:
                return r, w
        return None

    diag = first(lambda r, rel: next(((x, x) for x in ground if (x, x) not in rel.pairs), None))
    checks.append(AxiomCheck("diagonal", diag is None, *(diag or (None, None))))

    sym = first(lambda r, rel: next(((y, x) for x, y in rel.sorted_pairs()
                                     if (y, x) not in rel.pairs), None))
    checks.append(AxiomCheck("symmetry", sym is None, *(sym or (None, None))))

    mono = None
    for r in range(1, b.L):
        lo, hi = b.levels[r - 1], b.levels[r]
        miss = next((p for p in lo.sorted_pairs() if p not in hi.pairs), None)
        if miss is not None:
            mono = (r, miss)
            break
    checks.append(AxiomCheck("monotonicity", mono is None, *(mono or (None, None)),
                             detail="" if mono is None else f"pair in level {mono[0]} missing from level {mono[0] + 1}"))

    comp = None
    for r in range(1, b.L + 1):
        for s in range(1, b.L + 1):
            m = max(r, s)
            prod = compose(b.levels[r - 1], b.levels[s - 1])
            sq = compose(b.levels[m - 1], b.levels[m - 1])
            miss = next((p for p in prod.sorted_pairs() if p not in sq.pairs), None)
            if miss is not None:
                comp = ((r, s), miss)
                break
        if comp:
            break
    checks.append(AxiomCheck("composition", comp is None,
                             comp[0][0] if comp else None, comp[1] if comp else None,
                             detail="" if comp is None else f"eps_{comp[0][0]} o eps_{comp[0][1]} escapes eps_max^2"))

    top = b.levels[-1]
    conn = next(((x, y) for x in ground for y in ground if (x, y) not in top.pairs), None)
    checks.append(AxiomCheck("connectedness", conn is None, b.L if conn else None, conn))
    return AxiomReport(tuple(checks))


def require_valid(b: GradedBallean) -> GradedBallean:
    rep = check_axioms(b)
    if not rep.ok:
        f = rep.first_failure
        raise ValueError(f"invalid presentation: {f.name} fails at level {f.level}, witness {f.witness}")
    return b


# ---------------------------------------------------------------- constructions

def restrict(b: GradedBallean, ys: Iterable[str]) -> GradedBallean:
    """Subballean on ``ys``: every level intersected with ``ys x ys``."""
    ys = sort_points(ys)
    if not ys:
        raise ValueError("cannot restrict to the empty set")
    unknown = set(ys) - set(b.ground)
    if unknown:
        raise KeyError(f"unknown points {sorted(unknown, key=point_key)}")
    levels = [rel.restrict(ys) for rel in b.levels]
    levels[-1] = Relation.full(ys)
    return GradedBallean(ys, tuple(levels))


def product_point(x1: str, x2: str) -> str:
    return f"({x1},{x2})"


def product(b1: GradedBallean, b2: GradedBallean) -> GradedBallean:
    """Product with levels aligned by index; the shorter scale repeats its top."""
    L = max(b1.L, b2.L)
    ground = [product_point(x1, x2) for x1 in b1.ground for x2 in b2.ground]
    levels = []
    for r in range(1, L + 1):
        a = b1.level(min(r, b1.L))
        c = b2.level(min(r, b2.L))
        pairs = [(product_point(x1, x2), product_point(y1, y2))
                 for (x1, y1) in a.pairs for (x2, y2) in c.pairs]
        levels.append(Relation.of(ground, pairs))
    return GradedBallean(sort_points(ground), tuple(levels))


@dataclass(frozen=True)
class FiniteMetric:
    ground: tuple[str, ...]
    d: Mapping  # (x, y) -> Fraction, all ordered pairs

    @classmethod
    def from_rows(cls, points: Iterable[str], rows) -> "FiniteMetric":
        points = list(points)
        if len(rows) != len(points) or any(len(r) != len(points) for r in rows):
            raise MetricError("distance matrix must be square and match the point list")
        d = {(x, y): Fraction(rows[i][j])
             for i, x in enumerate(points) for j, y in enumerate(points)}
        m = cls(sort_points(points), d)
        m.validate()
        return m

    @classmethod
    def from_function(cls, points: Iterable[str], dist) -> "FiniteMetric":
        points = sort_points(points)
        m = cls(points, {(x, y): Fraction(dist(x, y)) for x in points for y in points})
        m.validate()
        return m

    def __call__(self, x: str, y: str) -> Fraction:
        return self.d[(x, y)]

    def validate(self):
        g = self.ground
        for x in g:
            if self.d[(x, x)] != 0:
                raise MetricError(f"d({x},{x}) != 0")
        for x in g:
            for y in g:
                if self.d[(x, y)] < 0:
                    raise MetricError(f"d({x},{y}) < 0")
                if self.d[(x, y)] != self.d[(y, x)]:
                    raise MetricError(f"d({x},{y}) != d({y},{x})")
                if x != y and self.d[(x, y)] == 0:
                    raise MetricError(f"d({x},{y}) = 0 for distinct points")
        for x in g:
            for y in g:
                for z in g:
                    if self.d[(x, z)] > self.d[(x, y)] + self.d[(y, z)]:
                        raise MetricError(f"triangle inequality fails on {x},{y},{z}")

    @property
    def diameter(self) -> Fraction:
        return max(self.d.values())

    def scaled(self, c) -> "FiniteMetric":
        c = Fraction(c)
        return FiniteMetric(self.ground, {k: c * v for k, v in self.d.items()})


def metric_ballean(m: FiniteMetric) -> GradedBallean:
    """Levels ``{d < r}`` for ``r = 1 .. ceil(diam) + 1``; the last one is full."""
    top = math.ceil(m.diameter) + 1
    levels = []
    for r in range(1, top + 1):
        levels.append(Relation(m.ground, frozenset(p for p, v in m.d.items() if v < r)))
    return GradedBallean(m.ground, tuple(levels))


def line_metric(n: int, prefix: str = "p", step=1) -> FiniteMetric:
    pts = [f"{prefix}{i}" for i in range(n)]
    idx = {p: i for i, p in enumerate(pts)}
    return FiniteMetric.from_function(pts, lambda x, y: step * abs(idx[x] - idx[y]))


def cycle_metric(n: int, prefix: str = "p") -> FiniteMetric:
    pts = [f"{prefix}{i}" for i in range(n)]
    idx = {p: i for i, p in enumerate(pts)}

    def dist(x, y):
        k = abs(idx[x] - idx[y])
        return min(k, n - k)
    return FiniteMetric.from_function(pts, dist)


def preset(kind: str, size: int) -> GradedBallean:
    """``line``, ``cycle`` (metric balleans) or ``grid`` (product of two lines)."""
    if size < 1:
        raise ValueError("preset size must be >= 1")
    if kind == "line":
        return metric_ballean(line_metric(size))
    if kind == "cycle":
        return metric_ballean(cycle_metric(size))
    if kind == "grid":
        line = metric_ballean(line_metric(size))
        return product(line, line)
    raise ValueError(f"unknown preset {kind!r}")


# ---------------------------------------------------------------- coarse maps

class NotCoarse(Exception):
    """No target entourage absorbs the displacement of ``level`` at ``point``."""

    def __init__(self, point, level):
        super().__init__(f"no target entourage absorbs level {level} at {point}")
        self.point = point
        self.level = level


@dataclass(frozen=True)
class ModulusWitness:
    """Maps each source level ``(r, 1)`` to a target entourage.

    Powers of a source level are handled by :meth:`apply`:
    ``eps_r^k`` goes to ``rho(r)`` raised to the ``k``-th power.
    """
    table: Mapping

    def __getitem__(self, e: EffectiveEntourage) -> EffectiveEntourage:
        return self.apply(e)

    def apply(self, e: EffectiveEntourage) -> EffectiveEntourage:
        t = self.table[E(e.level, 1)]
        return E(t.level, t.power * e.power)

    def levels(self) -> dict[int, EffectiveEntourage]:
        return {k.level: v for k, v in sorted(self.table.items())}


def _check_map(f: Mapping, b: GradedBallean, b2: GradedBallean):
    missing = [x for x in b.ground if x not in f]
    if missing:
        raise ValueError(f"map is not total: missing {missing}")
    outside = sorted({f[x] for x in b.ground} - set(b2.ground), key=point_key)
    if outside:
        raise ValueError(f"map leaves the target ground set: {outside}")


def check_coarse_map(f: Mapping, b: GradedBallean, b2: GradedBallean) -> ModulusWitness:
    """Least target entourage for every source level.

    "Least" prefers the smallest power and then the smallest level, so on a
    finite presentation every entry has power 1.  Raises :class:`NotCoarse`
    if some level has no witness (impossible when the target top is full).
    """
    _check_map(f, b, b2)
    table = {}
    for r in range(1, b.L + 1):
        moved = {(f[x], f[y]) for x, y in b.level(r).pairs}
        hit = None
        for k in range(1, b2.max_power() + 1):
            for s in range(1, b2.L + 1):
                if moved <= b2.power(s, k).pairs:
                    hit = E(s, k)
                    break
            if hit:
                break
        if hit is None:
            x = next(x for x, y in b.level(r).sorted_pairs()
                     if (f[x], f[y]) not in b2.power(b2.L, b2.max_power()).pairs)
            raise NotCoarse(x, r)
        table[E(r, 1)] = hit
    return ModulusWitness(table)


@dataclass(frozen=True)
class AsymorphismResult:
    forward: ModulusWitness | None
    backward: ModulusWitness | None
    failure: str | None = None   # "forward" / "backward"
    counterexample: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.failure is None


def check_asymorphism(f: Mapping, b: GradedBallean, b2: GradedBallean) -> AsymorphismResult:
    _check_map(f, b, b2)
    if len({f[x] for x in b.ground}) != b.size or b.size != b2.size:
        raise ValueError("map is not a bijection")
    g = {f[x]: x for x in b.ground}
    try:
        fw = check_coarse_map(f, b, b2)
    except NotCoarse as exc:
        return AsymorphismResult(None, None, "forward", (exc.point, exc.level))
    try:
        bw = check_coarse_map(g, b2, b)
    except NotCoarse as exc:
        return AsymorphismResult(fw, None, "backward", (exc.point, exc.level))
    return AsymorphismResult(fw, bw)


def compose_moduli(rho: ModulusWitness, sigma: ModulusWitness) -> ModulusWitness:
    """Modulus of ``g o f`` bounded by ``sigma o rho``."""
    return ModulusWitness({k: sigma.apply(v) for k, v in rho.table.items()})


def identity_map(b: GradedBallean) -> dict:
    return {x: x for x in b.ground}


# ---------------------------------------------------------------- metrics

def metric_from_scale(b: GradedBallean) -> FiniteMetric:
    """Chain metric: shortest path where a step costs its least level."""
    g = b.ground
    INF = math.inf
    d = {(x, y): (0 if x == y else INF) for x in g for y in g}
    for x in g:
        for y in g:
            if x != y:
                w = b.least_level(x, y)
                if w is not None:
                    d[(x, y)] = w
    for m in g:
        for x in g:
            dxm = d[(x, m)]
            if dxm == INF:
                continue
            for y in g:
                alt = dxm + d[(m, y)]
                if alt < d[(x, y)]:
                    d[(x, y)] = alt
    if any(v == INF for v in d.values()):
        raise ValueError("presentation is not connected")
    m = FiniteMetric(g, {k: Fraction(v) for k, v in d.items()})
    m.validate()
    return m
