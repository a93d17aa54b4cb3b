"""Asymptotic notions on lattice models, splitting, bornology, metrizability.

Lattice models are ``Z^d`` with the sup-metric and entourages
``eps_r = {(x, y) : |x - y|_inf < r}``.  Statements such as "``eps_r[A] \\ U``
is bounded for every ``r``" cannot be settled by enumeration, so every check
here runs inside a window ``[-W, W]^d`` and only claims what the window
shows:

* a set counts as bounded in the window when it stays inside the inner box
  ``[-W//2, W//2]^d`` (witness: a ball around the origin containing it);
* otherwise the point of largest norm is reported as a witness that the set
  reaches the outer half of the window.

A "holds" verdict may flip on a bigger window; a failure on a set that
keeps reaching the window edge persists.  Radii larger than ``W//4`` are
refused rather than answered.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import ndimage

from .ballean import (EffectiveEntourage, FiniteMetric, GradedBallean,
                      check_asymorphism, identity_map, metric_ballean,
                      metric_from_scale, restrict)
from .membership import ideal_membership, random_certificate, random_rational
from .relations import point_key, sort_points
from .vectors import (Decomposition, DiffTerm, FreeVector, IdealBaseParams,
                      evaluate, verify_decomposition)

E = EffectiveEntourage


class WindowError(ValueError):
    """The requested radius is too large for the window to say anything."""


def _coords(R: int, d: int):
    ax = np.arange(-R, R + 1)
    return np.meshgrid(*([ax] * d), indexing="ij")


def _as_point(p, d: int) -> tuple:
    if isinstance(p, (int, np.integer)):
        p = (int(p),)
    p = tuple(int(c) for c in p)
    if len(p) != d:
        raise ValueError(f"point {p} is not in Z^{d}")
    return p


class SubsetSpec:
    """A decidable subset of ``Z^d``."""

    def mask(self, R: int, d: int) -> np.ndarray:
        raise NotImplementedError

    def contains(self, p, d: int = 1) -> bool:
        p = _as_point(p, d)
        R = max(abs(c) for c in p)
        return bool(self.mask(R, d)[tuple(c + R for c in p)])

    def __and__(self, other):
        return And((self, other))

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Finite(SubsetSpec):
    points: tuple

    def mask(self, R, d):
        m = np.zeros((2 * R + 1,) * d, dtype=bool)
        for p in self.points:
            p = _as_point(p, d)
            if max(abs(c) for c in p) <= R:
                m[tuple(c + R for c in p)] = True
        return m


@dataclass(frozen=True)
class Halfspace(SubsetSpec):
    """``normal . x >= offset`` (``>`` when strict)."""
    normal: tuple
    offset: int = 0
    strict: bool = False

    def mask(self, R, d):
        grids = _coords(R, d)
        val = sum(c * g for c, g in zip(self.normal, grids))
        return val > self.offset if self.strict else val >= self.offset


@dataclass(frozen=True)
class Parity(SubsetSpec):
    """``x[coord] = residue (mod modulus)``."""
    modulus: int = 2
    residue: int = 0
    coord: int = 0

    def mask(self, R, d):
        g = _coords(R, d)[self.coord]
        return np.mod(g, self.modulus) == self.residue % self.modulus


@dataclass(frozen=True)
class Everything(SubsetSpec):
    def mask(self, R, d):
        return np.ones((2 * R + 1,) * d, dtype=bool)


@dataclass(frozen=True)
class And(SubsetSpec):
    parts: tuple

    def mask(self, R, d):
        m = np.ones((2 * R + 1,) * d, dtype=bool)
        for s in self.parts:
            m &= s.mask(R, d)
        return m


@dataclass(frozen=True)
class Not(SubsetSpec):
    inner: SubsetSpec

    def mask(self, R, d):
        return ~self.inner.mask(R, d)


def _distance_to(spec: SubsetSpec, R: int, d: int) -> np.ndarray:
    """Sup-distance to ``spec`` for points of ``[-R, R]^d``, looking as far as ``2R``."""
    big = spec.mask(2 * R, d)
    if not big.any():
        out = np.full(big.shape, np.inf)
    else:
        out = ndimage.distance_transform_cdt(~big, metric="chessboard").astype(float)
    sl = tuple(slice(R, 3 * R + 1) for _ in range(d))
    return out[sl]


@dataclass(frozen=True)
class Separator(SubsetSpec):
    """``{x : d(x, A) <= d(x, B)}`` (side "A") or its complement (side "B")."""
    A: SubsetSpec
    B: SubsetSpec
    side: str = "A"

    def mask(self, R, d):
        da = _distance_to(self.A, R, d)
        db = _distance_to(self.B, R, d)
        m = da <= db
        return m if self.side == "A" else ~m


# ---------------------------------------------------------------- window model

def lattice_point(p: tuple) -> str:
    return "(" + ",".join(str(c) for c in p) + ")"


@dataclass(frozen=True)
class WindowBallean:
    dim: int = 1
    W: int = 50

    def __post_init__(self):
        if self.W < 1 or self.dim < 1:
            raise ValueError("window and dimension must be >= 1")

    @property
    def max_radius(self) -> int:
        return max(1, self.W // 4)

    @property
    def inner(self) -> int:
        return self.W // 2

    def check_radius(self, r: int):
        if r < 1:
            raise WindowError("radii start at 1")
        if r > self.max_radius:
            raise WindowError(f"radius {r} too large for window {self.W} (max {self.max_radius})")

    def ball_of(self, spec: SubsetSpec, r: int) -> np.ndarray:
        """``eps_r[spec]`` on the window, computed without edge loss."""
        R = self.W + r
        m = spec.mask(R, self.dim)
        if r > 1:
            m = ndimage.binary_dilation(m, structure=np.ones((3,) * self.dim, dtype=bool),
                                        iterations=r - 1)
        sl = tuple(slice(r, r + 2 * self.W + 1) for _ in range(self.dim))
        return m[sl]

    def metric(self, W: int | None = None) -> FiniteMetric:
        W = self.W if W is None else W
        pts = [tuple(int(c) for c in p) for p in np.ndindex(*((2 * W + 1,) * self.dim))]
        pts = [tuple(c - W for c in p) for p in pts]
        names = {lattice_point(p): p for p in pts}
        return FiniteMetric.from_function(
            names, lambda x, y: max(abs(a - b) for a, b in zip(names[x], names[y])))

    def as_graded(self, W: int | None = None) -> GradedBallean:
        return metric_ballean(self.metric(W))


@dataclass(frozen=True)
class RadiusResult:
    r: int
    bounded: bool
    witness: tuple  # (center, radius) ball when bounded, far point otherwise
    size: int


HOLDS = "holds-up-to-window"
FAILS = "fails-with-witness"
BOUNDED = "bounded-with-witness"


@dataclass(frozen=True)
class Verdict:
    status: str
    window: int
    radii: tuple
    per_radius: tuple
    witness: tuple | None = None
    failing_radius: int | None = None
    note: str = ("holds-up-to-window may change on a larger window; "
                 "fails-with-witness persists while the set keeps reaching the window edge")

    @property
    def holds(self) -> bool:
        return self.status in (HOLDS, BOUNDED)


def _bounded_in_window(mask: np.ndarray, b: WindowBallean) -> tuple[bool, tuple]:
    idx = np.argwhere(mask)
    if idx.size == 0:
        return True, ((0,) * b.dim, 1)
    pts = idx - b.W
    norms = np.abs(pts).max(axis=1)
    top = int(norms.max())
    if top <= b.inner:
        return True, ((0,) * b.dim, top + 1)
    far = pts[norms == top]
    far = sorted(tuple(int(c) for c in p) for p in far)
    return False, far[0]


def _run(b: WindowBallean, radii, make_mask) -> Verdict:
    radii = tuple(radii)
    for r in radii:
        b.check_radius(r)
    res = []
    for r in radii:
        m = make_mask(r)
        ok, w = _bounded_in_window(m, b)
        res.append(RadiusResult(r, ok, w, int(m.sum())))
    bad = next((x for x in res if not x.bounded), None)
    if bad is None:
        return Verdict(HOLDS, b.W, radii, tuple(res))
    return Verdict(FAILS, b.W, radii, tuple(res), bad.witness, bad.r)


def asymptotic_neighborhood(A: SubsetSpec, U: SubsetSpec, b: WindowBallean, radii) -> Verdict:
    """Per radius: is ``eps_r[A] \\ U`` bounded inside the window?"""
    Um = U.mask(b.W, b.dim)
    return _run(b, radii, lambda r: b.ball_of(A, r) & ~Um)


def asymptotically_disjoint(A: SubsetSpec, B: SubsetSpec, b: WindowBallean, radii) -> Verdict:
    """Per radius: is ``eps_r[A] & eps_r[B]`` bounded inside the window?"""
    return _run(b, radii, lambda r: b.ball_of(A, r) & b.ball_of(B, r))


def is_bounded_window(S: SubsetSpec, b: WindowBallean) -> Verdict:
    ok, w = _bounded_in_window(S.mask(b.W, b.dim), b)
    return Verdict(BOUNDED if ok else FAILS, b.W, (), (), w)


@dataclass(frozen=True)
class SeparatorResult:
    ok: bool
    U_A: SubsetSpec | None
    U_B: SubsetSpec | None
    disjointness: Verdict
    nbhd_A: Verdict | None = None
    nbhd_B: Verdict | None = None
    overlap: int | None = None


def metric_separator(A: SubsetSpec, B: SubsetSpec, b: WindowBallean, radii=None) -> SeparatorResult:
    """``U_A = {d(., A) <= d(., B)}``, ``U_B`` its complement; both validated.

    Refuses (``ok=False``) when ``A`` and ``B`` are not asymptotically
    disjoint at the tested radii; the disjointness verdict carries the
    witness.
    """
    radii = tuple(range(1, b.max_radius + 1)) if radii is None else tuple(radii)
    dis = asymptotically_disjoint(A, B, b, radii)
    if not dis.holds:
        return SeparatorResult(False, None, None, dis)
    UA, UB = Separator(A, B, "A"), Separator(A, B, "B")
    na = asymptotic_neighborhood(A, UA, b, radii)
    nb = asymptotic_neighborhood(B, UB, b, radii)
    overlap = int((UA.mask(b.W, b.dim) & UB.mask(b.W, b.dim)).sum())
    return SeparatorResult(na.holds and nb.holds and overlap == 0, UA, UB, dis, na, nb, overlap)


# ---------------------------------------------------------------- splitting

@dataclass(frozen=True)
class SplitParams:
    """Where the two sides of the splitting send a base set."""
    box: int                 # L-side box [-box, box] a
    params: IdealBaseParams  # the other side


class SplitAsymorphism:
    """``V(X) ~ L x V(Y)`` with ``L = Q a`` and ``Y = X \\ {a}``.

    Forward sends ``c_a a + w`` to ``(c_a, w)``.  The parameter maps come
    from rewriting certificates: every ``a`` inside a pair is replaced by its
    nearest point ``a*`` of ``Y`` (paying one extra power), the leftover
    ``a*``-mass is routed to ``z_Y``, and ``z`` is routed to ``z_Y`` as well.
    """

    def __init__(self, b: GradedBallean, a: str, z: str | None = None):
        if b.size < 2:
            raise ValueError("splitting needs at least two points")
        if a not in b.ground:
            raise KeyError(f"unknown point {a!r}")
        self.b = b
        self.a = a
        self.Y = tuple(x for x in b.ground if x != a)
        self.bY = restrict(b, self.Y)
        self.zY = self.Y[0]
        self.z = b.ground[0] if z is None else z
        self.a_star = min(self.Y, key=lambda y: (b.least_level(a, y), point_key(y)))
        self._levels = {}

    def _lvl(self, x, y) -> int:
        return 1 if x == y else self.b.least_level(x, y)

    def forward(self, v: FreeVector) -> tuple[Fraction, FreeVector]:
        v = FreeVector(v)
        c = v[self.a]
        return c, v - FreeVector.basis(self.a) * c

    def backward(self, t, w: FreeVector) -> FreeVector:
        if self.a in w:
            raise ValueError("the Y-component must not involve a")
        return FreeVector(w) + FreeVector.basis(self.a) * Fraction(t)

    def _y_level(self, e: EffectiveEntourage, floor: int) -> int:
        # walks in eps^k may pass through a, so restriction does not commute
        # with powers; take the least Y-level that absorbs every rewritten pair
        key = (e, floor)
        if key not in self._levels:
            sub = {x: (self.a_star if x == self.a else x) for x in self.b.ground}
            need = {(sub[x], sub[y]) for x, y in self.b.entourage(e).pairs}
            self._levels[key] = next(s for s in range(floor, self.bY.L + 1)
                                     if need <= self.bY.power(s, e.power + 1).pairs)
        return self._levels[key]

    def forward_params(self, p: IdealBaseParams) -> SplitParams:
        n, e = p.n, p.entourage
        floor = max(min(e.level, self.bY.L), self._lvl(self.a_star, self.zY),
                    self._lvl(p.z, self.zY) if p.z != self.a else 1)
        R = self._y_level(e, floor)
        nn = max(n * (n + 1), n + 2)
        return SplitParams(n * (n + 1), IdealBaseParams(nn, E(R, e.power + 1), self.zY))

    def backward_params(self, box: int, p: IdealBaseParams) -> IdealBaseParams:
        e = p.entourage
        R = max(e.level, self._lvl(self.a, self.z), self._lvl(p.z, self.z))
        return IdealBaseParams(max(p.n + 2, box + p.n), E(R, e.power), self.z)

    def forward_certificate(self, d: Decomposition) -> tuple[Fraction, Decomposition]:
        a, s, zY = self.a, self.a_star, self.zY
        sp = self.forward_params(d.params)
        alpha = Fraction(0)
        terms = []
        for t in d.terms:
            alpha += (t.coeff if t.x == a else 0) - (t.coeff if t.y == a else 0)
            x = s if t.x == a else t.x
            y = s if t.y == a else t.y
            terms.append(DiffTerm(x, y, t.coeff))
        z, mu = d.params.z, d.z_coeff
        c_a = alpha + (mu if z == a else 0)
        zc = -alpha
        if alpha:
            terms.append(DiffTerm(s, zY, -alpha))
        if z != a and mu:
            terms.append(DiffTerm(z, zY, mu))
            zc += mu
        return c_a, Decomposition(tuple(terms), zc, sp.params)

    def backward_certificate(self, t, d: Decomposition, box: int) -> Decomposition:
        t = Fraction(t)
        z = self.z
        params = self.backward_params(box, d.params)
        terms = list(d.terms)
        zc = Fraction(0)
        if t:
            if self.a != z:
                terms.append(DiffTerm(self.a, z, t))
            zc += t
        if d.z_coeff:
            if d.params.z != z:
                terms.append(DiffTerm(d.params.z, z, d.z_coeff))
            zc += d.z_coeff
        return Decomposition(tuple(terms), zc, params)


@dataclass
class SplitReport:
    a: str
    round_trips: int = 0
    round_trip_failures: list = field(default_factory=list)
    forward_checked: int = 0
    backward_checked: int = 0
    searched: int = 0
    membership_failures: list = field(default_factory=list)
    param_maps: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.round_trip_failures and not self.membership_failures


def random_vector(points: Sequence[str], rng: random.Random, max_den: int = 4, span: int = 5) -> FreeVector:
    k = rng.randint(0, len(points))
    sup = rng.sample(list(points), k)
    return FreeVector({x: random_rational(rng, span, max_den) for x in sup})


def split_asymorphism(b: GradedBallean, a: str, vectors: int = 200, certificates: int = 50,
                      seed: int = 0, n_range=range(1, 4), max_power: int = 2,
                      search_checks: int = 5, z: str | None = None):
    """Build the splitting for ``a`` and validate it on samples."""
    sp = SplitAsymorphism(b, a, z)
    rng = random.Random(seed)
    rep = SplitReport(a)
    for _ in range(vectors):
        v = random_vector(b.ground, rng)
        c, w = sp.forward(v)
        rep.round_trips += 1
        if sp.backward(c, w) != v or a in w:
            rep.round_trip_failures.append(("backward o forward", v))
        t = random_rational(rng, 5)
        w = random_vector(sp.Y, rng)
        if sp.forward(sp.backward(t, w)) != (t, w):
            rep.round_trip_failures.append(("forward o backward", (t, w)))

    for i in range(certificates):
        n = rng.choice(list(n_range))
        r = rng.randint(1, b.L)
        k = rng.randint(1, max_power)
        p = IdealBaseParams(n, E(r, k), sp.z)
        d = random_certificate(b, p, rng)
        v = evaluate(d)
        fp = sp.forward_params(p)
        rep.param_maps.setdefault(("forward", n, r, k), (fp.box, fp.params))
        c, img = sp.forward_certificate(d)
        rep.forward_checked += 1
        c2, w = sp.forward(v)
        if c != c2 or abs(c) > fp.box or evaluate(img) != w or not verify_decomposition(img, sp.bY):
            rep.membership_failures.append(("forward", d))
        elif i < search_checks and fp.params.n <= 3 and ideal_membership(w, fp.params, sp.bY) is None:
            rep.membership_failures.append(("forward-search", d))
        if i < search_checks:
            rep.searched += 1

        nY = rng.choice(list(n_range))
        rY = rng.randint(1, sp.bY.L)
        kY = rng.randint(1, max_power)
        box = rng.randint(1, 3)
        pY = IdealBaseParams(nY, E(rY, kY), sp.zY)
        dY = random_certificate(sp.bY, pY, rng)
        t = random_rational(rng, box)
        back = sp.backward_certificate(t, dY, box)
        rep.param_maps.setdefault(("backward", box, nY, rY, kY), back.params)
        rep.backward_checked += 1
        if evaluate(back) != sp.backward(t, evaluate(dY)) or not verify_decomposition(back, b):
            rep.membership_failures.append(("backward", (t, dY)))
    return sp, rep


# ---------------------------------------------------------------- bornology / metrizability

@dataclass(frozen=True)
class BornologyReport:
    kind: str             # "finite" or "lattice"
    cof: object           # 1 or "countable"
    base: tuple


def bornology_cof(b) -> BornologyReport:
    if isinstance(b, GradedBallean):
        x = b.ground[0]
        return BornologyReport("finite", 1, ((x, E(b.L, 1), sort_points(b.level(b.L).image(x))),))
    if isinstance(b, WindowBallean):
        chain = tuple(((0,) * b.dim, E(r, 1), f"[-{r - 1},{r - 1}]^{b.dim}")
                      for r in range(1, b.max_radius + 1))
        return BornologyReport("lattice", "countable", chain)
    raise TypeError(f"no bornology for {type(b).__name__}")


@dataclass
class MetrizabilityReport:
    metrizable: bool
    kind: str
    metric: FiniteMetric | None
    asymorphism_ok: bool
    chain_checked: int = 0
    chain_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.metrizable and self.asymorphism_ok and not self.chain_failures


def chain_level(b: GradedBallean, e: EffectiveEntourage) -> int:
    """Least level ``r'`` with ``eps_r^k`` inside ``eps_r'``."""
    rel = b.entourage(e)
    return next(s for s in range(1, b.L + 1) if rel <= b.level(s))


def metrizability_check(b, samples: int = 50, seed: int = 0, n_max: int = 3,
                        lattice_window: int = 3) -> MetrizabilityReport:
    """Countable base -> metric; the realised metric is checked, not assumed.

    For a finite presentation the chain metric is built and the identity is
    checked to be an asymorphism.  Sampled ideal members at ``(n, (r, k), z)``
    are then shown to lie in the countable family ``B(n, (r', 1), z)``.  A
    lattice model is handled through a finite window of it.
    """
    rng = random.Random(seed)
    if isinstance(b, WindowBallean):
        g = b.as_graded(min(lattice_window, b.W))
        kind = "lattice"
    else:
        g = b
        kind = "finite"
    m = metric_from_scale(g)
    asym = check_asymorphism(identity_map(g), g, metric_ballean(m))
    rep = MetrizabilityReport(True, kind, m, asym.ok)
    z = g.ground[len(g.ground) // 2] if kind == "lattice" else g.ground[0]
    for _ in range(samples):
        n = rng.randint(1, n_max)
        r = rng.randint(1, g.L)
        k = rng.randint(1, 2)
        d = random_certificate(g, IdealBaseParams(n, E(r, k), z), rng)
        if kind == "lattice":
            # sup-metric: eps_r^k = eps_{k(r-1)+1} on a box
            r2 = min(k * (r - 1) + 1, g.L)
        else:
            r2 = chain_level(g, E(r, k))
        rep.chain_checked += 1
        if not verify_decomposition(d.with_params(IdealBaseParams(n, E(r2, 1), z)), g):
            rep.chain_failures.append(((n, r, k), d))
    return rep
