"""Linear extensions of point maps and the universal property of V(X).

Two kinds of target are supported: another free vector ballean (given by
its :class:`GradedBallean`) and the standard space ``Q^d`` whose ideal has
the boxes ``[-m, m]^d`` as a base.

Reports keep two kinds of evidence apart: ``"arithmetic"`` means the
containment follows from term-wise bounds, ``"sampled"`` means it was
checked on random elements and no counterexample turned up.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ballean import (EffectiveEntourage, GradedBallean, ModulusWitness,
                      check_coarse_map)
from .membership import (random_certificate, random_rational,
                         search_certificate, ideal_membership)
from .relations import point_key
from .vectors import (Decomposition, DiffTerm, FreeVector, IdealBaseParams,
                      evaluate, verify_decomposition)

E = EffectiveEntourage


# ---------------------------------------------------------------- targets

@dataclass(frozen=True)
class StandardVectorBallean:
    """``Q^d`` with the box ideal ``{[-m, m]^d : m = 1, 2, ...}``."""
    dim: int
    max_m: int | None = None

    @staticmethod
    def norm(x: Sequence[Fraction]) -> Fraction:
        return max((abs(c) for c in x), default=Fraction(0))

    def box_index(self, x: Sequence[Fraction]) -> int:
        return max(1, math.ceil(self.norm(x)))

    def in_box(self, x, m) -> bool:
        return self.norm(x) <= m


def _as_std(x) -> tuple:
    return tuple(Fraction(c) for c in x)


@dataclass(frozen=True)
class LinearMap:
    """Linear map determined by the images of basis points.

    Images are either :class:`FreeVector` (free target) or tuples of
    Fractions (standard target, ``dim`` coordinates).
    """
    images: Mapping
    dim: int | None = None   # None for a free target

    @property
    def free_target(self) -> bool:
        return self.dim is None

    def __call__(self, v: FreeVector):
        missing = [x for x in v if x not in self.images]
        if missing:
            raise KeyError(f"no image for {missing}")
        if self.free_target:
            acc = FreeVector()
            for x, c in v.items():
                acc = acc + self.images[x] * c
            return acc
        out = [Fraction(0)] * self.dim
        for x, c in v.items():
            for i, t in enumerate(self.images[x]):
                out[i] += c * t
        return tuple(out)

    def point_map(self) -> dict | None:
        """The underlying point map when every image is a basis vector."""
        if not self.free_target:
            return None
        out = {}
        for x, img in self.images.items():
            if len(img) != 1 or next(iter(img.values())) != 1:
                return None
            out[x] = next(iter(img))
        return out


def linear_extension(f: Mapping, source: Iterable[str] | None = None) -> LinearMap:
    """The unique linear map agreeing with ``f`` on the basis.

    ``f`` sends points to target point ids, to :class:`FreeVector`, or to
    coordinate sequences (all images must be of one kind).
    """
    if source is not None:
        missing = sorted(set(source) - set(f), key=point_key)
        if missing:
            raise ValueError(f"point map is not total: missing {missing}")
    if not f:
        raise ValueError("empty point map")
    vals = list(f.values())
    if all(isinstance(v, str) for v in vals):
        return LinearMap({x: FreeVector.basis(y) for x, y in f.items()})
    if all(isinstance(v, FreeVector) for v in vals):
        return LinearMap(dict(f))
    coords = {x: _as_std(v) for x, v in f.items()}
    dims = {len(c) for c in coords.values()}
    if len(dims) != 1:
        raise ValueError("coordinate images have different lengths")
    return LinearMap(coords, dims.pop())


# ---------------------------------------------------------------- linear coarse

@dataclass
class LinearCoarseReport:
    table: dict                       # (n, EffectiveEntourage) -> target index
    mode: str
    samples: int
    seed: int
    counterexample: tuple | None = None
    sampled_max: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def _param_grid(b: GradedBallean, n_range, r_range, powers):
    for n in n_range:
        for r in r_range:
            if not 1 <= r <= b.L:
                continue
            for k in powers:
                yield n, E(r, k)


def check_linear_coarse(h: LinearMap, b: GradedBallean, target, z: str | None = None,
                        n_range=range(1, 4), r_range=None, powers=(1,),
                        samples: int = 50, seed: int = 0) -> LinearCoarseReport:
    """Find, for each base set ``B(n, e, z)``, a target base set containing ``h(B)``.

    ``target`` is a :class:`StandardVectorBallean` (index = box size ``m``)
    or a :class:`GradedBallean` (index = base params over the target).
    """
    z = b.ground[0] if z is None else z
    r_range = range(1, b.L + 1) if r_range is None else r_range
    grid = list(_param_grid(b, n_range, r_range, powers))
    if not grid:
        raise ValueError("empty parameter range")
    rng = random.Random(seed)
    table = {}
    if isinstance(target, StandardVectorBallean):
        if h.free_target or h.dim != target.dim:
            raise ValueError("map and box target disagree on dimension")
        report = LinearCoarseReport(table, "arithmetic", samples, seed)
        hz = StandardVectorBallean.norm(h.images[z])
        for n, e in grid:
            rel = b.entourage(e)
            spread, worst = Fraction(0), None
            for x, y in rel.sorted_pairs():
                s = StandardVectorBallean.norm(tuple(a - c for a, c in zip(h.images[x], h.images[y])))
                if s > spread:
                    spread, worst = s, (x, y)
            bound = n * n * spread + n * hz
            m = max(1, math.ceil(bound))
            if target.max_m is not None and m > target.max_m:
                # extreme generator: n copies of n (x - y) plus +-n z, whichever is larger
                terms = (DiffTerm(worst[0], worst[1], Fraction(n)),) * n if worst else ()
                cands = [evaluate(Decomposition(terms, Fraction(s * n), IdealBaseParams(n, e, z)))
                         for s in (1, -1)]
                v = max(cands, key=lambda c: StandardVectorBallean.norm(h(c)))
                report.counterexample = ((n, e), v)
                return report
            table[(n, e)] = m
            top = Fraction(0)
            for _ in range(samples):
                d = random_certificate(b, IdealBaseParams(n, e, z), rng)
                img = h(evaluate(d))
                nm = StandardVectorBallean.norm(img)
                top = max(top, nm)
                if nm > m:
                    report.counterexample = ((n, e), evaluate(d))
                    return report
            report.sampled_max[(n, e)] = top
        return report

    pm = h.point_map()
    if pm is None:
        raise ValueError("free targets need a map sending basis points to basis points")
    rho = check_coarse_map(pm, b, target)
    report = LinearCoarseReport(table, "arithmetic", samples, seed)
    for n, e in grid:
        tp = IdealBaseParams(n, rho.apply(e), pm[z])
        table[(n, e)] = tp
        for _ in range(samples):
            d = random_certificate(b, IdealBaseParams(n, e, z), rng)
            img = _push_certificate(d, pm, tp)
            if not verify_decomposition(img, target) or evaluate(img) != h(evaluate(d)):
                report.counterexample = ((n, e), evaluate(d))
                return report
    return report


def _push_certificate(d: Decomposition, f: Mapping, params: IdealBaseParams) -> Decomposition:
    return Decomposition(tuple(DiffTerm(f[t.x], f[t.y], t.coeff) for t in d.terms),
                         d.z_coeff, params)


# ---------------------------------------------------------------- extension certificate

@dataclass
class ExtensionCertificate:
    modulus: ModulusWitness
    param_map: dict        # (n, e) -> IdealBaseParams over the target
    z: str
    fz: str
    checked: int = 0
    violations: list = field(default_factory=list)
    mode: str = "arithmetic+sampled"

    @property
    def ok(self) -> bool:
        return not self.violations

    def __call__(self, p: IdealBaseParams) -> IdealBaseParams:
        return IdealBaseParams(p.n, self.modulus.apply(p.entourage), self.fz)


def extension_certificate(f: Mapping, b: GradedBallean, b2: GradedBallean,
                          modulus: ModulusWitness | None = None, z: str | None = None,
                          n_range=range(1, 4), r_range=range(1, 4),
                          samples: int = 100, seed: int = 0) -> ExtensionCertificate:
    """Parameter map ``B(n, e, z) -> B'(n, rho(e), f(z))`` for the linear extension of ``f``.

    Each sampled certificate is pushed forward term by term: a pair
    ``(x, y)`` in ``e`` becomes ``(f x, f y)``, which lies in ``rho(e)``.
    """
    if modulus is None:
        modulus = check_coarse_map(f, b, b2)
    z = b.ground[0] if z is None else z
    h = linear_extension(f, b.ground)
    rng = random.Random(seed)
    cert = ExtensionCertificate(modulus, {}, z, f[z])
    for n, e in _param_grid(b, n_range, r_range, (1,)):
        tp = cert(IdealBaseParams(n, e, z))
        cert.param_map[(n, e)] = tp
        for _ in range(samples):
            d = random_certificate(b, IdealBaseParams(n, e, z), rng)
            img = _push_certificate(d, f, tp)
            cert.checked += 1
            if not verify_decomposition(img, b2):
                cert.violations.append(((n, e), d, "pushed certificate invalid"))
            elif evaluate(img) != h(evaluate(d)):
                cert.violations.append(((n, e), d, "pushed value differs from h(v)"))
    return cert


# ---------------------------------------------------------------- closure

@dataclass(frozen=True, order=True)
class Descriptor:
    """``copies`` copies of ``[-bound, bound] (D_{eps_level} | {z}?)``.

    ``level == 0`` means no difference atom.  Every descriptor built here is
    a member of the ideal generated by the seeds, and every ideal operation
    applied to descriptors lands inside another descriptor.
    """
    copies: int
    bound: int
    level: int
    has_z: bool

    def envelope(self) -> tuple[int, int]:
        """``(n, level)`` of a base set ``B(n, (level, 1), z)`` containing this set."""
        n = self.copies * self.bound if self.has_z else max(self.copies, self.bound)
        return n, max(1, self.level)

    def contains_base(self, n: int, r: int) -> bool:
        return self.has_z and self.level >= r and self.bound >= n and self.copies >= n + 1

    def search(self, v: FreeVector, b: GradedBallean, z: str) -> Decomposition | None:
        count = self.copies if self.level else 0
        rel = b.level(max(1, self.level))
        zcap = (lambda s: self.bound * (self.copies - s)) if self.has_z else 0
        n, r = self.envelope()
        return search_certificate(v, rel, z, count, self.bound, zcap,
                                  IdealBaseParams(n, E(r, 1), z))

    def sample(self, b: GradedBallean, z: str, rng: random.Random) -> Decomposition:
        n, r = self.envelope()
        params = IdealBaseParams(n, E(r, 1), z)
        j = rng.randint(0, self.copies) if self.level else 0
        pairs = b.level(max(1, self.level)).sorted_pairs()
        terms = tuple(DiffTerm(*rng.choice(pairs), random_rational(rng, self.bound))
                      for _ in range(j))
        zc = Fraction(0)
        if self.has_z and self.copies - j > 0:
            zc = random_rational(rng, self.bound * (self.copies - j))
        return Decomposition(terms, zc, params)


class DepthExceeded(ValueError):
    pass


MAX_CLOSURE_DEPTH = 4


@dataclass
class ClosureReport:
    depth: int
    descriptors: dict               # Descriptor -> depth first reached
    upward: dict                    # Descriptor -> (n, level, checked, failures)
    observed_depth: dict            # (n, r) -> depth or None
    downward_checked: int
    downward_failures: list
    samples: int
    seed: int

    @property
    def ok(self) -> bool:
        return not self.downward_failures and all(not u[3] for u in self.upward.values())


def closure_step(family: set, depth: int) -> set:
    new = set()
    items = sorted(family)
    for d in items:
        new.add(Descriptor(2 * d.copies, d.bound, d.level, d.has_z))
        for lam in range(2, depth + 1):
            new.add(Descriptor(d.copies, d.bound * lam, d.level, d.has_z))
    for i, a in enumerate(items):
        for c in items[i + 1:]:
            new.add(Descriptor(max(a.copies, c.copies), max(a.bound, c.bound),
                               max(a.level, c.level), a.has_z or c.has_z))
    return new


def generated_ideal_closure(b: GradedBallean, depth: int = 3, levels=None, z: str | None = None,
                            n_max: int = 3, samples: int = 5, seed: int = 0,
                            search_limit: int = 3) -> ClosureReport:
    """Close ``{D_{eps_r}} | {{z}}`` under unions, ``U + U`` and ``[-lam, lam] U``.

    Two containments are probed: every closure descriptor sits inside its
    envelope base set, and every ``B(n, (r, 1), z)`` with ``n <= n_max`` sits
    inside some descriptor (the depth where that first happens is recorded).
    """
    if depth < 0 or depth > MAX_CLOSURE_DEPTH:
        raise DepthExceeded(f"closure depth must be in 0..{MAX_CLOSURE_DEPTH}")
    z = b.ground[0] if z is None else z
    levels = list(range(1, b.L + 1)) if levels is None else list(levels)
    rng = random.Random(seed)
    seen = {Descriptor(1, 1, r, False): 0 for r in levels}
    seen[Descriptor(1, 1, 0, True)] = 0
    frontier = set(seen)
    for dpt in range(1, depth + 1):
        grown = closure_step(set(seen), depth) - set(seen)
        for d in grown:
            seen[d] = dpt
        frontier = grown
        if not frontier:
            break

    upward = {}
    for d in sorted(seen):
        n, r = d.envelope()
        fails = []
        for _ in range(samples):
            cert = d.sample(b, z, rng)
            if not verify_decomposition(cert, b):
                fails.append(cert)
            elif n <= search_limit and ideal_membership(evaluate(cert), cert.params, b) is None:
                fails.append(cert)
        upward[d] = (n, r, samples, fails)

    observed = {}
    down_checked, down_fail = 0, []
    for n in range(1, n_max + 1):
        for r in levels:
            hits = [d for d in seen if d.contains_base(n, r)]
            if not hits:
                observed[(n, r)] = None
                continue
            best = min(hits, key=lambda d: (seen[d], d))
            observed[(n, r)] = seen[best]
            for _ in range(samples):
                cert = random_certificate(b, IdealBaseParams(n, E(r, 1), z), rng)
                v = evaluate(cert)
                down_checked += 1
                if best.copies <= search_limit + 1:
                    ok = best.search(v, b, z) is not None
                else:
                    ok = (len(cert.terms) + 1 <= best.copies
                          and all(abs(t.coeff) <= best.bound for t in cert.terms)
                          and abs(cert.z_coeff) <= best.bound)
                if not ok:
                    down_fail.append(((n, r), best, cert))
    return ClosureReport(depth, seen, upward, observed, down_checked, down_fail, samples, seed)
