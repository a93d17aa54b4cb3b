"""Deciding membership in the base sets ``B(n, e, z) = S_{n,e} + [-n, n] z``.

``S_{n,e}`` is the sum of ``n`` copies of ``[-n, n] D_e`` where
``D_e = {x - y : (x, y) in e}``.  Grouping equal copies, a vector lies in
``B(n, e, z)`` iff for some multiset of pairs with total multiplicity at most
``n`` the system

    v = sum_p c_p (x_p - y_p) + mu z,   |c_p| <= n k_p,   |mu| <= n

is feasible.  Because ``e`` is symmetric the orientation of a pair does not
matter, and diagonal pairs add nothing, so the search runs over unordered
off-diagonal pairs only.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Iterable

from .ballean import EffectiveEntourage, GradedBallean
from .linfeas import solve_box
from .relations import Relation, pair_key, point_key
from .vectors import (Decomposition, DiffTerm, FreeVector, IdealBaseParams,
                      evaluate, verify_decomposition)


def _check_params(v: FreeVector, p: IdealBaseParams, b: GradedBallean):
    if not 1 <= p.entourage.level <= b.L:
        raise IndexError(f"level {p.entourage.level} out of range 1..{b.L}")
    if p.z not in b.ground:
        raise KeyError(f"z = {p.z!r} is not a point of the ballean")
    outside = v.support - set(b.ground)
    if outside:
        raise KeyError(f"vector support leaves the ground set: {sorted(outside, key=point_key)}")


def candidate_pairs(rel: Relation, restrict_to: Iterable[str] | None = None) -> list:
    keep = None if restrict_to is None else set(restrict_to)
    out = set()
    for x, y in rel.pairs:
        if x == y:
            continue
        if keep is not None and (x not in keep or y not in keep):
            continue
        out.add((x, y) if point_key(x) < point_key(y) else (y, x))
    return sorted(out, key=pair_key)


def _solve_multiset(v: FreeVector, pairs, mults, z, bound, zbound):
    pts = {q for pr in pairs for q in pr}
    if zbound > 0:
        pts.add(z)
    if not v.support <= pts:
        return None
    rows = sorted(pts, key=point_key)
    ncol = len(pairs) + (1 if zbound > 0 else 0)
    A = []
    for pt in rows:
        row = []
        for x, y in pairs:
            row.append(1 if pt == x else (-1 if pt == y else 0))
        if zbound > 0:
            row.append(1 if pt == z else 0)
        A.append(row)
    rhs = [v[pt] for pt in rows]
    hi = [bound * k for k in mults] + ([zbound] if zbound > 0 else [])
    lo = [-h for h in hi]
    if ncol == 0:
        return [] if not v else None
    return solve_box(A, rhs, lo, hi)


def _to_terms(pairs, coeffs, bound) -> list[DiffTerm]:
    terms = []
    for (x, y), c in zip(pairs, coeffs):
        if c == 0:
            continue
        if c < 0:
            x, y, c = y, x, -c
        copies = max(1, math.ceil(c / bound))
        for _ in range(copies):
            terms.append(DiffTerm(x, y, c / copies))
    return terms


def search_certificate(v: FreeVector, rel: Relation, z: str, count: int, bound,
                       zbound: Callable[[int], Fraction] | Fraction,
                       params: IdealBaseParams, restrict_to=None) -> Decomposition | None:
    """Generalised search: at most ``count`` pair copies, each ``|lam| <= bound``.

    ``zbound`` may depend on the number of pair copies used, which is what
    the closure descriptors of :mod:`freeballean.universal` need.
    """
    bound = Fraction(bound)
    zb = zbound if callable(zbound) else (lambda s, _c=Fraction(zbound): _c)
    cands = candidate_pairs(rel, restrict_to)
    for s in range(count + 1):
        zcap = Fraction(zb(s))
        for combo in combinations_with_replacement(cands, s):
            mult = Counter(combo)
            pairs = list(mult)
            sol = _solve_multiset(v, pairs, [mult[p] for p in pairs], z, bound, zcap)
            if sol is None:
                continue
            coeffs = sol[:len(pairs)]
            mu = sol[len(pairs)] if zcap > 0 else Fraction(0)
            return Decomposition(tuple(_to_terms(pairs, coeffs, bound)), mu, params)
    return None


def ideal_membership(v: FreeVector, p: IdealBaseParams, b: GradedBallean,
                     prune_support: bool = False) -> Decomposition | None:
    """First certificate placing ``v`` in ``B(n, (r, k), z)``, or None.

    Multisets are tried by size, then lexicographically in canonical pair
    order.  With ``prune_support`` the pairs inside ``supp(v) | {z}`` are
    tried first and the full pair set only on a miss.
    """
    v = FreeVector(v)
    _check_params(v, p, b)
    rel = b.entourage(p.entourage)
    if prune_support:
        hit = search_certificate(v, rel, p.z, p.n, p.n, p.n, p, v.support | {p.z})
        if hit is not None:
            return hit
    return search_certificate(v, rel, p.z, p.n, p.n, p.n, p)


# ---------------------------------------------------------------- reduction

class ReductionError(ValueError):
    pass


def _loop_erase(walk):
    out = []
    seen = {}
    for pt in walk:
        if pt in seen:
            cut = seen[pt]
            for q in out[cut + 1:]:
                del seen[q]
            out = out[:cut + 1]
        else:
            seen[pt] = len(out)
            out.append(pt)
    return tuple(out)


@dataclass
class _Work:
    x: str
    y: str
    coeff: Fraction
    walk: tuple  # x ... y along original pairs

    @property
    def length(self):
        return len(self.walk) - 1


def reduce_to_support(d: Decomposition, target: Iterable[str], b: GradedBallean):
    """Eliminate every point outside ``target`` from the pairs of ``d``.

    For an extraneous point ``a`` the ``a``-terms have zero net coefficient
    at ``a``.  One ``a``-term ``lam (a - w)`` is chosen, ``a`` is replaced by
    ``w`` in all the other ``a``-terms and the chosen term (now ``w - w``)
    is dropped; the value is unchanged.  Each term remembers a walk along
    original pairs joining its endpoints, so a term of walk length ``l`` lies
    in ``e^l``.  Walks are loop-erased after every splice.

    Returns ``(reduced, achieved_power)``; the reduced certificate claims
    ``(n, (r, k * achieved_power), z)``.
    """
    target = set(target)
    p = d.params
    if d.z_coeff != 0 and p.z not in target:
        raise ReductionError(f"z = {p.z} carries coefficient {d.z_coeff} but is outside the target")
    work = [_Work(t.x, t.y, t.coeff, (t.x, t.y)) for t in d.terms]
    eliminations = 0
    while True:
        extra = sorted({q for w in work for q in (w.x, w.y)} - target, key=point_key)
        if not extra:
            break
        a = extra[0]
        touching = [w for w in work if a in (w.x, w.y)]
        net = sum((w.coeff if w.x == a else 0) - (w.coeff if w.y == a else 0) for w in touching)
        if net != 0:
            raise ReductionError(f"point {a} has net coefficient {net} in the pair terms")
        proper = [w for w in touching if w.x != w.y]
        if not proper:
            work = [w for w in work if w not in touching]
            continue
        k = min(proper, key=lambda w: w.length)
        # walk of the chosen term oriented from a to its partner
        if k.x == a:
            partner, from_a = k.y, k.walk
        else:
            partner, from_a = k.x, tuple(reversed(k.walk))
        to_a = tuple(reversed(from_a))
        survivors = []
        for w in work:
            if w is k:
                continue
            if w.x == a and w.y == a:
                continue
            if w.x == a:
                w = _Work(partner, w.y, w.coeff, _loop_erase(to_a + w.walk[1:]))
            elif w.y == a:
                w = _Work(w.x, partner, w.coeff, _loop_erase(w.walk + from_a[1:]))
            if w.x == w.y and w.x == partner:
                continue
            survivors.append(w)
        work = survivors
        eliminations += 1
    achieved = max([w.length for w in work] + [1])
    e = p.entourage
    params = IdealBaseParams(p.n, EffectiveEntourage(e.level, e.power * achieved), p.z)
    terms = tuple(DiffTerm(w.x, w.y, w.coeff) for w in work)
    out = Decomposition(terms, d.z_coeff, params)
    return out, achieved


# ---------------------------------------------------------------- restriction

@dataclass(frozen=True)
class RestrictionVerdict:
    x: str
    y: str
    n: int
    entourage: EffectiveEntourage
    z: str
    pair_in_entourage: bool
    forward: bool | None          # None when (x, y) is not in e
    member: bool
    z_coeff_zero: bool | None
    achieved_power: int | None
    reduced_within_pair: bool | None
    converse: bool | None         # None when x - y is not a member

    @property
    def ok(self) -> bool:
        return self.forward is not False and self.converse is not False


def restriction_check(b: GradedBallean, x: str, y: str, n: int,
                      e: EffectiveEntourage, z: str | None = None) -> RestrictionVerdict:
    """Both directions of "the free ideal restricts to the original scale on X"."""
    z = b.ground[0] if z is None else z
    v = FreeVector.diff(x, y)
    in_e = (x, y) in b.entourage(e).pairs
    forward = None
    if in_e:
        forward = ideal_membership(v, IdealBaseParams(1, e, z), b) is not None
    cert = ideal_membership(v, IdealBaseParams(n, e, z), b)
    if cert is None:
        return RestrictionVerdict(x, y, n, e, z, in_e, forward, False, None, None, None, None)
    zero = cert.z_coeff == 0
    reduced, achieved = reduce_to_support(cert, {x, y}, b)
    within = all(t.x in (x, y) and t.y in (x, y) for t in reduced.terms)
    confirmed = (x, y) in b.power(e.level, e.power * n).pairs
    value_kept = evaluate(reduced) == v
    converse = zero and within and confirmed and value_kept and achieved <= n \
        and verify_decomposition(reduced, b)
    return RestrictionVerdict(x, y, n, e, z, in_e, forward, True, zero, achieved, within, converse)


# ---------------------------------------------------------------- sampling

def random_rational(rng: random.Random, bound, max_den: int = 4) -> Fraction:
    bound = Fraction(bound)
    q = rng.randint(1, max_den)
    top = math.floor(bound * q)
    r = rng.random()
    if r < 0.1:
        return bound
    if r < 0.2:
        return -bound
    return Fraction(rng.randint(-top, top), q)


def random_certificate(b: GradedBallean, p: IdealBaseParams, rng: random.Random,
                       max_den: int = 4, with_z: bool = True) -> Decomposition:
    """A random (valid) certificate for ``B(n, e, z)``."""
    pairs = b.entourage(p.entourage).sorted_pairs()
    m = rng.randint(0, p.n)
    terms = []
    for _ in range(m):
        x, y = rng.choice(pairs)
        terms.append(DiffTerm(x, y, random_rational(rng, p.n, max_den)))
    mu = random_rational(rng, p.n, max_den) if with_z else Fraction(0)
    return Decomposition(tuple(terms), mu, p)


def concat(u: Decomposition, w: Decomposition, params: IdealBaseParams) -> Decomposition:
    return Decomposition(u.terms + w.terms, u.z_coeff + w.z_coeff, params)


def scale_certificate(lam, d: Decomposition, params: IdealBaseParams) -> Decomposition:
    lam = Fraction(lam)
    return Decomposition(tuple(DiffTerm(t.x, t.y, lam * t.coeff) for t in d.terms),
                         lam * d.z_coeff, params)


# ---------------------------------------------------------------- axiom probe

@dataclass
class AxiomTally:
    name: str
    mode: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class IdealProbeReport:
    params: IdealBaseParams
    samples: int
    seed: int
    axioms: dict

    @property
    def ok(self) -> bool:
        return all(t.ok for t in self.axioms.values())


def ideal_axiom_probe(b: GradedBallean, samples: int = 20, seed: int = 0,
                      params: IdealBaseParams | None = None,
                      search_limit: int = 2) -> IdealProbeReport:
    """Sampled check of the vector-ideal axioms on the base family.

    Every claim is first settled by building the certificate explicitly
    (mode "arithmetic"); when the target ``n`` is at most ``search_limit``
    the membership search is also run on the sampled vector.
    """
    rng = random.Random(seed)
    if params is None:
        params = IdealBaseParams(1, EffectiveEntourage(min(2, b.L), 1), b.ground[0])
    n, e, z = params.n, params.entourage, params.z
    tallies = {k: AxiomTally(k, "arithmetic+search") for k in ("sum", "scale", "cover", "monotone")}

    def confirm(vec, p, tally, note):
        tally.checked += 1
        if p.n <= search_limit and ideal_membership(vec, p, b) is None:
            tally.failures.append((note, "search found no certificate"))

    for i in range(samples):
        u = random_certificate(b, params, rng)
        w = random_certificate(b, params, rng)
        p2 = IdealBaseParams(2 * n, e, z)
        s = concat(u, w, p2)
        if not verify_decomposition(s, b) or evaluate(s) != evaluate(u) + evaluate(w):
            tallies["sum"].failures.append((i, "concatenated certificate invalid"))
        confirm(evaluate(s), p2, tallies["sum"], i)

        lam = Fraction(rng.randint(-12, 12), rng.randint(1, 4))
        p3 = IdealBaseParams(n * math.ceil(max(1, abs(lam))), e, z)
        sc = scale_certificate(lam, u, p3)
        if not verify_decomposition(sc, b) or evaluate(sc) != evaluate(u) * lam:
            tallies["scale"].failures.append((i, f"scaled certificate invalid for {lam}"))
        confirm(evaluate(sc), p3, tallies["scale"], i)

        for wider in (IdealBaseParams(n + 1, e, z),
                      IdealBaseParams(n, EffectiveEntourage(min(e.level + 1, b.L), e.power), z),
                      IdealBaseParams(n, EffectiveEntourage(e.level, e.power + 1), z)):
            tallies["monotone"].checked += 1
            if not verify_decomposition(u.with_params(wider), b):
                tallies["monotone"].failures.append((i, f"lost membership at {wider}"))

    top = IdealBaseParams(1, EffectiveEntourage(b.L, 1), z)
    for y in b.ground:
        d = Decomposition((DiffTerm(y, z, Fraction(1)),) if y != z else (), Fraction(1), top)
        if not verify_decomposition(d, b) or evaluate(d) != FreeVector.basis(y):
            tallies["cover"].failures.append((y, "y = (y - z) + z failed"))
        confirm(FreeVector.basis(y), top, tallies["cover"], y)
    return IdealProbeReport(params, samples, seed, tallies)
