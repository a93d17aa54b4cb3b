"""Vectors of V(X) and the certificates that place them in base sets.

``FreeVector`` is a finitely supported map point -> Fraction with no
explicit zeros.  A :class:`Decomposition` writes a vector as

    lam_1 (x_1 - y_1) + ... + lam_m (x_m - y_m) + mu * z

and carries the base-set parameters ``(n, (r, k), z)`` it claims, so
:func:`verify_decomposition` can re-check it without outside context.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .ballean import EffectiveEntourage, GradedBallean
from .relations import point_key


class FreeVector(Mapping):
    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs=()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[str, Fraction] = {}
        for k, v in items:
            v = Fraction(v)
            if v:
                c[k] = c.get(k, 0) + v
                if not c[k]:
                    del c[k]
        self._c = c
        self._hash = None

    @classmethod
    def basis(cls, x: str) -> "FreeVector":
        return cls({x: 1})

    @classmethod
    def diff(cls, x: str, y: str) -> "FreeVector":
        return cls([(x, 1), (y, -1)])

    def __getitem__(self, k):
        return self._c.get(k, Fraction(0))

    def __iter__(self):
        return iter(sorted(self._c, key=point_key))

    def __len__(self):
        return len(self._c)

    def __contains__(self, k):
        return k in self._c

    def __eq__(self, other):
        if isinstance(other, FreeVector):
            return self._c == other._c
        if isinstance(other, Mapping):
            return self == FreeVector(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        if not self._c:
            return "FreeVector(0)"
        return "FreeVector(" + " + ".join(f"{v}*{k}" for k, v in self.items()) + ")"

    @property
    def support(self) -> frozenset:
        return frozenset(self._c)

    def __add__(self, other: "FreeVector") -> "FreeVector":
        out = dict(self._c)
        for k, v in other.items():
            out[k] = out.get(k, 0) + v
        return FreeVector(out)

    def __neg__(self) -> "FreeVector":
        return FreeVector({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "FreeVector") -> "FreeVector":
        return self + (-other)

    def __mul__(self, lam) -> "FreeVector":
        lam = Fraction(lam)
        return FreeVector({k: lam * v for k, v in self._c.items()})

    __rmul__ = __mul__

    def coordinate_sum(self) -> Fraction:
        return sum(self._c.values(), Fraction(0))


def add(u: FreeVector, v: FreeVector) -> FreeVector:
    return u + v


def scale(lam, v: FreeVector) -> FreeVector:
    return v * lam


def negate(v: FreeVector) -> FreeVector:
    return -v


def coordinate_sum(v: FreeVector) -> Fraction:
    return v.coordinate_sum()


def vec(**coeffs) -> FreeVector:
    """Shorthand for tests and demos: ``vec(p2=1, p1=-1)``."""
    return FreeVector(coeffs)


@dataclass(frozen=True)
class IdealBaseParams:
    """Names the base set ``S_{n, eps_r^k} + [-n, n] z``."""
    n: int
    entourage: EffectiveEntourage
    z: str

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")

    @classmethod
    def of(cls, n: int, level: int, power: int, z: str) -> "IdealBaseParams":
        return cls(n, EffectiveEntourage(level, power), z)


@dataclass(frozen=True)
class DiffTerm:
    x: str
    y: str
    coeff: Fraction

    @property
    def pair(self) -> tuple[str, str]:
        return (self.x, self.y)

    def value(self) -> FreeVector:
        return FreeVector.diff(self.x, self.y) * self.coeff


@dataclass(frozen=True)
class Decomposition:
    terms: tuple[DiffTerm, ...]
    z_coeff: Fraction
    params: IdealBaseParams

    @classmethod
    def build(cls, terms: Iterable, z_coeff, params: IdealBaseParams) -> "Decomposition":
        ts = tuple(t if isinstance(t, DiffTerm) else DiffTerm(t[0][0], t[0][1], Fraction(t[1]))
                   for t in terms)
        return cls(ts, Fraction(z_coeff), params)

    def with_params(self, params: IdealBaseParams) -> "Decomposition":
        return Decomposition(self.terms, self.z_coeff, params)

    def negated(self) -> "Decomposition":
        return Decomposition(tuple(DiffTerm(t.x, t.y, -t.coeff) for t in self.terms),
                             -self.z_coeff, self.params)


def evaluate(d: Decomposition) -> FreeVector:
    acc: dict[str, Fraction] = {}
    for t in d.terms:
        acc[t.x] = acc.get(t.x, 0) + t.coeff
        acc[t.y] = acc.get(t.y, 0) - t.coeff
    if d.z_coeff:
        acc[d.params.z] = acc.get(d.params.z, 0) + d.z_coeff
    return FreeVector(acc)


def verify_decomposition(d: Decomposition, b: GradedBallean) -> bool:
    """True iff ``d`` is a genuine certificate for its own params in ``b``."""
    p = d.params
    n = p.n
    if p.z not in b.ground:
        return False
    if not (1 <= p.entourage.level <= b.L):
        return False
    if len(d.terms) > n or abs(d.z_coeff) > n:
        return False
    if any(abs(t.coeff) > n for t in d.terms):
        return False
    rel = b.entourage(p.entourage)
    return all(t.pair in rel.pairs for t in d.terms)
