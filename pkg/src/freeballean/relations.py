"""Finite binary relations over a named ground set.

Points are plain strings.  They are ordered "naturally" (``p2 < p10``) so
that every enumeration in the package is deterministic and reads the way a
person would list the points.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

_CHUNKS = re.compile(r"(\d+)")


def point_key(p: str):
    """Sort key for point ids: digit runs compare as integers."""
    return tuple((0, int(t)) if t.isdigit() else (1, t)
                 for t in _CHUNKS.split(p) if t)


def pair_key(pair):
    return (point_key(pair[0]), point_key(pair[1]))


def sort_points(points: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(points), key=point_key))


class GroundMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    """A set of ordered pairs over ``ground``.

    ``ground`` is kept sorted; ``pairs`` is a frozenset, so equality and
    hashing ignore construction order.  Use :meth:`of` to build one from
    arbitrary iterables.
    """
    ground: tuple[str, ...]
    pairs: frozenset

    @classmethod
    def of(cls, ground: Iterable[str], pairs: Iterable[tuple[str, str]]) -> "Relation":
        ground = sort_points(ground)
        gset = set(ground)
        ps = frozenset((x, y) for x, y in pairs)
        for x, y in ps:
            if x not in gset or y not in gset:
                raise GroundMismatch(f"pair ({x}, {y}) has an endpoint outside the ground set")
        return cls(ground, ps)

    @classmethod
    def diagonal(cls, ground: Iterable[str]) -> "Relation":
        ground = sort_points(ground)
        return cls(ground, frozenset((x, x) for x in ground))

    @classmethod
    def full(cls, ground: Iterable[str]) -> "Relation":
        ground = sort_points(ground)
        return cls(ground, frozenset((x, y) for x in ground for y in ground))

    def sorted_pairs(self) -> list[tuple[str, str]]:
        return sorted(self.pairs, key=pair_key)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.sorted_pairs())

    def __le__(self, other: "Relation") -> bool:
        return self.pairs <= other.pairs

    def image(self, x: str) -> frozenset:
        """The ball ``self[x] = {y : (x, y) in self}``."""
        return frozenset(y for (a, y) in self.pairs if a == x)

    def image_of_set(self, xs: Iterable[str]) -> frozenset:
        xs = set(xs)
        return frozenset(y for (a, y) in self.pairs if a in xs)

    def adjacency(self) -> dict[str, set]:
        adj: dict[str, set] = {x: set() for x in self.ground}
        for x, y in self.pairs:
            adj[x].add(y)
        return adj

    def is_symmetric(self) -> bool:
        return all((y, x) in self.pairs for x, y in self.pairs)

    def restrict(self, points: Iterable[str]) -> "Relation":
        keep = set(points)
        return Relation.of(keep, ((x, y) for x, y in self.pairs if x in keep and y in keep))

    def union(self, other: "Relation") -> "Relation":
        _same_ground(self, other)
        return Relation(self.ground, self.pairs | other.pairs)

    def intersection(self, other: "Relation") -> "Relation":
        _same_ground(self, other)
        return Relation(self.ground, self.pairs & other.pairs)


def _same_ground(a: Relation, b: Relation):
    if a.ground != b.ground:
        raise GroundMismatch("relations live on different ground sets")


def compose(a: Relation, b: Relation) -> Relation:
    """``{(x, y) : exists z, (x, z) in a and (z, y) in b}``."""
    _same_ground(a, b)
    badj = b.adjacency()
    out = set()
    for x, z in a.pairs:
        for y in badj[z]:
            out.add((x, y))
    return Relation(a.ground, frozenset(out))


def inverse(a: Relation) -> Relation:
    return Relation(a.ground, frozenset((y, x) for x, y in a.pairs))


def power(a: Relation, k: int) -> Relation:
    """k-fold composition ``a o a o ... o a`` (k >= 1)."""
    if k < 1:
        raise ValueError("relation powers start at 1")
    out = a
    for _ in range(k - 1):
        out = compose(out, a)
    return out


def symmetrize(a: Relation) -> Relation:
    """``a | a^-1 | diagonal``."""
    return Relation(a.ground, a.pairs | inverse(a).pairs | Relation.diagonal(a.ground).pairs)
