"""Brute-force membership oracle, kept independent of :mod:`membership`.

It enumerates multisets of *ordered* pairs of ``e`` (diagonal ones
included), solves the equality system by its own Gaussian elimination into
an affine parametrisation, and then inspects the vertices of the box
polytope in parameter space.  A bounded polyhedron is non-empty exactly
when it has a vertex, so this decides feasibility without Fourier-Motzkin.
"""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .ballean import GradedBallean
from .relations import pair_key, point_key
from .vectors import Decomposition, DiffTerm, FreeVector, IdealBaseParams

MAX_POINTS = 6
MAX_N = 3


class OracleLimitError(ValueError):
    pass


def _gauss(A, b):
    """Affine solution set ``x = x0 + N t`` of ``A x = b`` or None."""
    m = len(A)
    nv = len(A[0]) if m else 0
    M = [list(A[i]) + [b[i]] for i in range(m)]
    where = [-1] * nv
    r = 0
    for c in range(nv):
        sel = None
        for i in range(r, m):
            if M[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        M[r], M[sel] = M[sel], M[r]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c] / M[r][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[r])]
        where[c] = r
        r += 1
    for i in range(r, m):
        if M[i][nv] != 0:
            return None
    free = [c for c in range(nv) if where[c] == -1]
    x0 = [Fraction(0)] * nv
    N = [[Fraction(0)] * len(free) for _ in range(nv)]
    for c in range(nv):
        if where[c] != -1:
            row = M[where[c]]
            x0[c] = row[nv] / row[c]
            for j, f in enumerate(free):
                N[c][j] = -row[f] / row[c]
    for j, f in enumerate(free):
        N[f][j] = Fraction(1)
    return x0, N, len(free)


def _det_solve(G, h):
    """Solve a square system exactly; None if singular."""
    d = len(G)
    M = [list(G[i]) + [h[i]] for i in range(d)]
    for c in range(d):
        sel = next((i for i in range(c, d) if M[i][c] != 0), None)
        if sel is None:
            return None
        M[c], M[sel] = M[sel], M[c]
        for i in range(d):
            if i != c and M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * bb for a, bb in zip(M[i], M[c])]
    return [M[i][d] / M[i][i] for i in range(d)]


def _feasible_point(A, b, lo, hi):
    aff = _gauss(A, b)
    if aff is None:
        return None
    x0, N, d = aff
    nv = len(x0)
    # constraints: lo_i <= x0_i + N_i t <= hi_i
    cons = []
    for i in range(nv):
        cons.append((N[i], hi[i] - x0[i], 1))   # N_i t <= hi - x0
        cons.append((N[i], lo[i] - x0[i], -1))  # N_i t >= lo - x0

    def inside(t):
        for i in range(nv):
            xi = x0[i] + sum(N[i][j] * t[j] for j in range(d))
            if xi < lo[i] or xi > hi[i]:
                return None
        return [x0[i] + sum(N[i][j] * t[j] for j in range(d)) for i in range(nv)]

    if d == 0:
        return inside([])
    for active in combinations(range(len(cons)), d):
        G = [cons[a][0] for a in active]
        h = [cons[a][1] for a in active]
        t = _det_solve(G, h)
        if t is None:
            continue
        x = inside(t)
        if x is not None:
            return x
    return None


def brute_force_oracle(v: FreeVector, p: IdealBaseParams, b: GradedBallean) -> Decomposition | None:
    if b.size > MAX_POINTS or p.n > MAX_N:
        raise OracleLimitError(f"oracle limited to |X| <= {MAX_POINTS}, n <= {MAX_N}")
    v = FreeVector(v)
    n = Fraction(p.n)
    pts = sorted(b.ground, key=point_key)
    pairs = sorted(b.entourage(p.entourage).pairs, key=pair_key)
    for s in range(p.n + 1):
        for combo in combinations_with_replacement(pairs, s):
            mult = Counter(combo)
            cols = list(mult)
            touched = {q for pr in cols for q in pr} | {p.z}
            if not v.support <= touched:
                continue
            A = []
            for pt in pts:
                A.append([Fraction((pt == x) - (pt == y)) for x, y in cols] + [Fraction(pt == p.z)])
            rhs = [v[pt] for pt in pts]
            hi = [n * mult[c] for c in cols] + [n]
            lo = [-h for h in hi]
            x = _feasible_point(A, rhs, lo, hi)
            if x is None:
                continue
            terms = []
            for (a, c), val in zip(cols, x):
                k = mult[(a, c)]
                if val != 0:
                    terms.extend(DiffTerm(a, c, val / k) for _ in range(k))
            return Decomposition(tuple(terms), x[-1], p)
    return None
