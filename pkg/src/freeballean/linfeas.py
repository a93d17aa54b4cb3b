"""Exact feasibility of ``A x = b, lo <= x <= hi`` over the rationals.

Equalities are eliminated first (Gauss-Jordan), which leaves the pivot
variables as affine functions of the free ones.  The box constraints then
become a small inequality system in the free variables, which is decided by
Fourier-Motzkin elimination.  Back-substitution picks, for every free
variable, the point of its feasible interval closest to zero, so solutions
are deterministic and tend to be sparse.

Everything is ``Fraction``; nothing is ever rounded.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = list  # of Fraction


def rref(A: Sequence[Sequence], b: Sequence):
    """Reduced row echelon form of ``[A | b]``.

    Returns ``(rows, pivots)`` or ``None`` when the system is inconsistent.
    ``rows[i]`` is ``(coeffs, rhs)`` with a leading 1 in column ``pivots[i]``.
    """
    m = len(A)
    ncol = len(A[0]) if m else 0
    M = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    row = 0
    for col in range(ncol):
        piv = next((i for i in range(row, m) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        pv = M[row][col]
        if pv != 1:
            M[row] = [v / pv for v in M[row]]
        for i in range(m):
            if i != row and M[i][col] != 0:
                f = M[i][col]
                Mi, Mr = M[i], M[row]
                M[i] = [a - f * c for a, c in zip(Mi, Mr)]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if M[i][-1] != 0 and all(v == 0 for v in M[i][:-1]):
            return None
    return [(M[i][:-1], M[i][-1]) for i in range(row)], pivots


def _fm_eliminate(ineqs, j):
    """Eliminate variable ``j`` from ``a . t <= beta`` constraints."""
    pos, neg, rest = [], [], []
    for a, beta in ineqs:
        c = a[j]
        if c > 0:
            pos.append((a, beta))
        elif c < 0:
            neg.append((a, beta))
        else:
            rest.append((a, beta))
    out = list(rest)
    for ap, bp in pos:
        for an, bn in neg:
            cp, cn = ap[j], -an[j]
            a = [cn * u + cp * v for u, v in zip(ap, an)]
            a[j] = Fraction(0)
            out.append((a, cn * bp + cp * bn))
    return _dedupe(out)


def _dedupe(ineqs):
    seen = {}
    for a, beta in ineqs:
        # scale so the first nonzero coefficient has magnitude 1
        lead = next((abs(v) for v in a if v != 0), None)
        if lead is None:
            key = (tuple(a), None)
            seen.setdefault(key, (a, beta))
            if beta < seen[key][1]:
                seen[key] = (a, beta)
            continue
        na = tuple(v / lead for v in a)
        nb = beta / lead
        if na not in seen or nb < seen[na][1]:
            seen[na] = (list(na), nb)
    return list(seen.values())


def _interval(ineqs, j, t):
    """Bounds on ``t[j]`` given fixed ``t[:j]``; later coordinates must be 0 in ``a``."""
    lo, hi = None, None
    for a, beta in ineqs:
        c = a[j]
        rest = beta - sum(a[i] * t[i] for i in range(j))
        if c > 0:
            v = rest / c
            hi = v if hi is None or v < hi else hi
        elif c < 0:
            v = rest / c
            lo = v if lo is None or v > lo else lo
        elif rest < 0:
            return None
    return lo, hi


def solve_box(A: Sequence[Sequence], b: Sequence, lo: Sequence, hi: Sequence) -> Vector | None:
    """A rational point of ``{x : A x = b, lo <= x <= hi}`` or ``None``."""
    nvar = len(lo)
    lo = [Fraction(v) for v in lo]
    hi = [Fraction(v) for v in hi]
    if any(l > h for l, h in zip(lo, hi)):
        return None
    if A:
        red = rref(A, b)
        if red is None:
            return None
        rows, pivots = red
    else:
        rows, pivots = [], []
    free = [j for j in range(nvar) if j not in set(pivots)]
    fidx = {j: i for i, j in enumerate(free)}
    nf = len(free)

    # x_p = rhs - sum_f coeff_f t_f ; x_f = t_f
    exprs = {}
    for (coeffs, rhs), p in zip(rows, pivots):
        a = [Fraction(0)] * nf
        for j in free:
            a[fidx[j]] = -coeffs[j]
        exprs[p] = (a, rhs)
    for j in free:
        a = [Fraction(0)] * nf
        a[fidx[j]] = Fraction(1)
        exprs[j] = (a, Fraction(0))

    # a.t + c <= hi  and  -a.t - c <= -lo
    ineqs = []
    for j in range(nvar):
        a, c = exprs[j]
        ineqs.append((list(a), hi[j] - c))
        ineqs.append(([-v for v in a], c - lo[j]))

    stages = [ineqs]
    cur = ineqs
    for j in reversed(range(nf)):
        cur = _fm_eliminate(cur, j)
        stages.append(cur)
    if any(beta < 0 for a, beta in cur):
        return None

    t = [Fraction(0)] * nf
    for j in range(nf):
        # stages[nf - 1 - j] only involves t[0..j]
        bounds = _interval(stages[nf - 1 - j], j, t)
        if bounds is None:
            return None
        l, h = bounds
        v = Fraction(0)
        if l is not None and v < l:
            v = l
        if h is not None and v > h:
            v = h
        if l is not None and h is not None and l > h:
            return None
        t[j] = v

    x = []
    for j in range(nvar):
        a, c = exprs[j]
        x.append(c + sum(ai * ti for ai, ti in zip(a, t)))
    return x
