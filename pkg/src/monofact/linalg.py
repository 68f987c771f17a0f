"""Exact linear algebra over the coefficient field.

Over Q the elimination phase is fraction-free (Bareiss) on integer-cleared
rows; over F_p it is plain modular elimination. Both feed a shared RREF
extraction used for solving, nullspaces and ranks. A slower duck-typed rank
routine handles evaluated matrices over GF(p^e).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .fields import Field


def _clear_row(row):
    """Scale a row of Fractions to coprime integers."""
    denoms = [x.denominator for x in row if x]
    if not denoms:
        return [0 for _ in row]
    m = lcm(*denoms)
    ints = [int(x * m) for x in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _bareiss_echelon(rows):
    """Fraction-free echelon form of an integer matrix.

    Returns (echelon_rows, pivot_cols, pivot_row_origin) where
    pivot_row_origin[k] is the original index of the k-th pivot row.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], [], []
    ncols = len(m[0])
    origin = list(range(len(m)))
    prev = 1
    r = 0
    pivots = []
    pivot_origin = []
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
            origin[r], origin[pr] = origin[pr], origin[r]
        piv = m[r][c]
        for i in range(r + 1, len(m)):
            mic = m[i][c]
            mi = m[i]
            mr = m[r]
            m[i] = [(piv * mi[j] - mic * mr[j]) // prev for j in range(ncols)]
        prev = piv
        pivots.append(c)
        pivot_origin.append(origin[r])
        r += 1
        if r == len(m):
            break
    return m[:r], pivots, pivot_origin


def _rref_from_echelon_q(ech, pivots, ncols):
    rows = [[Fraction(x) for x in row] for row in ech]
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        inv = 1 / rows[k][c]
        rows[k] = [x * inv for x in rows[k]]
        for i in range(k):
            f = rows[i][c]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[k])]
    return rows


def _rref_fp(rows, p):
    m = [list(r) for r in rows]
    if not m:
        return [], [], []
    ncols = len(m[0])
    origin = list(range(len(m)))
    r = 0
    pivots = []
    pivot_origin = []
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] % p), None)
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
            origin[r], origin[pr] = origin[pr], origin[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        mr = m[r]
        for i in range(len(m)):
            if i != r:
                f = m[i][c] % p
                if f:
                    mi = m[i]
                    m[i] = [(a - f * b) % p for a, b in zip(mi, mr)]
        pivots.append(c)
        pivot_origin.append(origin[r])
        r += 1
        if r == len(m):
            break
    return m[:r], pivots, pivot_origin


def rref(rows, field: Field):
    """Reduced row echelon form. Returns (rref_rows, pivot_cols)."""
    if field.is_rational:
        cleared = [_clear_row([Fraction(x) for x in row]) for row in rows]
        ech, pivots, _ = _bareiss_echelon(cleared)
        ncols = len(rows[0]) if rows else 0
        return _rref_from_echelon_q(ech, pivots, ncols), pivots
    red, pivots, _ = _rref_fp(rows, field.p)
    return red, pivots


def rank(rows, field: Field) -> int:
    if not rows or not rows[0]:
        return 0
    return len(rref(rows, field)[1])


def solve(A, b, field: Field):
    """One exact solution of A x = b (free variables zero), or None."""
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [bv] for row, bv in zip(A, b)]
    if not aug:
        return [field.zero()] * ncols
    red, pivots = rref(aug, field)
    if pivots and pivots[-1] == ncols:
        return None
    x = [field.zero()] * ncols
    for k, c in enumerate(pivots):
        x[c] = red[k][ncols]
    return x


def nullspace(A, field: Field):
    """Basis of the kernel of A as a list of vectors."""
    if not A:
        return []
    ncols = len(A[0])
    if ncols == 0:
        return []
    red, pivots = rref(A, field)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    one = field.one()
    for fc in free:
        v = [field.zero()] * ncols
        v[fc] = one
        for k, pc in enumerate(pivots):
            v[pc] = field.neg(red[k][fc])
        basis.append(v)
    return basis


def nullity(A, field: Field, ncols: int) -> int:
    """Kernel dimension of A acting on ncols unknowns."""
    if ncols == 0:
        return 0
    if not A:
        return ncols
    return ncols - len(rref(A, field)[1])


# ---------------------------------------------------------------------------
# Duck-typed rank for evaluated matrices (Fraction, int mod p via Field, or
# GFExt elements). Uses cross-multiplication so no inverses are needed.


def rank_generic(rows, mul, sub, is_zero):
    """Rank with pivot positions: returns (rank, pivot_rows, pivot_cols).

    ``rows`` must be a rectangular list of lists; arithmetic is supplied by
    the caller so extension-field elements work unchanged.
    """
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0, [], []
    ncols = len(m[0])
    origin = list(range(len(m)))
    r = 0
    piv_rows, piv_cols = [], []
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if not is_zero(m[i][c])), None)
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
            origin[r], origin[pr] = origin[pr], origin[r]
        piv = m[r][c]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if not is_zero(f):
                m[i] = [sub(mul(piv, a), mul(f, b)) for a, b in zip(m[i], m[r])]
        piv_rows.append(origin[r])
        piv_cols.append(c)
        r += 1
        if r == len(m):
            break
    return r, piv_rows, piv_cols
