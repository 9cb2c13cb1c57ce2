"""Row-space linear algebra over the scalar tower, with left coefficients.

Vectors are tuples of Scalars; a subspace is the left span of its rows.
Row operations multiply on the left, so everything works verbatim over the
quaternions (and over matrix scalars as long as the pivots invert).
"""

from __future__ import annotations

from .errors import NotInvertible
from .scalar import one, zero


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(lam, v):
    """Left scalar multiple."""
    return tuple(lam * a for a in v)


def vec_is_zero(v):
    return all(a.is_zero() for a in v)


def rref(rows):
    """Reduced row echelon form over a division ring; returns (rows, pivots).

    Zero rows are dropped.  Raises NotInvertible only if a column has nonzero
    entries none of which invert (possible for matrix-entry scalars)."""
    rows = [tuple(r) for r in rows if not vec_is_zero(r)]
    if not rows:
        return [], []
    width = len(rows[0])
    out = []
    pivots = []
    work = list(rows)
    col = 0
    while col < width and work:
        pick = None
        nonzero_seen = False
        for i, r in enumerate(work):
            if not r[col].is_zero():
                nonzero_seen = True
                try:
                    r[col].inv()
                    pick = i
                    break
                except NotInvertible:
                    continue
        if pick is None:
            if nonzero_seen:
                raise NotInvertible(f"no invertible pivot in column {col}")
            col += 1
            continue
        piv = work.pop(pick)
        piv = vec_scale(piv[col].inv(), piv)
        for j, r in enumerate(out):
            if not r[col].is_zero():
                out[j] = vec_sub(r, vec_scale(r[col], piv))
        work = [vec_sub(r, vec_scale(r[col], piv)) if not r[col].is_zero() else r
                for r in work]
        work = [r for r in work if not vec_is_zero(r)]
        out.append(piv)
        pivots.append(col)
        col += 1
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order], sorted(pivots)


def solve_left(rows, target):
    """Coefficients lam with sum_i lam_i rows_i = target, or None.

    rows need not be reduced; works by reducing an augmented system."""
    rows = [tuple(r) for r in rows]
    n = len(rows)
    if n == 0:
        return [] if vec_is_zero(target) else None
    lv = target[0].level()
    o, z = one(lv), zero(lv)
    aug = [tuple(r) + tuple(o if j == i else z for j in range(n))
           for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    width = len(target)
    lam = [z] * n
    rem = tuple(target)
    for r, p in zip(red, pivots):
        if p >= width:
            break
        if not rem[p].is_zero():
            coeff = rem[p]
            rem = vec_sub(rem, vec_scale(coeff, r[:width]))
            for i in range(n):
                lam[i] = lam[i] + coeff * r[width + i]
    if not vec_is_zero(rem):
        return None
    return lam


def left_kernel(rows):
    """Basis of {x : sum x_i rows_i = 0}."""
    rows = [tuple(r) for r in rows]
    n = len(rows)
    if n == 0:
        return []
    width = len(rows[0])
    lv = rows[0][0].level()
    o, z = one(lv), zero(lv)
    aug = [tuple(r) + tuple(o if j == i else z for j in range(n))
           for i, r in enumerate(rows)]
    red, pivots = rref(aug)
    out = []
    for r, p in zip(red, pivots):
        if p >= width:
            out.append(r[width:])
    return out


def row_span_dim(rows):
    red, _ = rref(rows)
    return len(red)


def in_span(rows, v):
    return solve_left(rows, v) is not None
