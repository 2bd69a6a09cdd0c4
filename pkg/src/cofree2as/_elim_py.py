"""Fraction-free integer row reduction, pure Python.

This is the reference kernel. ``_elim.pyx`` runs the same algorithm on int64
with overflow checks; both must return identical results.
"""

from __future__ import annotations

from math import gcd


def _content_normalize(row: list[int], make_positive_at: int | None = None) -> None:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                break
    if make_positive_at is not None and row[make_positive_at] < 0:
        g = -g if g else -1
    if g not in (0, 1):
        for j, v in enumerate(row):
            if v:
                row[j] = v // g


def rref_int(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduce integer rows to a fraction-free reduced echelon form.

    Pivot rows are primitive with positive pivot, every pivot column is zero
    outside its pivot row, and zero rows are dropped. Returns ``(rows, pivots)``.
    """
    a = [list(r) for r in rows]
    m = len(a)
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r >= m:
            break
        piv = -1
        for i in range(r, m):
            if a[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        _content_normalize(prow, col)
        p = prow[col]
        for i in range(m):
            if i == r:
                continue
            row = a[i]
            b = row[col]
            if not b:
                continue
            g = gcd(p, b)
            s, t = p // g, b // g
            # rows above the pivot carry entries left of ``col``; scale them too
            start = 0 if i < r else col
            for j in range(start, ncols):
                row[j] = s * row[j] - t * prow[j]
            _content_normalize(row)
        pivots.append(col)
        r += 1
    return a[:r], pivots


def rank_int(rows: list[list[int]], ncols: int) -> int:
    return len(rref_int(rows, ncols)[1])
