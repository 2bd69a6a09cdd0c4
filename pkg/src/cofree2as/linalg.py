"""Exact linear algebra over the rationals.

Rational rows are cleared to integers and reduced fraction-free. The compiled
int64 kernel is used when it imports and the data fits; otherwise, or after
an int64 overflow, the pure-Python kernel runs on unbounded ints. Set
``COFREE2AS_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Mapping, Sequence

from . import _elim_py
from .linear import normalize_scalar

try:
    if os.environ.get("COFREE2AS_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _elim as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_INT64_SAFE = 1 << 40

__all__ = [
    "BACKEND",
    "rref_int",
    "rref",
    "rank",
    "nullspace",
    "sparse_to_dense",
]


def rref_int(rows: Sequence[Sequence[int]], ncols: int, backend: str | None = None) -> tuple[list[list[int]], list[int]]:
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not available")
        if all(abs(v) < _INT64_SAFE for r in rows for v in r):
            try:
                return _compiled.rref_int64(rows, ncols)
            except OverflowError:
                pass
    return _elim_py.rref_int([list(r) for r in rows], ncols)


def _integer_rows(rows: Iterable[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        den = 1
        for v in r:
            if isinstance(v, Fraction) and v.denominator != 1:
                den = lcm(den, v.denominator)
        if den == 1:
            ir = [int(v) for v in r]
        else:
            ir = [int(v * den) for v in r]
        if any(ir):
            out.append(ir)
    return out


def rref(rows: Sequence[Sequence], ncols: int, backend: str | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q (pivots equal to 1)."""
    irows, pivots = rref_int(_integer_rows(rows), ncols, backend)
    out = []
    for row, col in zip(irows, pivots):
        p = row[col]
        out.append([normalize_scalar(Fraction(v, p)) if v else 0 for v in row])
    return out, pivots


def rank(rows: Sequence[Sequence], ncols: int, backend: str | None = None) -> int:
    return len(rref_int(_integer_rows(rows), ncols, backend)[1])


def nullspace(rows: Sequence[Sequence], ncols: int, backend: str | None = None) -> tuple[list[list], list[int]]:
    """Right kernel in echelon form.

    Returns ``(vectors, free_columns)``: vector ``k`` has a 1 at
    ``free_columns[k]`` and 0 at every other free column, so the coordinates of
    any kernel vector in this basis are its entries at the free columns.
    """
    reduced, pivots = rref(rows, ncols, backend)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    vectors = []
    for f in free:
        v: list = [0] * ncols
        v[f] = 1
        for row, pc in zip(reduced, pivots):
            if row[f]:
                v[pc] = -row[f]
        vectors.append(v)
    return vectors, free


def sparse_to_dense(columns: Sequence[Mapping[Hashable, object]]) -> tuple[list[list], list[Hashable]]:
    """Stack sparse column vectors (row-key -> value) into dense rows.

    Row keys are ordered by first appearance, which is deterministic for a
    deterministic column order.
    """
    index: dict = {}
    for col in columns:
        for k in col:
            if k not in index:
                index[k] = len(index)
    rows = [[0] * len(columns) for _ in range(len(index))]
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows[index[k]][j] = v
    return rows, list(index)
