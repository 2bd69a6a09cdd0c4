"""Bar-type (b') complexes of the one-generator free 2as algebra.

For a product ``o`` on the augmentation ideal A,
``b'(a_1, ..., a_n) = sum_{i=1}^{n-1} (-1)^i (a_1, ..., a_i o a_{i+1}, ..., a_n)``.
The complex is graded by total leaf degree ``d``, so each slice is finite.
The 2as complex glues the ``*`` and ``.`` complexes along their common
degree-1 term A.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian

from . import linalg
from .free2as import DEFAULT_LABEL, DOT, STAR, Basis, basis_product, degree_basis

__all__ = [
    "DEFAULT_BOUND",
    "ChainComplexSlice",
    "build_bprime",
    "build_amalgamated",
    "homology_ranks",
    "rank_report",
]

DEFAULT_BOUND = 6
PRODUCTS = {"star": STAR, "dot": DOT, STAR: STAR, DOT: DOT}


@lru_cache(maxsize=None)
def _augmentation_basis(d: int) -> tuple[Basis, ...]:
    return tuple(degree_basis(d, DEFAULT_LABEL))


def _compositions(d: int, n: int):
    if n == 1:
        yield (d,)
        return
    for first in range(1, d - n + 2):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def chain_basis(d: int, n: int) -> tuple[tuple[Basis, ...], ...]:
    """n-tuples of augmentation basis elements of total degree d."""
    out = []
    for comp in _compositions(d, n):
        out.extend(cartesian(*[_augmentation_basis(k) for k in comp]))
    return tuple(out)


def _boundary(op: str, d: int, n: int) -> list[list[int]]:
    """Matrix of b'_n : C_n -> C_{n-1} (rows index C_{n-1})."""
    src = chain_basis(d, n)
    dst = {c: i for i, c in enumerate(chain_basis(d, n - 1))}
    rows = [[0] * len(src) for _ in dst]
    for j, chain in enumerate(src):
        for i in range(1, n):
            merged = chain[:i - 1] + (basis_product(chain[i - 1], chain[i], op),) + chain[i + 1:]
            rows[dst[merged]][j] += -1 if i % 2 else 1
    return rows


@dataclass
class ChainComplexSlice:
    """Degree-``d`` slice: chain dimensions and boundary matrices ``b'_n`` for n = 2..d."""

    product: str
    degree: int
    dims: dict[int, int]
    boundaries: dict[int, list[list[int]]] = field(repr=False)

    def boundary_squared_vanishes(self) -> bool:
        for n in range(3, self.degree + 1):
            a, b = self.boundaries[n - 1], self.boundaries[n]
            inner = len(b)
            for i in range(len(a)):
                row = a[i]
                nz = [(k, row[k]) for k in range(inner) if row[k]]
                for j in range(len(b[0]) if b else 0):
                    if sum(v * b[k][j] for k, v in nz):
                        return False
        return True

    def boundary_ranks(self) -> dict[int, int]:
        return {n: linalg.rank(m, self.dims[n]) if m else 0 for n, m in self.boundaries.items()}

    def ranks(self) -> list[int]:
        """Homology ranks H_1, ..., H_d."""
        br = self.boundary_ranks()
        return [self.dims[n] - br.get(n, 0) - br.get(n + 1, 0) for n in range(1, self.degree + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** (n + 1) * self.dims[n] for n in self.dims)


def _check_degree(d: int, bound: int) -> None:
    if d < 1:
        raise ValueError("degree must be at least 1")
    if d > bound:
        raise ValueError(f"degree {d} exceeds the configured bound {bound}")


def build_bprime(product: str, d: int, bound: int = DEFAULT_BOUND) -> ChainComplexSlice:
    if product not in PRODUCTS:
        raise ValueError(f"unknown product {product!r}")
    _check_degree(d, bound)
    op = PRODUCTS[product]
    dims = {n: len(chain_basis(d, n)) for n in range(1, d + 1)}
    boundaries = {n: _boundary(op, d, n) for n in range(2, d + 1)}
    return ChainComplexSlice("star" if op == STAR else "dot", d, dims, boundaries)


def build_amalgamated(d: int, bound: int = DEFAULT_BOUND) -> ChainComplexSlice:
    """The 2as complex: both b' complexes, sharing the degree-1 chain space."""
    _check_degree(d, bound)
    s, t = build_bprime(STAR, d, bound), build_bprime(DOT, d, bound)
    dims = {1: s.dims[1]}
    dims.update({n: s.dims[n] + t.dims[n] for n in range(2, d + 1)})
    boundaries = {}
    for n in range(2, d + 1):
        a, b = s.boundaries[n], t.boundaries[n]
        if n == 2:
            boundaries[n] = [ra + rb for ra, rb in zip(a, b)]
        else:
            zeros_a = [0] * (len(b[0]) if b else 0)
            zeros_b = [0] * (len(a[0]) if a else 0)
            boundaries[n] = [ra + zeros_a for ra in a] + [zeros_b + rb for rb in b]
    return ChainComplexSlice("2as", d, dims, boundaries)


def homology_ranks(product: str, d: int, bound: int = DEFAULT_BOUND) -> list[int]:
    """Ranks H_1..H_d for ``star``, ``dot`` or the amalgamated ``2as`` complex."""
    if product == "2as":
        return build_amalgamated(d, bound).ranks()
    return build_bprime(product, d, bound).ranks()


def rank_report(product: str, d: int, bound: int = DEFAULT_BOUND) -> str:
    name = "2as" if product == "2as" else ("star" if PRODUCTS[product] == STAR else "dot")
    return json.dumps({"product": name, "degree": d, "ranks": homology_ranks(product, d, bound)})
