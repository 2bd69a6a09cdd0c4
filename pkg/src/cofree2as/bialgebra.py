"""The two coproducts of 2as(V), counit, antipode and primitives.

``delta`` is multiplicative for ``*`` and unital infinitesimal for ``.``;
``delta_second`` is the same with the two products exchanged. Both are
computed from their defining rules by recursion over the word form of a
basis tree, memoized per tree shape with positional labels and relabeled
afterwards (the rules are natural in the decorations).
"""

from __future__ import annotations

import threading
from typing import Sequence

from . import linalg
from .free2as import (
    DEFAULT_LABEL,
    DOT,
    STAR,
    UNIT,
    Basis,
    FreeElement,
    basis_product,
    degree_basis,
    dot,
    dot_word_form,
    format_basis,
    iota_basis,
    multidegree_basis,
    star,
    word_form,
)
from .linear import Tensor, accumulate, finish

__all__ = [
    "DELTA",
    "DELTA2",
    "TensorSquare",
    "tensor",
    "tensor_product",
    "twist",
    "delta",
    "delta_second",
    "coproduct",
    "counit",
    "reduced_delta",
    "iterated_reduced_delta",
    "filtration_degree",
    "is_primitive",
    "primitive_basis",
    "antipode",
    "tag_swap",
    "coassociativity_defect",
    "compatibility_defect",
    "iota_defect",
    "format_tensor",
]

DELTA = "delta"
DELTA2 = "delta2"

_OTHER = {STAR: DOT, DOT: STAR}
# For each coproduct, the product it is multiplicative for.
_HOPF_PRODUCT = {DELTA: STAR, DELTA2: DOT}


class TensorSquare(Tensor):
    """Element of 2as(V) (x) 2as(V); keys are pairs of :class:`Basis`."""

    __slots__ = ()

    def __str__(self):
        return format_tensor(self)


def format_tensor(x: Tensor) -> str:
    if not x:
        return "0"
    items = sorted(x.items(), key=lambda kv: tuple(b.sort_key() for b in kv[0]))
    return " + ".join(f"{c} " + " (x) ".join(format_basis(b) for b in key) for key, c in items)


def tensor(*xs) -> Tensor:
    """Pure tensor of elements (or basis keys)."""
    parts = [[(x, 1)] if isinstance(x, Basis) else list(x.items()) for x in xs]
    acc: dict = {}
    partial = [((), 1)]
    for part in parts:
        partial = [(k + (b,), c * d) for k, c in partial for b, d in part]
    for k, c in partial:
        accumulate(acc, k, c)
    cls = TensorSquare if len(xs) == 2 else Tensor
    return cls._raw(finish(acc))


def _pair_mul(a: dict, b: dict, op: str) -> dict:
    acc: dict = {}
    for (a1, a2), c in a.items():
        for (b1, b2), d in b.items():
            accumulate(acc, (basis_product(a1, b1, op), basis_product(a2, b2, op)), c * d)
    return acc


def tensor_product(a: Tensor, b: Tensor, op: str) -> Tensor:
    """Componentwise product on tensor powers: (x(x)y)o(x'(x)y') = xox' (x) yoy'."""
    acc: dict = {}
    for ka, c in a.items():
        for kb, d in b.items():
            if len(ka) != len(kb):
                raise ValueError("tensor arities differ")
            accumulate(acc, tuple(basis_product(s, t, op) for s, t in zip(ka, kb)), c * d)
    return type(a)._raw(finish(acc))


def twist(x: Tensor) -> Tensor:
    return x.map_keys(lambda k: k[::-1])


# --- coproduct recursion -------------------------------------------------

_shape_cache: dict = {}
_shape_lock = threading.Lock()


def _shape_coproduct(which: str, tree, tag: str) -> dict:
    key = (which, tree, tag)
    hit = _shape_cache.get(key)
    if hit is not None:
        return hit
    b = Basis(tree, tag, tuple(range(tree.degree)))
    if tree.is_leaf:
        out = {(b, UNIT): 1, (UNIT, b): 1}
    else:
        factors = word_form(b) if tag == STAR else dot_word_form(b)
        if tag == _HOPF_PRODUCT[which]:
            out = {(UNIT, UNIT): 1}
            for f in factors:
                out = _pair_mul(out, _basis_coproduct(which, f), tag)
        else:
            head = factors[0]
            out = _basis_coproduct(which, head)
            for f in factors[1:]:
                df = _basis_coproduct(which, f)
                acc: dict = {}
                for (a1, a2), c in df.items():
                    accumulate(acc, (basis_product(head, a1, tag), a2), c)
                for (a1, a2), c in out.items():
                    accumulate(acc, (a1, basis_product(a2, f, tag)), c)
                accumulate(acc, (head, f), -1)
                head = basis_product(head, f, tag)
                out = acc
        out = finish(out)
    with _shape_lock:
        _shape_cache.setdefault(key, out)
    return out


def _basis_coproduct(which: str, b: Basis) -> dict:
    if b.tree is None:
        return {(UNIT, UNIT): 1}
    shape = _shape_coproduct(which, b.tree, b.tag)
    labels = b.labels
    if labels == tuple(range(len(labels))):
        return shape
    acc: dict = {}
    for (s, t), c in shape.items():
        accumulate(acc, (s.relabel(labels), t.relabel(labels)), c)
    return acc


def coproduct(x, which: str = DELTA) -> TensorSquare:
    if which not in _HOPF_PRODUCT:
        raise ValueError(f"unknown coproduct {which!r}")
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    acc: dict = {}
    for b, c in x.items():
        for k, d in _basis_coproduct(which, b).items():
            accumulate(acc, k, c * d)
    return TensorSquare._raw(finish(acc))


def delta(x) -> TensorSquare:
    """Coproduct multiplicative for ``*`` and unital infinitesimal for ``.``."""
    return coproduct(x, DELTA)


def delta_second(x) -> TensorSquare:
    """Coproduct multiplicative for ``.`` and unital infinitesimal for ``*``."""
    return coproduct(x, DELTA2)


def counit(x):
    if isinstance(x, Basis):
        return 1 if x.tree is None else 0
    return x.counit()


def _reduced_basis(which: str, b: Basis) -> dict:
    if b.tree is None:
        return {}
    return {k: c for k, c in _basis_coproduct(which, b).items() if k[0].tree is not None and k[1].tree is not None}


def reduced_delta(x, which: str = DELTA) -> TensorSquare:
    """Coproduct minus the ``x(x)1 + 1(x)x`` part, on the augmentation ideal."""
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    acc: dict = {}
    for b, c in x.items():
        for k, d in _reduced_basis(which, b).items():
            accumulate(acc, k, c * d)
    return TensorSquare._raw(finish(acc))


def iterated_reduced_delta(x, n: int, which: str = DELTA) -> Tensor:
    """``n``-fold reduced coproduct, iterated on the leftmost factor; an (n+1)-tensor.

    ``n = 0`` returns the augmentation part of ``x`` as a 1-tensor.
    """
    if n < 0:
        raise ValueError("iteration order must be nonnegative")
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    cur: dict = {(b,): c for b, c in x.items() if b.tree is not None}
    for _ in range(n):
        acc: dict = {}
        for key, c in cur.items():
            for (s, t), d in _reduced_basis(which, key[0]).items():
                accumulate(acc, (s, t) + key[1:], c * d)
        cur = acc
        if not cur:
            break
    return Tensor._raw(finish(cur))


def filtration_degree(x, which: str = DELTA) -> int:
    """Least r with x in F_r; F_0 is the scalars."""
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    if not x.augmentation_part():
        return 0
    r = 1
    while iterated_reduced_delta(x, r, which):
        r += 1
    return r


def is_primitive(x, which: str = DELTA) -> bool:
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    return not x.counit() and not reduced_delta(x, which)


def primitive_basis(n: int, labels: Sequence | None = None, which: str = DELTA) -> list[FreeElement]:
    """Echelon basis of the primitives of degree ``n``.

    With ``labels`` the computation runs on the multidegree of that multiset of
    labels; otherwise on the single-generator part.
    """
    if n < 1:
        raise ValueError("primitives live in degree >= 1")
    basis = multidegree_basis(labels) if labels is not None else degree_basis(n, DEFAULT_LABEL)
    if labels is not None and len(labels) != n:
        raise ValueError("label multiset size must equal the degree")
    columns = [_reduced_basis(which, b) for b in basis]
    rows, _ = linalg.sparse_to_dense(columns)
    vectors, _ = linalg.nullspace(rows, len(basis))
    return [FreeElement({b: c for b, c in zip(basis, v) if c}) for v in vectors]


def antipode(x) -> FreeElement:
    """Antipode of (2as(V), *, delta): S(1)=1 and S = sum_n (-1)^(n+1) *^n reduced-delta^n."""
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    acc: dict = {}
    if x.counit():
        acc[UNIT] = x.counit()
    n = 0
    while True:
        t = iterated_reduced_delta(x, n)
        if not t:
            break
        sign = -1 if n % 2 == 0 else 1
        for key, c in t.items():
            prod = UNIT
            for b in key:
                prod = basis_product(prod, b, STAR)
            accumulate(acc, prod, sign * c)
        n += 1
    return FreeElement._raw(finish(acc))


_swap_cache: dict = {}


def _tag_swap_basis(b: Basis) -> Basis:
    if b.tree is None or b.tree.is_leaf:
        return b
    hit = _swap_cache.get(b)
    if hit is not None:
        return hit
    factors = word_form(b) if b.tag == STAR else dot_word_form(b)
    new_op = _OTHER[b.tag]
    out = UNIT
    for f in factors:
        out = basis_product(out, _tag_swap_basis(f), new_op)
    _swap_cache[b] = out
    return out


def tag_swap(x) -> FreeElement:
    """Algebra isomorphism fixing V and exchanging ``*`` with ``.``."""
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    return x.map_keys(_tag_swap_basis)


# --- axiom checks ----------------------------------------------------------


def coassociativity_defect(x, which: str = DELTA) -> Tensor:
    """(D (x) Id)D(x) - (Id (x) D)D(x); zero iff coassociative on x."""
    d = coproduct(x, which)
    co = lambda b: _basis_coproduct(which, b)
    left: dict = {}
    right: dict = {}
    for (s, t), c in d.items():
        for (s1, s2), e in co(s).items():
            accumulate(left, (s1, s2, t), c * e)
        for (t1, t2), e in co(t).items():
            accumulate(right, (s, t1, t2), c * e)
    for k, c in right.items():
        accumulate(left, k, -c)
    return Tensor._raw(finish(left))


def compatibility_defect(x, y, op: str, which: str = DELTA) -> TensorSquare:
    """Defect of the Hopf rule (if ``op`` is multiplicative for ``which``) or of the
    unital infinitesimal rule (otherwise) on the pair ``(x, y)``."""
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    if isinstance(y, Basis):
        y = FreeElement.of(y)
    xy = star(x, y) if op == STAR else dot(x, y)
    lhs = coproduct(xy, which)
    dx, dy = coproduct(x, which), coproduct(y, which)
    if _HOPF_PRODUCT[which] == op:
        rhs = tensor_product(dx, dy, op)
    else:
        one = FreeElement.one()
        rhs = (
            tensor_product(tensor(x, one), dy, op)
            + tensor_product(dx, tensor(one, y), op)
            - tensor(x, y)
        )
    return TensorSquare._raw((lhs - rhs).terms)


def iota_defect(x, which: str = DELTA) -> TensorSquare:
    """D(iota x) - twist((iota (x) iota) D(x))."""
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    lhs = coproduct(x.map_keys(iota_basis), which)
    rhs = coproduct(x, which).map_keys(lambda k: (iota_basis(k[1]), iota_basis(k[0])))
    return TensorSquare._raw((lhs - rhs).terms)
