"""Convolution of graded endomaps, the idempotent ``e`` and the isomorphisms F, G.

A *model* is a connected graded bialgebra given by a basis per degree, a
product and a coproduct on basis keys. Two models ship here: the free 2as
algebra (any choice of product and coproduct) and the tensor algebra over a
graded alphabet with concatenation and deconcatenation.

For a connected unital infinitesimal bialgebra,
``e = J - J*J + J*J*J - ...`` with ``J = Id - unit o counit`` projects onto the
primitives, and ``G(x) = sum_n e^(x)n o rdelta^(n-1)(x)`` identifies the
algebra with the tensor algebra on its primitives, with inverse ``F`` given by
multiplying letters.
"""

from __future__ import annotations

import itertools
import threading
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from . import linalg
from .bialgebra import DELTA, _basis_coproduct
from .errors import ConsistencyError
from .free2as import DEFAULT_LABEL, DOT, STAR, UNIT, Basis, FreeElement, basis_product, degree_basis, multidegree_basis
from .linear import accumulate, finish, format_scalar
from .tensor_models import GradedBasis, Letter, TensorElement

__all__ = [
    "Free2asModel",
    "TfcModel",
    "GradedEndoMap",
    "convolution",
    "ui_defect",
    "idempotent_e",
    "e_recursive",
    "project",
    "omega",
    "PrimitiveData",
    "primitive_data",
    "iso_G",
    "iso_F",
    "tensor_dimension",
]


# --- models --------------------------------------------------------------


class Free2asModel:
    """2as(V) with product ``op`` and coproduct ``which``.

    ``labels=None`` is the one-generator algebra; otherwise degree ``d`` is
    spanned by trees decorated with every word of length ``d`` in ``labels``.
    """

    def __init__(self, op: str = DOT, which: str = DELTA, labels: Sequence | None = None):
        if op not in (STAR, DOT):
            raise ValueError(f"unknown product {op!r}")
        self.op = op
        self.which = which
        self.labels = tuple(labels) if labels is not None else None
        self.unit = UNIT
        self._basis: dict[int, list] = {}
        self.name = f"2as[{op},{which}]"

    def basis(self, d: int) -> list:
        if d not in self._basis:
            if self.labels is None:
                self._basis[d] = degree_basis(d, DEFAULT_LABEL)
            elif d == 0:
                self._basis[d] = [UNIT]
            else:
                seen = []
                for multiset in itertools.combinations_with_replacement(self.labels, d):
                    seen.extend(multidegree_basis(multiset))
                self._basis[d] = seen
        return self._basis[d]

    @staticmethod
    def degree(k: Basis) -> int:
        return k.degree

    def product(self, a: Basis, b: Basis) -> dict:
        return {basis_product(a, b, self.op): 1}

    def product_key(self, a: Basis, b: Basis) -> Basis:
        return basis_product(a, b, self.op)

    def coproduct(self, k: Basis) -> dict:
        return _basis_coproduct(self.which, k)

    def to_element(self, d: Mapping) -> FreeElement:
        return FreeElement(d)


class TfcModel:
    """Tensor algebra on a graded alphabet: concatenation and deconcatenation."""

    def __init__(self, alphabet: GradedBasis):
        self.alphabet = alphabet
        self.unit = ()
        self._basis: dict[int, list] = {}
        self.name = "Tfc"

    def basis(self, d: int) -> list:
        if d not in self._basis:
            self._basis[d] = self.alphabet.words(d)
        return self._basis[d]

    @staticmethod
    def degree(k: tuple) -> int:
        return sum(a.degree for a in k)

    def product(self, a: tuple, b: tuple) -> dict:
        return {a + b: 1}

    def product_key(self, a: tuple, b: tuple) -> tuple:
        return a + b

    def coproduct(self, k: tuple) -> dict:
        return {(k[:i], k[i:]): 1 for i in range(len(k) + 1)}

    def to_element(self, d: Mapping) -> TensorElement:
        return TensorElement(d)


def _reduced(model, k) -> dict:
    u = model.unit
    return {pair: c for pair, c in model.coproduct(k).items() if pair[0] != u and pair[1] != u}


def _multiply(model, keys: Sequence) -> dict:
    """nu-product of a sequence of basis keys."""
    fast = getattr(model, "product_key", None)
    if fast is not None:
        out = model.unit
        for k in keys:
            out = fast(out, k)
        return {out: 1}
    acc = {model.unit: 1}
    for k in keys:
        nxt: dict = {}
        for a, c in acc.items():
            for b, d in model.product(a, k).items():
                accumulate(nxt, b, c * d)
        acc = nxt
    return acc


def _lin(fn: Callable[[Hashable], Mapping], x: Mapping) -> dict:
    acc: dict = {}
    for k, c in x.items():
        for kk, d in fn(k).items():
            accumulate(acc, kk, c * d)
    return finish(acc)


# --- graded endomaps ---------------------------------------------------------


class GradedEndoMap:
    """Degree-preserving linear map on a model, given on basis keys and memoized."""

    def __init__(self, model, fn: Callable[[Hashable], Mapping], name: str = "f"):
        self.model = model
        self._fn = fn
        self._memo: dict = {}
        self._lock = threading.Lock()
        self.name = name

    def __call__(self, k) -> dict:
        hit = self._memo.get(k)
        if hit is None:
            hit = finish(dict(self._fn(k)))
            with self._lock:
                self._memo.setdefault(k, hit)
        return hit

    def apply(self, x: Mapping) -> dict:
        return _lin(self, x)

    @classmethod
    def identity(cls, model) -> "GradedEndoMap":
        return cls(model, lambda k: {k: 1}, "Id")

    @classmethod
    def unit_counit(cls, model) -> "GradedEndoMap":
        u = model.unit
        return cls(model, lambda k: {u: 1} if k == u else {}, "uc")

    @classmethod
    def augmentation_projection(cls, model) -> "GradedEndoMap":
        u = model.unit
        return cls(model, lambda k: {} if k == u else {k: 1}, "J")

    def compose(self, other: "GradedEndoMap") -> "GradedEndoMap":
        """``self o other``."""
        return GradedEndoMap(self.model, lambda k: self.apply(other(k)), f"{self.name}o{other.name}")

    def __add__(self, other: "GradedEndoMap") -> "GradedEndoMap":
        def fn(k):
            acc = dict(self(k))
            for kk, c in other(k).items():
                accumulate(acc, kk, c)
            return acc

        return GradedEndoMap(self.model, fn, f"({self.name}+{other.name})")

    def scale(self, c) -> "GradedEndoMap":
        return GradedEndoMap(self.model, lambda k: {kk: c * v for kk, v in self(k).items()}, f"{c}{self.name}")

    def __sub__(self, other: "GradedEndoMap") -> "GradedEndoMap":
        return self + other.scale(-1)

    def matrix(self, d: int) -> list[list]:
        """Dense matrix on the degree-``d`` basis (column j = image of basis[j])."""
        basis = self.model.basis(d)
        index = {k: i for i, k in enumerate(basis)}
        rows = [[0] * len(basis) for _ in basis]
        for j, k in enumerate(basis):
            for kk, c in self(k).items():
                if kk not in index:
                    raise ConsistencyError(f"{self.name} does not preserve degree {d}")
                rows[index[kk]][j] = c
        return rows

    def rank(self, d: int) -> int:
        return linalg.rank(self.matrix(d), len(self.model.basis(d)))

    def dump(self, d: int) -> str:
        """Sparse triplet text form (see README): header, then ``row col value`` lines."""
        m = self.matrix(d)
        n = len(m)
        lines = [f"%%cofree2as-matrix name={self.name} degree={d} rows={n} cols={n}"]
        for i, row in enumerate(m):
            for j, v in enumerate(row):
                if v:
                    lines.append(f"{i} {j} {format_scalar(v)}")
        return "\n".join(lines) + "\n"


def convolution(f: GradedEndoMap, g: GradedEndoMap, model=None) -> GradedEndoMap:
    """``nu o (f (x) g) o Delta`` for the model's product and coproduct."""
    model = model or f.model

    def fn(k):
        acc: dict = {}
        for (a, b), c in model.coproduct(k).items():
            fa = f(a)
            if not fa:
                continue
            gb = g(b)
            for x, cx in fa.items():
                for y, cy in gb.items():
                    for z, cz in model.product(x, y).items():
                        accumulate(acc, z, c * cx * cy * cz)
        return acc

    return GradedEndoMap(model, fn, f"({f.name}*{g.name})")


# --- the idempotent ----------------------------------------------------------


def ui_defect(model, a, b) -> dict:
    """Defect of ``D(ab) = (a(x)1)D(b) + D(a)(1(x)b) - a(x)b`` on basis keys."""
    lhs: dict = {}
    for ab, c in model.product(a, b).items():
        for k, d in model.coproduct(ab).items():
            accumulate(lhs, k, c * d)
    for (b1, b2), c in model.coproduct(b).items():
        for x, d in model.product(a, b1).items():
            accumulate(lhs, (x, b2), -c * d)
    for (a1, a2), c in model.coproduct(a).items():
        for y, d in model.product(a2, b).items():
            accumulate(lhs, (a1, y), -c * d)
    accumulate(lhs, (a, b), 1)
    return finish(lhs)


def _probe_pairs(model, max_degree: int = 3) -> Iterable[tuple]:
    keys = [k for d in range(1, max_degree) for k in model.basis(d)]
    for a in keys:
        for b in keys:
            if model.degree(a) + model.degree(b) <= max_degree:
                yield a, b


def idempotent_e(model, check: bool = True) -> GradedEndoMap:
    """``e = sum_r (-1)^r nu^r o rdelta^r`` on the augmentation ideal, ``e(1) = 0``."""
    if check:
        for a, b in _probe_pairs(model):
            if ui_defect(model, a, b):
                raise ValueError("not unital infinitesimal: the relation fails on a probe pair")
    u = model.unit

    def fn(k):
        if k == u:
            return {}
        acc: dict = {}
        layer = {(k,): 1}
        sign = 1
        while layer:
            for keys, c in layer.items():
                for z, d in _multiply(model, keys).items():
                    accumulate(acc, z, sign * c * d)
            nxt: dict = {}
            for keys, c in layer.items():
                for (s, t), d in _reduced(model, keys[0]).items():
                    accumulate(nxt, (s, t) + keys[1:], c * d)
            layer = nxt
            sign = -sign
        return acc

    return GradedEndoMap(model, fn, "e")


def e_recursive(model) -> GradedEndoMap:
    """Independent form ``e(x) = x - x_(1) e(x_(2))`` (sum over the reduced coproduct)."""
    u = model.unit
    holder: dict = {}

    def fn(k):
        if k == u:
            return {}
        acc = {k: 1}
        for (s, t), c in _reduced(model, k).items():
            for z, d in holder["e"](t).items():
                for w, f in model.product(s, z).items():
                    accumulate(acc, w, -c * d * f)
        return acc

    e = GradedEndoMap(model, fn, "e_rec")
    holder["e"] = e
    return e


_E_2AS: dict = {}


def _free_e() -> GradedEndoMap:
    e = _E_2AS.get("e")
    if e is None:
        e = idempotent_e(Free2asModel(DOT, DELTA), check=False)
        _E_2AS["e"] = e
    return e


def project(x) -> FreeElement:
    """Apply ``e`` (for ``.`` and ``delta``) to an element of 2as(V)."""
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    return FreeElement(_free_e().apply(x.terms))


def omega(tree, labels: Sequence | None = None) -> FreeElement:
    """``e(t*) - t*``; always supported on dot-tagged trees."""
    if tree.degree < 2:
        raise ValueError("omega needs a tree of degree >= 2")
    if labels is None:
        labels = (DEFAULT_LABEL,) * tree.degree
    b = Basis(tree, STAR, tuple(labels))
    out = project(b) - FreeElement.of(b)
    bad = [k for k in out if k.tag != DOT or k.tree is None or k.tree.is_leaf]
    if bad:
        raise ConsistencyError(f"omega has non-dot support: {bad[0]}")
    return out


# --- F and G ---------------------------------------------------------------


class PrimitiveData:
    """Echelon basis of the primitives per degree, with coordinates."""

    def __init__(self, model, bound: int):
        self.model = model
        self.bound = bound
        self.vectors: dict[int, list[dict]] = {}
        self.letters: dict[int, list[Letter]] = {}
        self._free_keys: dict[int, list] = {}
        for d in range(1, bound + 1):
            basis = model.basis(d)
            columns = [_reduced(model, k) for k in basis]
            rows, _ = linalg.sparse_to_dense(columns)
            if not rows:
                vecs, free = [[1 if i == j else 0 for i in range(len(basis))] for j in range(len(basis))], list(range(len(basis)))
            else:
                vecs, free = linalg.nullspace(rows, len(basis))
            self.vectors[d] = [{basis[i]: c for i, c in enumerate(v) if c} for v in vecs]
            self._free_keys[d] = [basis[f] for f in free]
            self.letters[d] = [Letter(f"P{d}.{i}", d) for i in range(len(vecs))]
        if len(self.vectors.get(1, [])) != len(model.basis(1)):
            raise ConsistencyError("degree-1 primitives do not span degree 1")
        self.by_letter = {a: self.vectors[a.degree][i] for d in self.letters for i, a in enumerate(self.letters[d])}

    def dimensions(self) -> list[int]:
        return [len(self.vectors[d]) for d in range(1, self.bound + 1)]

    def alphabet(self) -> GradedBasis:
        return GradedBasis({d: [a.symbol for a in self.letters[d]] for d in self.letters})

    def coordinates(self, x: Mapping, d: int, check: bool = True) -> dict:
        """Coordinates of a primitive of degree ``d`` as letter -> coefficient."""
        coords = {}
        for a, key in zip(self.letters[d], self._free_keys[d]):
            c = x.get(key, 0)
            if c:
                coords[a] = c
        if check:
            acc = dict(x)
            for a, c in coords.items():
                for k, v in self.by_letter[a].items():
                    accumulate(acc, k, -c * v)
            if finish(acc):
                raise ConsistencyError(f"element of degree {d} is not primitive")
        return coords


def primitive_data(model, bound: int) -> PrimitiveData:
    return PrimitiveData(model, bound)


def iso_G(model, prims: PrimitiveData, e: GradedEndoMap | None = None, check: bool = True) -> Callable[[Mapping], TensorElement]:
    """``G(x) = sum_{n>=1} e^(x)n o rdelta^(n-1)(x)`` as words in the primitive letters; G(1) = 0."""
    e = e or idempotent_e(model, check=False)
    u = model.unit
    deg = model.degree

    coord_memo: dict = {}

    def coords_of(part) -> dict:
        hit = coord_memo.get(part)
        if hit is None:
            hit = prims.coordinates(e(part), deg(part), check)
            coord_memo[part] = hit
        return hit

    def on_key(k) -> dict:
        if k == u:
            return {}
        if deg(k) > prims.bound:
            raise ValueError(f"degree {deg(k)} exceeds the primitive data bound {prims.bound}")
        acc: dict = {}
        layer = {(k,): 1}
        while layer:
            for keys, c in layer.items():
                words = {(): c}
                for part in keys:
                    coords = coords_of(part)
                    words = {w + (a,): cw * ca for w, cw in words.items() for a, ca in coords.items()}
                    if not words:
                        break
                for w, c2 in words.items():
                    accumulate(acc, w, c2)
            nxt: dict = {}
            for keys, c in layer.items():
                for (s, t), d in _reduced(model, keys[-1]).items():
                    accumulate(nxt, keys[:-1] + (s, t), c * d)
            layer = nxt
        return finish(acc)

    memo: dict = {}

    def G(x: Mapping) -> TensorElement:
        acc: dict = {}
        for k, c in x.items():
            if k not in memo:
                memo[k] = on_key(k)
            for w, d in memo[k].items():
                accumulate(acc, w, c * d)
        return TensorElement._raw(finish(acc))

    return G


def iso_F(model, prims: PrimitiveData) -> Callable[[Mapping], dict]:
    """``F(a_1 ... a_n) = a_1 . ... . a_n`` (product of the primitive vectors)."""

    memo: dict = {(): {model.unit: 1}}
    fast = getattr(model, "product_key", None)

    def on_word(w: tuple) -> dict:
        hit = memo.get(w)
        if hit is not None:
            return hit
        head, v = on_word(w[:-1]), prims.by_letter[w[-1]]
        acc: dict = {}
        for x, c in head.items():
            for y, d in v.items():
                if fast is not None:
                    accumulate(acc, fast(x, y), c * d)
                else:
                    for z, f in model.product(x, y).items():
                        accumulate(acc, z, c * d * f)
        hit = memo[w] = finish(acc)
        return hit

    def F(x: Mapping) -> dict:
        return _lin(on_word, x)

    return F


def tensor_dimension(prim_dims: Sequence[int], n: int) -> int:
    """Dimension of the degree-``n`` part of T(P) with ``prim_dims[d-1] = dim P_d``."""
    dims = [1] + [0] * n
    for m in range(1, n + 1):
        dims[m] = sum(prim_dims[d - 1] * dims[m - d] for d in range(1, min(m, len(prim_dims)) + 1))
    return dims[n]
