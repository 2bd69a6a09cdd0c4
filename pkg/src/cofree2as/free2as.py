"""The free 2-associative algebra on tagged, leaf-decorated planar trees.

A basis element is the unit or a triple ``(tree, tag, labels)``: the tag
marks which product sits at the root (``*`` or ``.``) and ``labels`` decorates
the leaves left to right. Both products of two basis elements are again a
single basis element: graft the two trees under a new root carrying the
product's tag and collapse the edge to each factor whose root already
carries that tag.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, NamedTuple, Sequence

from .linear import LinComb, finish, normalize_scalar
from .trees import LEAF, PlanarTree, enumerate_trees, mirror, parse_tree, schroeder

__all__ = [
    "STAR",
    "DOT",
    "Basis",
    "UNIT",
    "FreeElement",
    "DEFAULT_LABEL",
    "leaf",
    "basis_element",
    "basis_product",
    "star",
    "dot",
    "star_all",
    "dot_all",
    "iota",
    "word_form",
    "from_word_form",
    "dimension",
    "generating_series_check",
    "degree_basis",
    "multidegree_basis",
    "parse_element",
    "format_element",
    "element_to_json",
    "element_from_json",
]

STAR = "*"
DOT = "."
DEFAULT_LABEL = "x"

_TAG_NAMES = {STAR: "star", DOT: "dot"}
_TAG_FROM_NAME = {"star": STAR, "dot": DOT, STAR: STAR, DOT: DOT}


class Basis(NamedTuple):
    """Unit (``tree is None``) or a tagged decorated tree.

    The trivial tree is always stored with the nominal tag ``.`` since the two
    copies of it are identified.
    """

    tree: PlanarTree | None
    tag: str
    labels: tuple

    @property
    def degree(self) -> int:
        return 0 if self.tree is None else self.tree.degree

    @property
    def is_unit(self) -> bool:
        return self.tree is None

    def sort_key(self):
        if self.tree is None:
            return (0, b"", 0, ())
        return (self.tree.degree, self.tree.encoding.encode("ascii"), self.tag != STAR, tuple(map(str, self.labels)))

    def relabel(self, labels: Sequence) -> "Basis":
        return Basis(self.tree, self.tag, tuple(labels[i] for i in self.labels))

    def __str__(self):
        return format_basis(self)


UNIT = Basis(None, "", ())


def basis_element(tree: PlanarTree, tag: str = DOT, labels: Sequence | None = None) -> Basis:
    tag = _TAG_FROM_NAME.get(tag, tag)
    if tag not in (STAR, DOT):
        raise ValueError(f"unknown tag {tag!r}")
    if labels is None:
        labels = (DEFAULT_LABEL,) * tree.degree
    labels = tuple(labels)
    if len(labels) != tree.degree:
        raise ValueError(f"{len(labels)} labels for a tree of degree {tree.degree}")
    if tree.is_leaf:
        tag = DOT
    return Basis(tree, tag, labels)


def leaf(label=DEFAULT_LABEL) -> Basis:
    return Basis(LEAF, DOT, (label,))


def _kids(b: Basis, op: str) -> tuple[PlanarTree, ...]:
    t = b.tree
    if b.tag == op and t.children:
        return t.children
    return (t,)


_product_cache: dict = {}


def basis_product(s: Basis, t: Basis, op: str) -> Basis:
    if s.tree is None:
        return t
    if t.tree is None:
        return s
    key = (s.tree, s.tag, t.tree, t.tag, op)
    tree = _product_cache.get(key)
    if tree is None:
        tree = PlanarTree(_kids(s, op) + _kids(t, op))
        _product_cache[key] = tree
    return Basis(tree, op, s.labels + t.labels)


class FreeElement(LinComb):
    """Element of 2as(V): exact rational combination of :class:`Basis` keys."""

    __slots__ = ()

    @classmethod
    def one(cls) -> "FreeElement":
        return cls._raw({UNIT: 1})

    @classmethod
    def of(cls, b: Basis, coeff=1) -> "FreeElement":
        return cls.basis(b, coeff)

    def degrees(self) -> set[int]:
        return {b.degree for b in self._terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError(f"element is not homogeneous (degrees {sorted(ds)})")
        return ds.pop()

    def counit(self):
        return self._terms.get(UNIT, 0)

    def augmentation_part(self) -> "FreeElement":
        if UNIT not in self._terms:
            return self
        return FreeElement._raw({b: c for b, c in self._terms.items() if b.tree is not None})

    def sorted_items(self, key=None):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        return format_element(self)


def _product(x: FreeElement, y: FreeElement, op: str) -> FreeElement:
    acc: dict = {}
    for s, a in x._terms.items():
        for t, b in y._terms.items():
            k = basis_product(s, t, op)
            acc[k] = acc.get(k, 0) + a * b
    return FreeElement._raw(finish(acc))


def _as_element(x) -> FreeElement:
    if isinstance(x, FreeElement):
        return x
    if isinstance(x, Basis):
        return FreeElement.of(x)
    raise TypeError(f"expected FreeElement or Basis, got {type(x).__name__}")


def star(x, y) -> FreeElement:
    return _product(_as_element(x), _as_element(y), STAR)


def dot(x, y) -> FreeElement:
    return _product(_as_element(x), _as_element(y), DOT)


def star_all(xs: Iterable) -> FreeElement:
    return reduce(star, xs, FreeElement.one())


def dot_all(xs: Iterable) -> FreeElement:
    return reduce(dot, xs, FreeElement.one())


def iota_basis(b: Basis) -> Basis:
    if b.tree is None:
        return b
    return Basis(mirror(b.tree), b.tag, b.labels[::-1])


def iota(x) -> FreeElement:
    """Mirror every tree and reverse its decoration; an involutive anti-automorphism."""
    return _as_element(x).map_keys(iota_basis)


def _split_labels(b: Basis) -> list[tuple]:
    out, pos = [], 0
    for c in b.tree.children:
        out.append(b.labels[pos:pos + c.degree])
        pos += c.degree
    return out


def word_form(b: Basis) -> list[Basis]:
    """Factor ``t*`` as the star-word of its dot-tagged branches."""
    if b.tree is None:
        raise ValueError("word_form is undefined on the unit")
    if b.tree.is_leaf:
        return [b]
    if b.tag != STAR:
        raise ValueError("word_form expects a star-tagged tree")
    return [basis_element(c, DOT, lab) for c, lab in zip(b.tree.children, _split_labels(b))]


def dot_word_form(b: Basis) -> list[Basis]:
    """Factor ``t.`` as the dot-word of its star-tagged branches."""
    if b.tree is None:
        raise ValueError("dot_word_form is undefined on the unit")
    if b.tree.is_leaf:
        return [b]
    if b.tag != DOT:
        raise ValueError("dot_word_form expects a dot-tagged tree")
    return [basis_element(c, STAR, lab) for c, lab in zip(b.tree.children, _split_labels(b))]


def from_word_form(word: Sequence[Basis]) -> Basis:
    """Inverse of :func:`word_form`: star-multiply dot-tagged trees."""
    if not word:
        return UNIT
    out = UNIT
    for b in word:
        if b.tree is None or (b.tag != DOT and not b.tree.is_leaf):
            raise ValueError("from_word_form expects dot-tagged trees")
        out = basis_product(out, b, STAR)
    return out


def dimension(n: int) -> int:
    """Dimension of the degree-n part of 2as on one generator."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n <= 1:
        return 1
    return 2 * schroeder(n - 1)


def _series_mul(a: list, b: list, order: int) -> list:
    out = [0] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai:
            for j, bj in enumerate(b[: order + 1 - i]):
                out[i + j] += ai * bj
    return out


def _series_inverse(a: list, order: int) -> list:
    if a[0] != 1:
        raise ValueError("series must have constant term 1")
    inv = [0] * (order + 1)
    inv[0] = 1
    for n in range(1, order + 1):
        inv[n] = -sum(a[k] * inv[n - k] for k in range(1, n + 1) if k < len(a))
    return inv


def generating_series_check(order: int) -> bool:
    """Check sum dim(2as_n) x^n == 1/(1 - x C(x)) up to ``order``."""
    dims = [dimension(n) for n in range(order + 1)]
    xc = [0] + [schroeder(n) for n in range(order)]
    one_minus = [1 - xc[0]] + [-c for c in xc[1:]]
    return dims == _series_inverse(one_minus, order)


def degree_basis(n: int, label=DEFAULT_LABEL) -> list[Basis]:
    """Canonical basis of 2as_n on one generator."""
    if n == 0:
        return [UNIT]
    out = []
    for t in enumerate_trees(n):
        labs = (label,) * n
        if t.is_leaf:
            out.append(Basis(t, DOT, labs))
        else:
            out.append(Basis(t, STAR, labs))
            out.append(Basis(t, DOT, labs))
    return out


def multidegree_basis(labels: Sequence) -> list[Basis]:
    """Basis of the part of 2as(V) whose leaf labels form the multiset ``labels``."""
    labels = tuple(labels)
    if not labels:
        return [UNIT]
    n = len(labels)
    words = sorted(set(itertools.permutations(labels)), key=lambda w: tuple(map(str, w)))
    out = []
    for t in enumerate_trees(n):
        tags = (DOT,) if t.is_leaf else (STAR, DOT)
        for tag in tags:
            for w in words:
                out.append(Basis(t, tag, w))
    return out


# --- text and JSON forms -------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def format_basis(b: Basis, show_labels: bool | None = None) -> str:
    if b.tree is None:
        return "1"
    text = b.tree.encoding
    if not b.tree.is_leaf:
        text += b.tag
    if show_labels is None:
        show_labels = any(lab != DEFAULT_LABEL for lab in b.labels)
    if show_labels:
        text += ":" + ",".join(str(lab) for lab in b.labels)
    return text


def format_element(x: FreeElement) -> str:
    if not x:
        return "0"
    return " + ".join(f"{c} {format_basis(b)}" for b, c in x.sorted_items())


def _parse_basis(text: str) -> Basis:
    text = text.strip()
    if text == "1":
        return UNIT
    labels = None
    if ":" in text:
        text, lab_text = text.split(":", 1)
        labels = tuple(s.strip() for s in lab_text.split(","))
        for lab in labels:
            if not _IDENT.match(lab):
                raise ValueError(f"bad label {lab!r}")
    tag = None
    if text and text[-1] in (STAR, DOT):
        tag, text = text[-1], text[:-1]
    tree = parse_tree(text)
    if tag is None:
        if not tree.is_leaf:
            raise ValueError(f"tree {text} needs a root tag '*' or '.'")
        tag = DOT
    return basis_element(tree, tag, labels)


def _parse_coeff(text: str):
    try:
        return normalize_scalar(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad coefficient {text!r}") from exc


def parse_element(text: str) -> FreeElement:
    """Parse ``rational basis ("+" rational basis)*``; the coefficient may be omitted."""
    text = text.strip()
    if not text:
        raise ValueError("empty element")
    if text == "0":
        return FreeElement.zero()
    acc: dict = {}
    for chunk in text.split("+"):
        parts = chunk.split()
        if len(parts) == 2:
            c, b = _parse_coeff(parts[0]), _parse_basis(parts[1])
        elif len(parts) == 1:
            tok = parts[0]
            if tok[0] in "(|" or tok == "1":
                c, b = 1, _parse_basis(tok)
            else:
                c, b = _parse_coeff(tok), UNIT
        else:
            raise ValueError(f"cannot parse term {chunk.strip()!r}")
        acc[b] = acc.get(b, 0) + c
    return FreeElement(acc)


def element_to_json(x: FreeElement) -> list[dict]:
    out = []
    for b, c in x.sorted_items():
        out.append({
            "coeff": str(Fraction(c)),
            "tree": None if b.tree is None else b.tree.encoding,
            "tag": None if b.tree is None else _TAG_NAMES[b.tag],
            "labels": [str(lab) for lab in b.labels],
        })
    return out


def element_from_json(data: list[dict]) -> FreeElement:
    acc: dict = {}
    for term in data:
        c = _parse_coeff(str(term["coeff"]))
        if term.get("tree") is None:
            b = UNIT
        else:
            b = basis_element(parse_tree(term["tree"]), term.get("tag") or DOT, term.get("labels") or None)
        acc[b] = acc.get(b, 0) + c
    return FreeElement(acc)
