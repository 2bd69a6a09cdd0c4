"""B-infinity operations: ``M_pq`` inside any 2as algebra, the relations
``R_ijk``, the free B-infinity algebra on decorated trees, and the expansion of
a tree operation into composites of the generators ``M_pq``.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Hashable, NamedTuple, Sequence

from .errors import ConsistencyError
from .free2as import (
    DEFAULT_LABEL,
    DOT,
    STAR,
    Basis,
    FreeElement,
    _split_labels,
    dot,
    dot_word_form,
    leaf,
    parse_tree,
    star,
    word_form,
)
from .linear import LinComb, accumulate, finish, format_scalar, normalize_scalar
from .projector import project
from .tensor_models import BInftyStructure, Letter, TensorElement, composition_pairs
from .trees import LEAF, PlanarTree

__all__ = [
    "TwoAsOps",
    "FREE_2AS",
    "u2_ops",
    "mpq",
    "mpq_in_2as",
    "rijk_sides",
    "check_Rijk",
    "morphism_from_free",
    "DecoratedTree",
    "BInftyElement",
    "free_compose_mpq",
    "free_mpq",
    "embed",
    "free_structure",
    "Var",
    "Op",
    "Lin",
    "expand_Mt",
    "evaluate",
    "to_sexpr",
]


# --- M_pq in a 2as algebra ------------------------------------------------------


@dataclass(frozen=True)
class TwoAsOps:
    """A 2as algebra: two products on hashable linear elements plus zero."""

    star: Callable
    dot: Callable
    zero: object
    name: str = "2as"


FREE_2AS = TwoAsOps(star, dot, FreeElement.zero(), "free")

_memo: dict = {}
_memo_lock = threading.Lock()


def mpq(ops: TwoAsOps, left: Sequence, right: Sequence):
    """``M_pq(left; right)`` by the recursion
    ``M_pq = (u_1. ... .u_p) * (v_1. ... .v_q) - sum_{k>=2} M_{i_1 j_1} . ... . M_{i_k j_k}``.
    """
    left, right = tuple(left), tuple(right)
    p, q = len(left), len(right)
    if (p, q) == (1, 0):
        return left[0]
    if (p, q) == (0, 1):
        return right[0]
    if p == 0 or q == 0:
        if p == 0 and q == 0:
            raise ValueError("M_pq needs at least one argument")
        return ops.zero
    key = (ops.name, left, right)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    out = ops.star(reduce(ops.dot, left), reduce(ops.dot, right))
    for pairs in composition_pairs(p, q):
        if len(pairs) < 2:
            continue
        term = None
        pa = pb = 0
        for i, j in pairs:
            factor = mpq(ops, left[pa:pa + i], right[pb:pb + j])
            pa += i
            pb += j
            if not factor:
                term = None
                break
            term = factor if term is None else ops.dot(term, factor)
        if term is not None:
            out = out - term
    with _memo_lock:
        _memo[key] = out
    return out


def _elem(x) -> FreeElement:
    if isinstance(x, FreeElement):
        return x
    if isinstance(x, Basis):
        return FreeElement.of(x)
    if isinstance(x, str):
        return FreeElement.of(leaf(x))
    raise TypeError(f"cannot use {x!r} as an element of 2as(V)")


def mpq_in_2as(left: Sequence, right: Sequence) -> FreeElement:
    """``M_pq`` in the free 2as algebra; strings stand for decorated leaves."""
    return mpq(FREE_2AS, [_elem(x) for x in left], [_elem(x) for x in right])


def clear_caches() -> None:
    with _memo_lock:
        _memo.clear()


def u2_ops(structure: BInftyStructure) -> TwoAsOps:
    """The tensor algebra with the product induced by ``structure`` and concatenation."""
    from .tensor_models import concat, star_from_binfty

    return TwoAsOps(
        lambda x, y: star_from_binfty(structure, x, y),
        concat,
        TensorElement.zero(),
        f"u2:{id(structure)}",
    )


def morphism_from_free(ops: TwoAsOps, assign: Callable[[Hashable], object], one) -> Callable[[FreeElement], object]:
    """The 2as morphism out of 2as(V) sending the leaf labelled ``v`` to ``assign(v)``."""
    memo: dict = {}

    def on_basis(b: Basis):
        hit = memo.get(b)
        if hit is not None:
            return hit
        if b.tree is None:
            out = one
        elif b.tree.is_leaf:
            out = assign(b.labels[0])
        elif b.tag == STAR:
            out = reduce(ops.star, [on_basis(f) for f in word_form(b)])
        else:
            out = reduce(ops.dot, [on_basis(f) for f in dot_word_form(b)])
        memo[b] = out
        return out

    def phi(x: FreeElement):
        out = ops.zero
        for b, c in x.items():
            out = out + on_basis(b).scale(c)
        return out

    return phi


# --- the relations R_ijk ------------------------------------------------------


def _composite(ops: TwoAsOps, M: Callable, args: Sequence, pairs, second: Sequence) -> tuple[list, list]:
    """Split ``args``/``second`` by ``pairs`` and apply ``M`` blockwise."""
    out = []
    pa = pb = 0
    for i, j in pairs:
        out.append(M(args[pa:pa + i], second[pb:pb + j]))
        pa += i
        pb += j
    return out


def rijk_sides(i: int, j: int, k: int, args: Sequence, ops: TwoAsOps = FREE_2AS, M: Callable | None = None):
    """Both sides of ``R_ijk`` on ``args`` (length i+j+k).

    Left: sum over composition pairs of (i, j) of ``M_{l,k}(M^l_(i,j)(u; v); w)``.
    Right: sum over composition pairs of (j, k) of ``M_{i,m}(u; M^m_(j,k)(v; w))``.
    """
    if min(i, j, k) < 1:
        raise ValueError("R_ijk needs i, j, k >= 1")
    if len(args) != i + j + k:
        raise ValueError(f"R_{i}{j}{k} takes {i + j + k} arguments")
    M = M or (lambda l, r: mpq(ops, l, r))
    u, v, w = tuple(args[:i]), tuple(args[i:i + j]), tuple(args[i + j:])
    lhs = ops.zero
    for pairs in composition_pairs(i, j):
        inner = _composite(ops, M, u, pairs, v)
        if any(not x for x in inner):
            continue
        lhs = lhs + M(tuple(inner), w)
    rhs = ops.zero
    for pairs in composition_pairs(j, k):
        inner = _composite(ops, M, v, pairs, w)
        if any(not x for x in inner):
            continue
        rhs = rhs + M(u, tuple(inner))
    return lhs, rhs


def random_inputs(n: int, rng: random.Random, max_degree: int = 2) -> list[FreeElement]:
    """``n`` random decorated elements of 2as(V) with distinct label alphabets."""
    from .free2as import multidegree_basis

    out = []
    counter = 0
    for _ in range(n):
        d = rng.randint(1, max_degree)
        labels = [f"v{counter + t}" for t in range(d)]
        counter += d
        basis = [b for b in multidegree_basis(labels) if b.labels == tuple(labels)]
        terms = rng.sample(basis, k=min(len(basis), rng.randint(1, 2)))
        out.append(FreeElement({b: rng.choice([1, -1, 2]) for b in terms}))
    return out


def check_Rijk(i: int, j: int, k: int, samples: int = 3, seed: int = 0, ops: TwoAsOps = FREE_2AS, inputs=None) -> bool:
    """Check ``R_ijk`` on seeded random decorated inputs (or on ``inputs``)."""
    rng = random.Random(seed)
    trials = [inputs] if inputs is not None else [random_inputs(i + j + k, rng) for _ in range(samples)]
    for args in trials:
        lhs, rhs = rijk_sides(i, j, k, args, ops)
        if lhs != rhs:
            return False
    return True


# --- the free B-infinity algebra on trees ------------------------------------


class DecoratedTree(NamedTuple):
    tree: PlanarTree
    labels: tuple

    @property
    def degree(self) -> int:
        return self.tree.degree

    def __str__(self):
        if all(lab == DEFAULT_LABEL for lab in self.labels):
            return self.tree.encoding
        return f"{self.tree.encoding}:{','.join(map(str, self.labels))}"

    def sort_key(self):
        return (self.tree.degree, self.tree.encoding.encode("ascii"), tuple(map(str, self.labels)))

    @classmethod
    def parse(cls, text: str) -> "DecoratedTree":
        text = text.strip()
        if ":" in text:
            tree_text, lab = text.split(":", 1)
            t = parse_tree(tree_text)
            labels = tuple(s.strip() for s in lab.split(","))
        else:
            t = parse_tree(text)
            labels = (DEFAULT_LABEL,) * t.degree
        if len(labels) != t.degree:
            raise ValueError(f"{len(labels)} labels for a tree of degree {t.degree}")
        return cls(t, labels)


class BInftyElement(LinComb):
    """Element of the free B-infinity algebra: combination of decorated trees."""

    __slots__ = ()

    def sorted_items(self, key=None):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{format_scalar(c)} {t}" for t, c in self.sorted_items())


def _as_dtree(x) -> DecoratedTree:
    if isinstance(x, DecoratedTree):
        return x
    if isinstance(x, str):
        if x and (x[0] in "(|"):
            return DecoratedTree.parse(x)
        return DecoratedTree(LEAF, (x,))
    raise TypeError(f"cannot use {x!r} as a decorated tree")


def embed(x) -> FreeElement:
    """Primitive of 2as(V) attached to a B-infinity element: ``t -> e(t*)``."""
    if isinstance(x, DecoratedTree):
        x = BInftyElement.basis(x)
    acc = FreeElement.zero()
    for t, c in x.items():
        acc = acc + project(Basis(t.tree, STAR if not t.tree.is_leaf else DOT, t.labels)).scale(c)
    return acc


_free_memo: dict = {}


def free_compose_mpq(left: Sequence, right: Sequence) -> BInftyElement:
    """``M_pq`` on basis trees: strip the (star) tags of
    ``(e(t_1*). ... .e(t_p*)) * (e(t_{p+1}*). ... .e(t_{p+q}*))``."""
    left = tuple(_as_dtree(x) for x in left)
    right = tuple(_as_dtree(x) for x in right)
    if not left or not right:
        raise ValueError("free M_pq needs p, q >= 1")
    key = (left, right)
    hit = _free_memo.get(key)
    if hit is not None:
        return hit
    lp = reduce(dot, [embed(t) for t in left])
    rp = reduce(dot, [embed(t) for t in right])
    product = star(lp, rp)
    acc: dict = {}
    for b, c in product.items():
        if b.tree is None or b.tag != STAR or b.tree.is_leaf:
            raise ConsistencyError(f"free M_pq has non-star support: {b}")
        accumulate(acc, DecoratedTree(b.tree, b.labels), c)
    out = BInftyElement._raw(finish(acc))
    _free_memo[key] = out
    return out


def free_mpq(left: Sequence[BInftyElement], right: Sequence[BInftyElement]) -> BInftyElement:
    """Multilinear extension of :func:`free_compose_mpq`."""
    args = [x if isinstance(x, BInftyElement) else BInftyElement.basis(_as_dtree(x)) for x in list(left) + list(right)]
    p = len(left)
    partial = [((), 1)]
    for a in args:
        partial = [(ks + (t,), c * d) for ks, c in partial for t, d in a.items()]
    acc: dict = {}
    for ks, c in partial:
        for t, d in free_compose_mpq(ks[:p], ks[p:]).items():
            accumulate(acc, t, c * d)
    return BInftyElement._raw(finish(acc))


def tree_letter(t: DecoratedTree) -> Letter:
    return Letter(f"{t.tree.encoding}:{','.join(map(str, t.labels))}", t.degree)


def letter_tree(a: Letter) -> DecoratedTree:
    return DecoratedTree.parse(a.symbol)


def free_structure() -> BInftyStructure:
    """The free B-infinity algebra as a structure on decorated-tree letters."""

    def op(left, right):
        value = free_compose_mpq([letter_tree(a) for a in left], [letter_tree(a) for a in right])
        return {tree_letter(t): c for t, c in value.items()}

    return BInftyStructure(None, {}, None, True, "free-trees", fallback=op)


# --- expressions and the expansion of M(t) --------------------------------------


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    label: str


@dataclass(frozen=True)
class Op(Expr):
    p: int
    q: int
    left: tuple
    right: tuple


@dataclass(frozen=True)
class Lin(Expr):
    terms: tuple  # ((coeff, Expr), ...)


def evaluate(expr: Expr) -> BInftyElement:
    if isinstance(expr, Var):
        return BInftyElement.basis(DecoratedTree(LEAF, (expr.label,)))
    if isinstance(expr, Op):
        return free_mpq([evaluate(a) for a in expr.left], [evaluate(a) for a in expr.right])
    if isinstance(expr, Lin):
        acc = BInftyElement.zero()
        for c, e in expr.terms:
            acc = acc + evaluate(e).scale(c)
        return acc
    raise TypeError(f"not an expression: {expr!r}")


def _block(args: tuple) -> str:
    if len(args) == 1:
        return to_sexpr(args[0])
    return "(word " + " ".join(to_sexpr(a) for a in args) + ")"


def to_sexpr(expr: Expr) -> str:
    if isinstance(expr, Var):
        return f"(leaf {expr.label})"
    if isinstance(expr, Op):
        return f"(M {expr.p} {expr.q} {_block(expr.left)} {_block(expr.right)})"
    if isinstance(expr, Lin):
        if len(expr.terms) == 1 and expr.terms[0][0] == 1:
            return to_sexpr(expr.terms[0][1])
        return "(+ " + " ".join(f"(* {format_scalar(c)} {to_sexpr(e)})" for c, e in expr.terms) + ")"
    raise TypeError(f"not an expression: {expr!r}")


def _order_key(t: PlanarTree) -> tuple:
    return (len(t.children), tuple(-c.valence for c in t.children))


def _block_args(t: PlanarTree, labels: tuple) -> tuple:
    if t.is_leaf:
        return (Var(labels[0]),)
    parts = _split_labels(Basis(t, STAR, labels))
    return tuple(_expand(c, lab) for c, lab in zip(t.children, parts))


def _add_terms(acc: dict, expr: Expr, coeff) -> None:
    if isinstance(expr, Lin):
        for c, e in expr.terms:
            accumulate(acc, e, c * coeff)
    else:
        accumulate(acc, expr, coeff)


_expand_memo: dict = {}


def _expand(t: PlanarTree, labels: tuple) -> Expr:
    if t.is_leaf:
        return Var(labels[0])
    key = (t, labels)
    hit = _expand_memo.get(key)
    if hit is not None:
        return hit
    kids = t.children
    parts = _split_labels(Basis(t, STAR, labels))
    first, first_labels = kids[0], parts[0]
    left = _block_args(first, first_labels)
    if len(kids) == 2:
        right = _block_args(kids[1], parts[1])
    else:
        rest = PlanarTree(kids[1:])
        right = (_expand(rest, labels[first.degree:]),)
    lead = Op(len(left), len(right), left, right)
    value = evaluate(lead)
    target = DecoratedTree(t, labels)
    if value.coefficient(target) != 1:
        raise ConsistencyError(f"leading operation for {t.encoding} has coefficient {value.coefficient(target)}")
    acc: dict = {lead: 1}
    for s, c in value.items():
        if s == target:
            continue
        if _order_key(s.tree) >= _order_key(t):
            raise ConsistencyError(f"correction term {s} does not decrease the order of {t.encoding}")
        _add_terms(acc, _expand(s.tree, s.labels), -c)
    terms = tuple((normalize_scalar(c), e) for e, c in acc.items() if c)
    out = lead if terms == ((1, lead),) else Lin(terms)
    _expand_memo[key] = out
    return out


def expand_Mt(t: PlanarTree, labels: Sequence | None = None) -> Expr:
    """Express the operation of tree ``t`` through generators ``M_pq``.

    The root is peeled into one generator applied to the operations of the
    branches; every other tree appearing in its value is smaller for the order
    (root valence, then the reversed branch valences), so it is expanded
    recursively and subtracted. Evaluating the result gives ``(t; labels)``.
    """
    if t.is_leaf:
        raise ValueError("the trivial tree carries no operation")
    if labels is None:
        labels = tuple(f"v{i + 1}" for i in range(t.degree))
    labels = tuple(labels)
    if len(labels) != t.degree:
        raise ValueError(f"{len(labels)} labels for a tree of degree {t.degree}")
    return _expand(t, labels)
