"""Tensor algebra and tensor coalgebra models.

Words over a graded alphabet with deconcatenation, concatenation, shuffle,
quasi-shuffle, the associative product induced on the tensor coalgebra by a
family of operations ``M_pq``, and the multinomial map ``theta`` from the
one-generator free 2as algebra to the shuffle algebra.
"""

from __future__ import annotations

import json
import threading
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .free2as import DOT, STAR, Basis, FreeElement
from .linear import LinComb, Tensor, accumulate, finish, normalize_scalar

__all__ = [
    "Letter",
    "GradedBasis",
    "TensorElement",
    "word",
    "format_word",
    "deconcatenation",
    "concat",
    "shuffle",
    "shuffle_elements",
    "tfc_defect",
    "tfc_check",
    "composition_pairs",
    "BInftyStructure",
    "star_from_binfty",
    "quasi_shuffle",
    "quasi_shuffle_structure",
    "check_associative_product",
    "theta",
    "theta_map",
    "iter_words",
]


class Letter(NamedTuple):
    symbol: str
    degree: int = 1

    def __str__(self):
        return self.symbol if self.degree == 1 else f"{self.symbol}[{self.degree}]"


Word = tuple  # tuple[Letter, ...]


def word(*symbols, degree: int = 1) -> Word:
    """Word of degree-``degree`` letters from plain symbols or existing letters."""
    return tuple(s if isinstance(s, Letter) else Letter(str(s), degree) for s in symbols)


def format_word(w: Word) -> str:
    return "".join(str(a) for a in w) if w else "1"


class GradedBasis:
    """Finite ordered alphabet per positive degree."""

    def __init__(self, by_degree: Mapping[int, Sequence[str]]):
        seen = set()
        self._letters: dict[int, tuple[Letter, ...]] = {}
        for d in sorted(by_degree):
            if d < 1:
                raise ValueError("letter degrees must be positive")
            row = []
            for s in by_degree[d]:
                if s in seen:
                    raise ValueError(f"duplicate symbol {s!r}")
                seen.add(s)
                row.append(Letter(s, d))
            self._letters[d] = tuple(row)

    @classmethod
    def single_degree(cls, symbols: Sequence[str]) -> "GradedBasis":
        return cls({1: list(symbols)})

    def letters(self, d: int | None = None) -> tuple[Letter, ...]:
        if d is None:
            return tuple(a for row in self._letters.values() for a in row)
        return self._letters.get(d, ())

    def words(self, d: int) -> list[Word]:
        """All words of total degree ``d`` (the empty word when d = 0), canonical order."""
        if d == 0:
            return [()]
        out = []
        for first in sorted(self._letters):
            if first > d:
                break
            for a in self._letters[first]:
                out.extend((a,) + rest for rest in self.words(d - first))
        return out


class TensorElement(LinComb):
    """Linear combination of words; the empty word is the unit."""

    __slots__ = ()

    @classmethod
    def one(cls) -> "TensorElement":
        return cls._raw({(): 1})

    @classmethod
    def of(cls, w: Word, coeff=1) -> "TensorElement":
        return cls.basis(tuple(w), coeff)

    def lengths(self) -> set[int]:
        return {len(w) for w in self._terms}

    def component(self, length: int) -> "TensorElement":
        return TensorElement._raw({w: c for w, c in self._terms.items() if len(w) == length})

    def __str__(self):
        if not self._terms:
            return "0"
        items = sorted(self._terms.items(), key=lambda kv: (len(kv[0]), tuple(map(tuple, kv[0]))))
        return " + ".join(f"{c} {format_word(w)}" for w, c in items)


def _as_tensor(x) -> TensorElement:
    if isinstance(x, TensorElement):
        return x
    if isinstance(x, tuple):
        return TensorElement.of(x)
    raise TypeError(f"expected TensorElement or word, got {type(x).__name__}")


def deconcatenation(x) -> Tensor:
    """Sum over all cuts ``w = w1 w2`` of ``w1 (x) w2``."""
    acc: dict = {}
    for w, c in _as_tensor(x).items():
        for i in range(len(w) + 1):
            accumulate(acc, (w[:i], w[i:]), c)
    return Tensor._raw(finish(acc))


def concat(x, y) -> TensorElement:
    acc: dict = {}
    for a, c in _as_tensor(x).items():
        for b, d in _as_tensor(y).items():
            accumulate(acc, a + b, c * d)
    return TensorElement._raw(finish(acc))


@lru_cache(maxsize=1 << 16)
def _shuffle_words(a: Word, b: Word) -> tuple:
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    acc: dict = {}
    for w, c in _shuffle_words(a[1:], b):
        accumulate(acc, (a[0],) + w, c)
    for w, c in _shuffle_words(a, b[1:]):
        accumulate(acc, (b[0],) + w, c)
    return tuple(acc.items())


def shuffle(a: Word, b: Word) -> TensorElement:
    """Sum over the shuffles of two words."""
    return TensorElement._raw(finish(dict(_shuffle_words(tuple(a), tuple(b)))))


def shuffle_elements(x, y) -> TensorElement:
    acc: dict = {}
    for a, c in _as_tensor(x).items():
        for b, d in _as_tensor(y).items():
            for w, e in _shuffle_words(a, b):
                accumulate(acc, w, c * d * e)
    return TensorElement._raw(finish(acc))


def _pair_concat(s: Tensor, t: Tensor) -> dict:
    acc: dict = {}
    for (a1, a2), c in s.items():
        for (b1, b2), d in t.items():
            accumulate(acc, (a1 + b1, a2 + b2), c * d)
    return acc


def tfc_defect(x, y) -> Tensor:
    """Defect of the unital infinitesimal relation for concatenation and deconcatenation."""
    x, y = _as_tensor(x), _as_tensor(y)
    lhs = deconcatenation(concat(x, y))
    x1 = Tensor._raw({(a, ()): c for a, c in x.items()})
    y1 = Tensor._raw({((), b): c for b, c in y.items()})
    rhs: dict = _pair_concat(x1, deconcatenation(y))
    for k, c in _pair_concat(deconcatenation(x), y1).items():
        accumulate(rhs, k, c)
    for a, c in x.items():
        for b, d in y.items():
            accumulate(rhs, (a, b), -c * d)
    return lhs - Tensor._raw(finish(rhs))


def tfc_check(pairs: Iterable[tuple]) -> bool:
    return all(not tfc_defect(x, y) for x, y in pairs)


# --- B-infinity data and the induced product ---------------------------------


@lru_cache(maxsize=None)
def composition_pairs(p: int, q: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Sequences of pairs ``(i_a, j_a)`` summing to ``(p, q)``, each pair being
    ``(1, 0)``, ``(0, 1)`` or having both entries positive."""
    if p == 0 and q == 0:
        return ((),)
    out = []
    for i in range(p + 1):
        for j in range(q + 1):
            if (i, j) == (0, 0):
                continue
            if (i == 0 and j >= 2) or (j == 0 and i >= 2):
                continue
            for rest in composition_pairs(p - i, q - j):
                out.append(((i, j),) + rest)
    return tuple(out)


Operation = Callable[[Word, Word], Mapping[Letter, object]]


class BInftyStructure:
    """Operations ``M_pq`` (p, q >= 1) on the span of ``generators``.

    ``M_10`` and ``M_01`` are the identity and the other boundary operations
    vanish. Pairs missing from ``operations`` are zero when ``zero_default`` is
    set and ``p + q`` is within ``arity_bound``; otherwise asking for them is an
    error, so that an incomplete table can never pass as a zero one. A
    ``fallback`` operation, if given, serves every pair not in the table.
    """

    def __init__(
        self,
        generators: GradedBasis | None,
        operations: Mapping[tuple[int, int], Operation] | None = None,
        arity_bound: int | None = None,
        zero_default: bool = True,
        name: str = "custom",
        fallback: Operation | None = None,
    ):
        self.generators = generators
        self.operations = dict(operations or {})
        self.arity_bound = arity_bound
        self.zero_default = zero_default
        self.name = name
        self.fallback = fallback
        self._memo: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def trivial(cls, generators: GradedBasis | None = None) -> "BInftyStructure":
        return cls(generators, {}, None, True, "trivial")

    def mpq(self, left: Word, right: Word) -> dict:
        """``M_pq(left, right)`` as a map letter -> coefficient."""
        p, q = len(left), len(right)
        if (p, q) == (1, 0):
            return {left[0]: 1}
        if (p, q) == (0, 1):
            return {right[0]: 1}
        if p == 0 or q == 0:
            return {}
        key = (left, right)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        op = self.operations.get((p, q), self.fallback)
        if op is None:
            if self.zero_default and (self.arity_bound is None or p + q <= self.arity_bound):
                out: dict = {}
            else:
                raise ValueError(f"B∞ data incomplete for degree {p + q} (M_{p}{q})")
        else:
            out = finish({a: normalize_scalar(c) for a, c in op(left, right).items()})
        with self._lock:
            self._memo[key] = out
        return out

    # JSON table form: {"generators": {"1": ["a", "b"]}, "arity_bound": 3,
    #                   "operations": {"1,1": [{"left": ["a"], "right": ["b"],
    #                                           "value": {"c": "1"}}]}}
    @classmethod
    def from_json(cls, data: Mapping | str) -> "BInftyStructure":
        if isinstance(data, str):
            data = json.loads(data)
        gens = GradedBasis({int(d): syms for d, syms in data["generators"].items()})
        by_symbol = {a.symbol: a for a in gens.letters()}

        def letter(s):
            if s not in by_symbol:
                raise ValueError(f"unknown generator {s!r}")
            return by_symbol[s]

        ops = {}
        for pq, entries in data.get("operations", {}).items():
            p, q = (int(v) for v in pq.split(","))
            table = {}
            for e in entries:
                lw = tuple(letter(s) for s in e["left"])
                rw = tuple(letter(s) for s in e["right"])
                if (len(lw), len(rw)) != (p, q):
                    raise ValueError(f"entry arity does not match M_{p}{q}")
                table[(lw, rw)] = {letter(s): Fraction(c) for s, c in e["value"].items()}
            ops[(p, q)] = lambda l, r, _t=table: _t.get((l, r), {})
        bound = data.get("arity_bound")
        return cls(gens, ops, bound, True, data.get("name", "table"))


def _expand_factors(B: BInftyStructure, a: Word, b: Word, pairs) -> dict:
    acc: dict = {(): 1}
    pa = pb = 0
    for i, j in pairs:
        value = B.mpq(a[pa:pa + i], b[pb:pb + j])
        pa += i
        pb += j
        if not value:
            return {}
        nxt: dict = {}
        for w, c in acc.items():
            for letter, d in value.items():
                nxt[w + (letter,)] = nxt.get(w + (letter,), 0) + c * d
        acc = nxt
    return acc


def star_from_binfty(B: BInftyStructure, x, y) -> TensorElement:
    """Associative product on the tensor coalgebra induced by the operations of ``B``."""
    acc: dict = {}
    for a, c in _as_tensor(x).items():
        for b, d in _as_tensor(y).items():
            for pairs in composition_pairs(len(a), len(b)):
                for w, e in _expand_factors(B, a, b, pairs).items():
                    accumulate(acc, w, c * d * e)
    return TensorElement._raw(finish(acc))


LetterProduct = Callable[[Letter, Letter], Mapping[Letter, object]]


def check_associative_product(letters: Sequence[Letter], product: LetterProduct) -> bool:
    def mul(u: Mapping, v: Mapping) -> dict:
        acc: dict = {}
        for a, c in u.items():
            for b, d in v.items():
                for e, f in product(a, b).items():
                    accumulate(acc, e, c * d * f)
        return acc

    for a in letters:
        for b in letters:
            for c in letters:
                if finish(mul(mul({a: 1}, {b: 1}), {c: 1})) != finish(mul({a: 1}, mul({b: 1}, {c: 1}))):
                    return False
    return True


def quasi_shuffle_structure(letters: Sequence[Letter], product: LetterProduct, check: bool = True) -> BInftyStructure:
    """B-infinity structure with ``M_11 = product`` and all higher ``M_pq = 0``."""
    if check and not check_associative_product(letters, product):
        raise ValueError("product is not associative on the given letters")
    return BInftyStructure(None, {(1, 1): lambda l, r: product(l[0], r[0])}, None, True, "quasi-shuffle")


def quasi_shuffle(product: LetterProduct, a: Word, b: Word) -> TensorElement:
    """Quasi-shuffle by the first-letter recursion
    ``a w * b u = M(a,b)(w * u) + a(w * b u) + b(a w * u)``."""
    memo: dict = {}

    def rec(x: Word, y: Word) -> dict:
        if not x:
            return {y: 1}
        if not y:
            return {x: 1}
        key = (x, y)
        if key in memo:
            return memo[key]
        acc: dict = {}
        for w, c in rec(x[1:], y[1:]).items():
            for letter, d in product(x[0], y[0]).items():
                accumulate(acc, (letter,) + w, c * d)
        for w, c in rec(x[1:], y).items():
            accumulate(acc, (x[0],) + w, c)
        for w, c in rec(x, y[1:]).items():
            accumulate(acc, (y[0],) + w, c)
        memo[key] = acc
        return acc

    return TensorElement._raw(finish(rec(tuple(a), tuple(b))))


# --- theta -------------------------------------------------------------------

_theta_cache: dict = {}


def _theta_tree(tree, tag: str) -> int:
    if tree.is_leaf:
        return 1
    key = (tree, tag)
    hit = _theta_cache.get(key)
    if hit is not None:
        return hit
    kids = tree.children
    if tag == DOT:
        value = prod(_theta_tree(c, STAR) for c in kids)
    else:
        multinomial = factorial(tree.degree) // prod(factorial(c.degree) for c in kids)
        value = multinomial * prod(_theta_tree(c, DOT) for c in kids)
    _theta_cache[key] = value
    return value


def _theta_basis(b: Basis) -> int:
    if b.tree is None:
        return 1
    if len(set(b.labels)) > 1:
        raise ValueError("theta is defined on the one-generator algebra only")
    return _theta_tree(b.tree, b.tag)


def theta(x) -> object:
    """Value of theta on a homogeneous one-generator element."""
    if isinstance(x, Basis):
        return _theta_basis(x)
    if len(x.degrees()) > 1:
        raise ValueError("theta is evaluated degreewise; element is not homogeneous")
    return normalize_scalar(sum((c * _theta_basis(b) for b, c in x.items()), 0))


def theta_map(x, letter: Letter = Letter("x", 1)) -> TensorElement:
    """``sum_n theta(x_n) x^n`` in the shuffle algebra on one letter."""
    if isinstance(x, Basis):
        x = FreeElement.of(x)
    acc: dict = {}
    labels = {lab for b in x for lab in b.labels}
    if len(labels) > 1:
        raise ValueError("theta is defined on the one-generator algebra only")
    for b, c in x.items():
        accumulate(acc, (letter,) * b.degree, c * _theta_basis(b))
    return TensorElement._raw(finish(acc))


def iter_words(letters: Sequence[Letter], max_length: int) -> Iterator[Word]:
    """All words of length 0..max_length in shortlex order."""
    yield ()
    frontier = [()]
    for _ in range(max_length):
        frontier = [w + (a,) for w in frontier for a in letters]
        yield from frontier
