"""Planar rooted trees whose internal vertices all have at least two children.

Trees are immutable and interned, so equal trees are usually the same object
and can be used freely as dictionary keys. The text form is

    tree := "|" | "(" tree tree tree* ")"

and the canonical order is by degree (number of leaves), then byte order of
that encoding.
"""

from __future__ import annotations

import itertools
import threading
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence

__all__ = [
    "PlanarTree",
    "LEAF",
    "graft",
    "ungraft",
    "enumerate_trees",
    "schroeder",
    "mirror",
    "corolla",
    "gamma",
    "parse_tree",
    "compositions",
]


@total_ordering
class PlanarTree:
    __slots__ = ("children", "degree", "encoding", "_hash", "__weakref__")

    _interned: dict[tuple, "PlanarTree"] = {}
    _lock = threading.Lock()

    children: tuple["PlanarTree", ...]
    degree: int
    encoding: str

    def __new__(cls, children: Iterable["PlanarTree"] = ()) -> "PlanarTree":
        children = tuple(children)
        if len(children) == 1:
            raise ValueError("internal vertices need at least two children")
        key = tuple(id(c) for c in children)
        cached = cls._interned.get(key)
        if cached is not None and cached.children == children:
            return cached
        for c in children:
            if not isinstance(c, PlanarTree):
                raise TypeError(f"child is not a PlanarTree: {c!r}")
        self = object.__new__(cls)
        object.__setattr__(self, "children", children)
        if children:
            object.__setattr__(self, "degree", sum(c.degree for c in children))
            enc = "(" + "".join(c.encoding for c in children) + ")"
        else:
            object.__setattr__(self, "degree", 1)
            enc = "|"
        object.__setattr__(self, "encoding", enc)
        object.__setattr__(self, "_hash", hash(enc))
        with cls._lock:
            # children are interned too, so ids are stable while the key lives
            return cls._interned.setdefault(key, self)

    def __setattr__(self, name, value):
        raise AttributeError("PlanarTree is immutable")

    def __reduce__(self):
        return (parse_tree, (self.encoding,))

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def valence(self) -> int:
        """Number of children of the root vertex (1 for the trivial tree)."""
        return len(self.children) or 1

    @property
    def vertex_count(self) -> int:
        return 0 if self.is_leaf else 1 + sum(c.vertex_count for c in self.children)

    def sort_key(self) -> tuple[int, bytes]:
        return (self.degree, self.encoding.encode("ascii"))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, PlanarTree):
            return NotImplemented
        return self.encoding == other.encoding

    def __lt__(self, other):
        if not isinstance(other, PlanarTree):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return self._hash

    def __str__(self):
        return self.encoding

    def __repr__(self):
        return f"PlanarTree({self.encoding!r})"


LEAF = PlanarTree()


def graft(parts: Sequence[PlanarTree]) -> PlanarTree:
    """Join the roots of ``parts`` under a new root vertex.

    A single tree grafts to itself, since there are no unary vertices.
    """
    parts = tuple(parts)
    if not parts:
        raise ValueError("cannot graft an empty list of trees")
    if len(parts) == 1:
        return parts[0]
    return PlanarTree(parts)


def ungraft(t: PlanarTree) -> list[PlanarTree]:
    return list(t.children) if t.children else [t]


def compositions(n: int, min_parts: int = 1) -> Iterable[tuple[int, ...]]:
    """Ordered compositions of ``n`` into positive parts, at least ``min_parts`` of them."""
    if n <= 0:
        return
    for k in range(max(min_parts, 1), n + 1):
        for cuts in itertools.combinations(range(1, n), k - 1):
            bounds = (0,) + cuts + (n,)
            yield tuple(bounds[i + 1] - bounds[i] for i in range(k))


@lru_cache(maxsize=None)
def _trees_of_degree(n: int) -> tuple[PlanarTree, ...]:
    if n == 1:
        return (LEAF,)
    out = []
    for comp in compositions(n, min_parts=2):
        for kids in itertools.product(*(_trees_of_degree(p) for p in comp)):
            out.append(PlanarTree(kids))
    out.sort()
    return tuple(out)


def enumerate_trees(n: int) -> list[PlanarTree]:
    """All planar trees with ``n`` leaves, in canonical order."""
    if n < 1:
        raise ValueError("no trees of degree 0")
    return list(_trees_of_degree(n))


@lru_cache(maxsize=None)
def _schroeder_table(n: int) -> tuple[int, ...]:
    # (1 + x) C = 1 + 2x C^2, read off coefficientwise
    c = [1]
    for m in range(1, n + 1):
        conv = sum(c[i] * c[m - 1 - i] for i in range(m))
        c.append(2 * conv - c[m - 1])
    return tuple(c)


def schroeder(n: int) -> int:
    """Super-Catalan (little Schroeder) number C_n: trees with n+1 leaves."""
    if n < 0:
        raise ValueError("schroeder index must be nonnegative")
    return _schroeder_table(n)[n]


def mirror(t: PlanarTree) -> PlanarTree:
    if t.is_leaf:
        return t
    return PlanarTree(tuple(mirror(c) for c in reversed(t.children)))


def corolla(p: int) -> PlanarTree:
    if p < 1:
        raise ValueError("corolla needs at least one leaf")
    return LEAF if p == 1 else PlanarTree((LEAF,) * p)


def gamma(p: int, q: int) -> PlanarTree:
    """The p-corolla grafted with the q-corolla."""
    return graft([corolla(p), corolla(q)])


def parse_tree(text: str) -> PlanarTree:
    tree, pos = _parse_at(text, 0)
    if pos != len(text):
        raise ValueError(f"trailing characters in tree {text!r} at {pos}")
    return tree


def _parse_at(text: str, pos: int) -> tuple[PlanarTree, int]:
    if pos >= len(text):
        raise ValueError(f"unexpected end of tree text {text!r}")
    ch = text[pos]
    if ch == "|":
        return LEAF, pos + 1
    if ch != "(":
        raise ValueError(f"unexpected {ch!r} at {pos} in tree {text!r}")
    pos += 1
    kids = []
    while pos < len(text) and text[pos] != ")":
        kid, pos = _parse_at(text, pos)
        kids.append(kid)
    if pos >= len(text):
        raise ValueError(f"unbalanced parenthesis in tree {text!r}")
    if len(kids) < 2:
        raise ValueError(f"vertex with fewer than two children in {text!r}")
    return PlanarTree(kids), pos + 1
