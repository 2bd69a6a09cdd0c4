"""Finite formal linear combinations with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Callable, Hashable, Iterable, Iterator, Mapping, TypeVar

K = TypeVar("K", bound=Hashable)
L = TypeVar("L", bound="LinComb")

Scalar = int | Fraction


def normalize_scalar(c) -> Scalar:
    """Exact rational, stored as ``int`` whenever the denominator is 1."""
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return normalize_scalar(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return normalize_scalar(Fraction(c))
    raise TypeError(f"not an exact rational: {c!r}")


def format_scalar(c: Scalar) -> str:
    return str(c)


class LinComb:
    """Mapping from hashable basis keys to nonzero rationals.

    Subclasses fix the kind of key; arithmetic keeps the subclass. Values are
    treated as immutable once built, so they hash.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable[tuple] | None = None):
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for k, c in items:
                c = normalize_scalar(c)
                if c:
                    acc[k] = acc.get(k, 0) + c
        self._terms = {k: normalize_scalar(c) for k, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls: type[L], terms: dict) -> L:
        """Wrap an already normalized dict without copying."""
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls: type[L]) -> L:
        return cls._raw({})

    @classmethod
    def basis(cls: type[L], key, coeff=1) -> L:
        c = normalize_scalar(coeff)
        return cls._raw({key: c} if c else {})

    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        return self._terms.items()

    def keys(self):
        return self._terms.keys()

    def coefficient(self, key) -> Scalar:
        return self._terms.get(key, 0)

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __contains__(self, key) -> bool:
        return key in self._terms

    def __eq__(self, other):
        if isinstance(other, LinComb):
            return type(self) is type(other) and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, frozenset(self._terms.items())))
        return self._hash

    def __add__(self: L, other: L) -> L:
        if not isinstance(other, LinComb):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = normalize_scalar(v)
            else:
                out.pop(k, None)
        return type(self)._raw(out)

    __radd__ = __add__

    def __neg__(self: L) -> L:
        return type(self)._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self: L, other: L) -> L:
        if not isinstance(other, LinComb):
            if other == 0:
                return self
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if other == 0:
            return -self
        return NotImplemented

    def scale(self: L, c) -> L:
        c = normalize_scalar(c)
        if not c:
            return type(self)._raw({})
        return type(self)._raw({k: normalize_scalar(v * c) for k, v in self._terms.items()})

    def __rmul__(self: L, c) -> L:
        if isinstance(c, LinComb):
            return NotImplemented
        return self.scale(c)

    def map_keys(self: L, fn: Callable, cls: type | None = None):
        """Linear extension of a key-to-key map."""
        acc: dict = {}
        for k, c in self._terms.items():
            nk = fn(k)
            acc[nk] = acc.get(nk, 0) + c
        return (cls or type(self))._raw({k: normalize_scalar(c) for k, c in acc.items() if c})

    def sorted_items(self, key=None) -> list[tuple]:
        return sorted(self._terms.items(), key=(lambda kv: key(kv[0])) if key else (lambda kv: kv[0]))

    def __repr__(self):
        inner = ", ".join(f"{k!r}: {c}" for k, c in self._terms.items())
        return f"{type(self).__name__}({{{inner}}})"


def accumulate(acc: dict, key, coeff) -> None:
    """In-place ``acc[key] += coeff``, dropping zeros."""
    v = acc.get(key, 0) + coeff
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def finish(acc: dict) -> dict:
    return {k: normalize_scalar(c) for k, c in acc.items() if c}


class Tensor(LinComb):
    """Combination of k-fold pure tensors; keys are k-tuples of basis keys."""

    __slots__ = ()

    @property
    def arity(self) -> int | None:
        for k in self._terms:
            return len(k)
        return None

    def factor_map(self, fns: tuple[Callable, ...], cls: type | None = None) -> "Tensor":
        """Apply ``fns[i]`` (key -> dict of key -> coeff) to the i-th tensor factor."""
        acc: dict = {}
        for key, c in self._terms.items():
            partial = [((), c)]
            for fn, k in zip(fns, key):
                image = fn(k)
                partial = [(ks + (kk,), cc * ci) for ks, cc in partial for kk, ci in image.items()]
            for ks, cc in partial:
                accumulate(acc, ks, cc)
        return (cls or type(self))._raw(finish(acc))
