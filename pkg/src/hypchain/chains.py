"""Sparse integer chains on tuples of vertices.

A simplex is a plain tuple of vertices (group elements, or net indices on
the tree side); degenerate tuples are ordinary basis elements.  A
:class:`Chain` is an immutable finite map simplex -> nonzero int.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Mapping

from .errors import DimensionZero, WrongDimension

Simplex = tuple


class Chain:
    __slots__ = ("terms", "dim")

    def __init__(self, terms: Mapping[Simplex, int] | None = None, dim: int = 0):
        clean = {}
        if terms:
            for s, c in terms.items():
                if c:
                    if len(s) != dim + 1:
                        raise WrongDimension(
                            f"simplex of length {len(s)} in a {dim}-chain", simplex=list(s)
                        )
                    clean[s] = c
        self.terms: dict[Simplex, int] = clean
        self.dim = dim

    @classmethod
    def _raw(cls, terms: dict, dim: int) -> Chain:
        # Caller guarantees no zero coefficients and matching lengths.
        c = cls.__new__(cls)
        c.terms = terms
        c.dim = dim
        return c

    @classmethod
    def simplex(cls, s: Iterable, coeff: int = 1) -> Chain:
        s = tuple(s)
        return cls({s: coeff}, len(s) - 1)

    @classmethod
    def zero(cls, dim: int) -> Chain:
        return cls._raw({}, dim)

    def __iter__(self) -> Iterator[tuple[Simplex, int]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{s}" for s, c in self) or "0"
        return f"Chain[{self.dim}]({body})"

    def _check_dim(self, other: Chain) -> None:
        if self.dim != other.dim and self.terms and other.terms:
            raise WrongDimension(f"cannot add a {self.dim}-chain and a {other.dim}-chain")

    def __add__(self, other: Chain) -> Chain:
        self._check_dim(other)
        out = dict(self.terms)
        for s, c in other.terms.items():
            v = out.get(s, 0) + c
            if v:
                out[s] = v
            else:
                del out[s]
        return Chain._raw(out, self.dim if self.terms else other.dim)

    def __neg__(self) -> Chain:
        return Chain._raw({s: -c for s, c in self.terms.items()}, self.dim)

    def __sub__(self, other: Chain) -> Chain:
        return self + (-other)

    def __mul__(self, k: int) -> Chain:
        if not k:
            return Chain.zero(self.dim)
        return Chain._raw({s: k * c for s, c in self.terms.items()}, self.dim)

    __rmul__ = __mul__


class ChainBuilder:
    """Mutable accumulator used on hot paths."""

    __slots__ = ("terms", "dim")

    def __init__(self, dim: int):
        self.terms: dict[Simplex, int] = {}
        self.dim = dim

    def add(self, s: Simplex, c: int) -> None:
        terms = self.terms
        v = terms.get(s, 0) + c
        if v:
            terms[s] = v
        else:
            terms.pop(s, None)

    def add_chain(self, chain: Chain, k: int = 1) -> None:
        for s, c in chain.terms.items():
            self.add(s, k * c)

    def build(self) -> Chain:
        return Chain._raw(self.terms, self.dim)


def boundary(c: Chain) -> Chain:
    """Alternating face sum."""
    if c.dim < 1:
        raise DimensionZero("boundary of a 0-chain; use augmentation")
    out = ChainBuilder(c.dim - 1)
    for s, coeff in c.terms.items():
        sign = coeff
        for i in range(len(s)):
            out.add(s[:i] + s[i + 1 :], sign)
            sign = -sign
    return out.build()


def l1_norm(c: Chain) -> int:
    return sum(abs(v) for v in c.terms.values())


def sobolev_norm(ctx, c: Chain) -> int:
    """Sum of |coefficient| * (1 + diameter)."""
    return sum(abs(v) * (1 + ctx.diameter(s)) for s, v in c.terms.items())


def act(ctx, g, c: Chain) -> Chain:
    """Diagonal left action of ``g``."""
    if g == "":
        return c
    memo: dict = {}

    def tr(x):
        y = memo.get(x)
        if y is None:
            y = memo[x] = ctx.multiply(g, x)
        return y

    return Chain._raw({tuple(tr(x) for x in s): v for s, v in c.terms.items()}, c.dim)


def rips_check(ctx, c: Chain, r) -> bool:
    r = Fraction(r)
    return all(ctx.diameter(s) <= r for s in c.terms)


def max_diameter(ctx, c: Chain) -> int:
    return max((ctx.diameter(s) for s in c.terms), default=0)


def cone(v: Hashable, c: Chain) -> Chain:
    """Prepend ``v`` to every simplex."""
    return Chain._raw({(v,) + s: k for s, k in c.terms.items()}, c.dim + 1)


def support(c: Chain) -> set:
    out: set = set()
    for s in c.terms:
        out.update(s)
    return out


def augmentation(c: Chain) -> int:
    if c.dim != 0 and c.terms:
        raise WrongDimension("augmentation needs a 0-chain", dim=c.dim)
    return sum(c.terms.values())


def map_vertices(f: Callable[[Hashable], Hashable], c: Chain) -> Chain:
    """Chain map induced by a vertex map; coefficients of colliding tuples add."""
    out = ChainBuilder(c.dim)
    for s, v in c.terms.items():
        out.add(tuple(f(x) for x in s), v)
    return out.build()
