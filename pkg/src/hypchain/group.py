"""Finitely generated groups as word-metric spaces.

Elements are represented by their ShortLex normal form, serialized as a
string: a lowercase letter is a generator and the matching uppercase letter
its inverse; the empty string is the identity.  The letter order is the
generator order with each inverse ranked immediately after its generator
(``a < A < b < B < ...``).

Two backends are provided:

* ``free`` -- exact free reduction.  The ball is implicit: membership is a
  length test and element ids are ShortLex ranks computed arithmetically.
* ``dehn`` -- a C'(1/6) small-cancellation presentation.  Equality is
  decided by Dehn's algorithm and the ball is enumerated once by BFS, so
  distances are exact inside it.

Leaving the ball is always an :class:`~hypchain.errors.OutOfBall` error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import BallTooLarge, OutOfBall, PresentationInvalid

Element = str

FREE = "free"
DEHN = "dehn"
BACKENDS = (FREE, DEHN)

_UNKNOWN = -1
_OUTSIDE = -2


def invert_word(word: str) -> str:
    return word[::-1].swapcase()


def free_reduce(word: str) -> str:
    out: list[str] = []
    for ch in word:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def _cyclic_conjugates(word: str) -> list[str]:
    return [word[i:] + word[:i] for i in range(len(word))]


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[str, ...] = ()
    backend: str = FREE
    ball_radius: int = 8
    delta: Fraction | None = None
    max_elements: int = 1_000_000

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        if self.delta is not None:
            object.__setattr__(self, "delta", Fraction(self.delta))
        self._validate()

    @property
    def alphabet(self) -> str:
        return "".join(g + g.upper() for g in self.generators)

    def _validate(self) -> None:
        gens = self.generators
        for k, g in enumerate(gens):
            if not (isinstance(g, str) and len(g) == 1 and "a" <= g <= "z"):
                raise PresentationInvalid(
                    f"generator {g!r} must be a single lowercase letter", field=f"generators[{k}]"
                )
        if len(set(gens)) != len(gens):
            raise PresentationInvalid("generator symbols must be distinct", field="generators")
        if self.backend not in BACKENDS:
            raise PresentationInvalid(f"unknown backend {self.backend!r}", field="backend")
        if not isinstance(self.ball_radius, int) or self.ball_radius < 0:
            raise PresentationInvalid("ball_radius must be a nonnegative integer", field="ball_radius")
        if self.delta is not None and (self.delta < 0 or (2 * self.delta).denominator != 1):
            raise PresentationInvalid("delta must be a nonnegative half-integer", field="delta")
        alphabet = set(self.alphabet)
        for k, rel in enumerate(self.relators):
            where = f"relators[{k}]"
            if not isinstance(rel, str) or not rel:
                raise PresentationInvalid("relators must be nonempty words", field=where)
            if not set(rel) <= alphabet:
                raise PresentationInvalid(f"relator {rel!r} uses unknown letters", field=where)
            if free_reduce(rel) != rel or (len(rel) > 1 and rel[0] == rel[-1].swapcase()):
                raise PresentationInvalid(f"relator {rel!r} is not cyclically reduced", field=where)
            if len(set(_cyclic_conjugates(rel))) != len(rel):
                raise PresentationInvalid(f"relator {rel!r} is a proper power", field=where)
        if self.backend == FREE and self.relators:
            raise PresentationInvalid("the free backend takes no relators", field="relators")
        if self.backend == DEHN:
            self._check_small_cancellation()

    def symmetrized_relators(self) -> list[str]:
        out: set[str] = set()
        for rel in self.relators:
            out.update(_cyclic_conjugates(rel))
            out.update(_cyclic_conjugates(invert_word(rel)))
        return sorted(out)

    def _check_small_cancellation(self) -> None:
        sym = self.symmetrized_relators()
        for u, v in combinations(sym, 2):
            n = 0
            for x, y in zip(u, v):
                if x != y:
                    break
                n += 1
            for w in (u, v):
                if 6 * n >= len(w):
                    raise PresentationInvalid(
                        f"piece {u[:n]!r} violates C'(1/6) for relator {w!r}",
                        field="relators",
                        piece=u[:n],
                    )


class GroupContext:
    """A group together with its precomputed word-metric ball.

    Immutable after construction apart from internal memo caches, which
    never change observable results.
    """

    def __init__(self, presentation: GroupPresentation):
        self.presentation = presentation
        self.radius = presentation.ball_radius
        self.letters = presentation.alphabet
        self.rank = {ch: i for i, ch in enumerate(self.letters)}
        self.delta = presentation.delta
        self._dist_cache: dict[tuple[str, str], int] = {}
        self._nf_cache: dict[str, str] = {}

    # -- backend hooks -------------------------------------------------
    def normal_form(self, word: str) -> Element:
        """ShortLex normal form of an arbitrary word; OutOfBall if beyond the ball."""
        raise NotImplementedError

    def element_id(self, x: Element) -> int:
        raise NotImplementedError

    def sphere_sizes(self) -> list[int]:
        raise NotImplementedError

    def elements(self) -> Iterator[Element]:
        """All ball elements in id (ShortLex) order."""
        raise NotImplementedError

    def neighbor(self, x: Element, letter: str) -> Element:
        raise NotImplementedError

    # -- derived operations --------------------------------------------
    @property
    def identity(self) -> Element:
        return ""

    @property
    def size(self) -> int:
        return sum(self.sphere_sizes())

    def contains(self, x: Element) -> bool:
        try:
            return self.normal_form(x) == x
        except OutOfBall:
            return False

    def shortlex_key(self, x: Element) -> tuple[int, tuple[int, ...]]:
        rank = self.rank
        return (len(x), tuple(rank[ch] for ch in x))

    def length(self, x: Element) -> int:
        return len(x)

    def multiply(self, x: Element, y: Element) -> Element:
        return self.normal_form(x + y)

    def inverse(self, x: Element) -> Element:
        return self.normal_form(invert_word(x))

    def distance(self, x: Element, y: Element) -> int:
        if x == y:
            return 0
        key = (x, y) if x < y else (y, x)
        d = self._dist_cache.get(key)
        if d is None:
            d = len(self.normal_form(invert_word(x) + y))
            self._dist_cache[key] = d
        return d

    def diameter(self, t: Sequence[Element]) -> int:
        best = 0
        distinct = list(dict.fromkeys(t))
        for i in range(len(distinct)):
            for j in range(i + 1, len(distinct)):
                d = self.distance(distinct[i], distinct[j])
                if d > best:
                    best = d
        return best

    def based_geodesic(self, x: Element) -> list[Element]:
        """Canonical geodesic from the identity to ``x``.

        Walking from ``e`` and always stepping to the ShortLex-least neighbor
        strictly closer to ``x`` spells out the lexicographically least
        geodesic word, i.e. the normal form of ``x``; the vertices are
        therefore its prefixes (ShortLex normal forms are prefix closed).
        """
        x = self._check(x)
        return [x[:k] for k in range(len(x) + 1)]

    def geodesic(self, x: Element, y: Element) -> list[Element]:
        """``x`` translated along the based geodesic to ``x^-1 y``."""
        step = self.normal_form(invert_word(x) + y)
        path = [x]
        v = x
        for ch in step:
            v = self.neighbor(v, ch)
            path.append(v)
        return path

    def geodesic_hull(self, ys: Sequence[Element]) -> frozenset[Element]:
        hull: set[Element] = set(ys[:1])
        for i in range(len(ys)):
            for j in range(i + 1, len(ys)):
                hull.update(self.geodesic(ys[i], ys[j]))
        return frozenset(hull)

    def act(self, g: Element, x: Element) -> Element:
        return self.multiply(g, x)

    def _check(self, x: Element) -> Element:
        if self.normal_form(x) != x:
            raise OutOfBall(f"{x!r} is not a normal form in the ball", element=x)
        return x


class FreeContext(GroupContext):
    """Free group: normal forms are freely reduced words."""

    def __init__(self, presentation: GroupPresentation):
        super().__init__(presentation)
        self._n = len(self.letters)

    def normal_form(self, word: str) -> Element:
        w = free_reduce(word)
        if len(w) > self.radius:
            raise OutOfBall(
                f"word of length {len(w)} exceeds ball radius {self.radius}",
                word=w,
                radius=self.radius,
            )
        return w

    def neighbor(self, x: Element, letter: str) -> Element:
        if x and x[-1] == letter.swapcase():
            return x[:-1]
        if len(x) >= self.radius:
            raise OutOfBall("neighbor leaves the ball", element=x, letter=letter)
        return x + letter

    def sphere_sizes(self) -> list[int]:
        n = self._n
        sizes = [1]
        for k in range(1, self.radius + 1):
            sizes.append(n * (n - 1) ** (k - 1))
        return sizes

    def element_id(self, x: Element) -> int:
        x = self._check(x)
        n = self._n
        idx = sum(self.sphere_sizes()[: len(x)])
        prev = None
        for t, ch in enumerate(x):
            c = self.rank[ch]
            if prev is None:
                r = c
            else:
                r = c - (1 if (prev ^ 1) < c else 0)
            idx += r * (n - 1) ** (len(x) - 1 - t)
            prev = c
        return idx

    def elements(self) -> Iterator[Element]:
        frontier = [""]
        yield ""
        for _ in range(self.radius):
            nxt = []
            for w in frontier:
                for ch in self.letters:
                    if w and w[-1] == ch.swapcase():
                        continue
                    nxt.append(w + ch)
                    yield w + ch
            frontier = nxt


class DehnContext(GroupContext):
    """C'(1/6) group with an explicitly enumerated Cayley ball."""

    def __init__(self, presentation: GroupPresentation):
        super().__init__(presentation)
        self._tables: list[tuple[int, dict[str, str]]] = []
        by_len: dict[int, dict[str, str]] = {}
        self._cells: list[list[str]] = [[] for _ in self.letters]
        for rel in presentation.symmetrized_relators():
            m = len(rel) // 2 + 1
            by_len.setdefault(m, {})[rel[:m]] = invert_word(rel[m:])
            self._cells[self.rank[rel[0]]].append(rel[1:])
        self._tables = sorted(by_len.items())
        self.words: list[str] = []
        self.index: dict[str, int] = {}
        self.adj: list[list[int]] = []
        self._spheres: list[int] = []
        self._build()

    # Dehn's algorithm: shorten by replacing more than half of a relator.
    def dehn_reduce(self, word: str) -> str:
        w = free_reduce(word)
        changed = True
        while changed:
            changed = False
            for m, table in self._tables:
                for i in range(len(w) - m + 1):
                    rep = table.get(w[i : i + m])
                    if rep is not None:
                        w = free_reduce(w[:i] + rep + w[i + m :])
                        changed = True
                        break
                if changed:
                    break
        return w

    def is_trivial(self, word: str) -> bool:
        return self.dehn_reduce(word) == ""

    def _new(self, word: str, depth: int) -> int:
        if len(self.words) >= self.presentation.max_elements:
            raise BallTooLarge(
                f"ball exceeds {self.presentation.max_elements} elements",
                cap=self.presentation.max_elements,
                radius=self.radius,
            )
        h = len(self.words)
        self.words.append(word)
        self.index[word] = h
        self.adj.append([_UNKNOWN] * len(self.letters))
        return h

    def _fold_ids(self, word: str) -> int:
        v = 0
        for ch in word:
            v = self.adj[v][self.rank[ch]]
            if v == _OUTSIDE:
                raise OutOfBall("word leaves the ball", word=word, radius=self.radius)
            if v == _UNKNOWN:
                raise RuntimeError(f"incomplete adjacency while folding {word!r}")
        return v

    def _identify(self, g: int, s: int) -> int:
        w = self.words[g] + self.letters[s]
        d = self.dehn_reduce(w)
        if len(d) < len(w):
            return self._fold_ids(d)
        # g*s closes a relator cell whose other edges are already known.
        adj = self.adj
        for tail in self._cells[s ^ 1]:
            v = g
            for ch in tail:
                v = adj[v][self.rank[ch]]
                if v < 0:
                    break
            else:
                return v
        return _UNKNOWN

    def _link(self, g: int, s: int, h: int) -> None:
        self.adj[g][s] = h
        back = self.adj[h][s ^ 1]
        if back == _UNKNOWN:
            self.adj[h][s ^ 1] = g
        elif back != g:
            raise RuntimeError("inconsistent Cayley graph adjacency")

    def _build(self) -> None:
        self._new("", 0)
        start, end = 0, 1
        for k in range(self.radius + 1):
            self._spheres.append(end - start)
            for g in range(start, end):
                for s in range(len(self.letters)):
                    if self.adj[g][s] != _UNKNOWN:
                        continue
                    h = self._identify(g, s)
                    if h == _UNKNOWN:
                        if k == self.radius:
                            self.adj[g][s] = _OUTSIDE
                            continue
                        h = self._new(self.words[g] + self.letters[s], k + 1)
                    self._link(g, s, h)
            start, end = end, len(self.words)

    def normal_form(self, word: str) -> Element:
        nf = self._nf_cache.get(word)
        if nf is None:
            if word in self.index:
                return word
            nf = self.words[self._fold_ids(self.dehn_reduce(word))]
            self._nf_cache[word] = nf
        return nf

    def neighbor(self, x: Element, letter: str) -> Element:
        i = self.index.get(x)
        if i is None:
            raise OutOfBall(f"{x!r} is not in the ball", element=x)
        j = self.adj[i][self.rank[letter]]
        if j < 0:
            raise OutOfBall("neighbor leaves the ball", element=x, letter=letter)
        return self.words[j]

    def element_id(self, x: Element) -> int:
        i = self.index.get(x)
        if i is None:
            raise OutOfBall(f"{x!r} is not a normal form in the ball", element=x)
        return i

    def sphere_sizes(self) -> list[int]:
        return list(self._spheres)

    def elements(self) -> Iterator[Element]:
        return iter(self.words)


def build_context(p: GroupPresentation) -> GroupContext:
    if p.backend == FREE:
        return FreeContext(p)
    return DehnContext(p)


def free_group(rank: int, radius: int, **kw) -> GroupContext:
    gens = tuple("abcdefghijklmnopqrstuvwxyz"[:rank])
    return build_context(GroupPresentation(gens, (), FREE, radius, delta=Fraction(0), **kw))


def surface_group(genus: int, radius: int, **kw) -> GroupContext:
    """Closed orientable surface group with the standard one-relator presentation."""
    gens = "abcdefghijklmnopqrstuvwxyz"[: 2 * genus]
    rel = "".join(gens[2 * k] + gens[2 * k + 1] + gens[2 * k].upper() + gens[2 * k + 1].upper()
                  for k in range(genus))
    return build_context(GroupPresentation(tuple(gens), (rel,), DEHN, radius, **kw))


def estimate_delta(ctx: GroupContext, sample_radius: int) -> Fraction:
    """Sampled slim-triangle constant of the canonical geodesic family.

    Triangles have one corner at the identity and the other two in the ball
    of radius ``sample_radius``; by equivariance of the family this covers
    every triangle whose corners differ by elements of that ball.  Only side
    vertices are tested.  The result is a lower bound for the true delta.
    """
    if 2 * sample_radius > ctx.radius:
        raise OutOfBall(
            "sample_radius must be at most half the ball radius",
            sample_radius=sample_radius,
            radius=ctx.radius,
        )
    sample = [x for x in ctx.elements() if len(x) <= sample_radius]
    worst = 0
    for i, x in enumerate(sample):
        side_x = ctx.based_geodesic(x)
        for y in sample[i + 1 :]:
            sides = (side_x, ctx.based_geodesic(y), ctx.geodesic(x, y))
            for k in range(3):
                others = sides[(k + 1) % 3] + sides[(k + 2) % 3]
                for p in sides[k]:
                    near = min(ctx.distance(p, q) for q in others)
                    if near > worst:
                        worst = near
    return Fraction(worst)


def sorted_elements(ctx: GroupContext, xs: Iterable[Element]) -> list[Element]:
    return sorted(xs, key=ctx.shortlex_key)
