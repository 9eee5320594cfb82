"""Seeded simplex corpora for certification runs.

Simplices are built from random walks: a short translate ``g0`` and
vertices ``g0 * w`` for walks ``w``.  Candidates whose hull, or whose
translated hull, leaves the ball are rejected and counted.  Every corpus
also contains degenerate tuples and maximal-diameter tuples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import OutOfBall
from .group import Element, GroupContext, invert_word


@dataclass
class Corpus:
    seed: int
    simplices: list[tuple]
    params: dict = field(default_factory=dict)
    rejected: int = 0

    def by_dim(self, i: int) -> list[tuple]:
        return [s for s in self.simplices if len(s) == i + 1]

    def describe(self) -> dict:
        dims: dict[str, int] = {}
        for s in self.simplices:
            dims[str(len(s) - 1)] = dims.get(str(len(s) - 1), 0) + 1
        return {"seed": self.seed, "counts": dims, "rejected": self.rejected, **self.params}

    def to_json(self) -> dict:
        return {"seed": self.seed, "params": self.params, "simplices": [list(s) for s in self.simplices]}


def random_walk(ctx: GroupContext, rng: random.Random, length: int) -> Element:
    """Reduced random word of the given length, normalized in the group."""
    letters = ctx.presentation.alphabet
    word = ""
    for _ in range(length):
        ch = rng.choice(letters)
        while word and ch == word[-1].swapcase():
            ch = rng.choice(letters)
        word += ch
    return ctx.normal_form(word)


def admissible(ctx: GroupContext, s: tuple) -> bool:
    """True if the simplex, its based form and both hulls stay in the ball.

    Pairwise hull distances are checked too: tree approximation measures
    every one of them, and every face's based hull is a translate of a
    subset of this hull.
    """
    try:
        g0 = s[0]
        based = tuple(ctx.multiply(invert_word(g0), x) for x in s)
        hull = ctx.geodesic_hull(based)
        ctx.diameter(sorted(hull))
        for x in hull:
            ctx.multiply(g0, x)
        ctx.geodesic_hull(s)
    except OutOfBall:
        return False
    return True


def extremal_simplices(ctx: GroupContext, dim: int, reach: int) -> list[tuple]:
    """Tuples of generator powers of length ``reach`` in distinct directions."""
    letters = ctx.presentation.alphabet
    out = []
    for k in range(len(letters)):
        pts = [ctx.identity]
        for j in range(dim):
            ch = letters[(k + j) % len(letters)]
            pts.append(ctx.normal_form(ch * reach))
        out.append(tuple(pts[: dim + 1]))
    return out


def generate_corpus(
    ctx: GroupContext,
    seed: int,
    per_dim: int,
    dims=(1, 2, 3),
    max_shift: int = 2,
    max_step: int | None = None,
) -> Corpus:
    """``per_dim`` simplices in each requested dimension, deterministic in ``seed``."""
    rng = random.Random(seed)
    radius = ctx.radius
    if max_step is None:
        max_step = max(1, (radius - max_shift) // 2)
    reach = max(1, (radius - max_shift) // 2)
    out: list[tuple] = []
    seen: set[tuple] = set()
    rejected = 0

    def push(s: tuple) -> bool:
        nonlocal rejected
        if s in seen:
            return False
        if not admissible(ctx, s):
            rejected += 1
            return False
        seen.add(s)
        out.append(s)
        return True

    for i in dims:
        before = len(out)
        mandatory = [(ctx.identity,) * (i + 1)]
        g = random_walk(ctx, rng, max_shift)
        mandatory.append((g,) * (i + 1))
        mandatory.append((ctx.identity,) * i + (random_walk(ctx, rng, max_step),))
        mandatory.extend(extremal_simplices(ctx, i, reach)[:2])
        for s in mandatory:
            push(s)
        tries = 0
        while len(out) - before < per_dim:
            tries += 1
            if tries > 200 * per_dim:
                raise RuntimeError(f"could not fill dimension {i}: {len(out) - before} of {per_dim}")
            g0 = random_walk(ctx, rng, rng.randint(0, max_shift))
            verts = [g0]
            for _ in range(i):
                w = random_walk(ctx, rng, rng.randint(0, max_step))
                try:
                    verts.append(ctx.multiply(g0, w))
                except OutOfBall:
                    break
            if len(verts) == i + 1:
                push(tuple(verts))
            else:
                rejected += 1
    params = {"per_dim": per_dim, "dims": list(dims), "max_shift": max_shift, "max_step": max_step}
    return Corpus(seed, out, params, rejected)
