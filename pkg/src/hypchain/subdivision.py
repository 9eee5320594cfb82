"""Efficient subdivision chain map on the standard resolution of a hyperbolic group.

``f_0`` is the identity and ``f_1`` subdivides an edge along its canonical
geodesic.  For a based simplex ``s = (e, g_1, .., g_i)`` with ``i >= 2``::

    f_i(s) = psi( h^T( phi( f_{i-1}(d s) ) ) ) - prism( f_{i-1}(d s) )

where ``phi``/``psi`` are the rough isometries between the hull of ``s`` and
a net in its approximating tree, ``h^T`` is the tree contraction and the
prism is the homotopy from ``psi.phi`` to the identity.  Other simplices
are handled by translating to based form (the map is ZG-linear).

Radii are not fixed in advance: ``c(i)`` is the largest correspondence
tolerance measured among (i+1)-simplices processed so far and
``r(i+1) = r(i) + 2 c(i) + 12``.  Certification happens after a whole
corpus is processed, against the final schedule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Iterable, Sequence

from .approx import Correspondence, build_correspondence
from .chains import Chain, ChainBuilder, act, boundary, l1_norm, map_vertices, support
from .contraction import ContractionOperator, e_constant
from .errors import RadiusScheduleExceeded, VertexNotInHull
from .group import Element, GroupContext, invert_word

NET_BUMP = 12


def radius_schedule(r_i, c_i) -> Fraction:
    """Next radius: r(i) + 2 c(i) + 12."""
    c_i = Fraction(c_i)
    if c_i < 0:
        raise ValueError("tolerance must be nonnegative")
    return Fraction(r_i) + 2 * c_i + NET_BUMP


def cascade_bound(i: int) -> int:
    """Closed-form ceiling K_i = (e(i-1, i) + i) K_{i-1} (i+1), K_1 = 1."""
    k = 1
    for j in range(2, i + 1):
        k = (e_constant(j - 1, j) + j) * k * (j + 1)
    return k


@dataclass
class SubdivisionParams:
    max_dim: int = 3
    tolerances: dict[int, Fraction] = field(default_factory=dict)

    def c(self, i: int) -> Fraction:
        return self.tolerances.get(i, Fraction(0))

    def r(self, i: int) -> Fraction:
        r = Fraction(1)
        for j in range(1, i):
            r = radius_schedule(r, self.c(j))
        return r

    def contraction_radius(self, i: int) -> Fraction:
        return self.r(i) + self.c(i)

    def record(self, i: int, c: Fraction) -> None:
        if c > self.c(i):
            self.tolerances[i] = Fraction(c)

    def schedule(self) -> list[Fraction]:
        return [self.r(i) for i in range(self.max_dim + 1)]

    def to_json(self) -> dict:
        return {
            "max_dim": self.max_dim,
            "r": [_q(x) for x in self.schedule()],
            "c": [_q(self.c(i)) for i in range(self.max_dim)],
        }


def _q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def subdivide_f0(s: Sequence[Element]) -> Chain:
    return Chain.simplex(s)


def subdivide_f1(ctx: GroupContext, s: Sequence[Element]) -> Chain:
    x, y = s
    if x == y:
        return Chain.simplex((x, y))
    path = ctx.geodesic(x, y)
    out = ChainBuilder(1)
    for a, b in zip(path, path[1:]):
        out.add((a, b), 1)
    return out.build()


def prism_homotopy(round_trip: Callable[[Element], Element], c: Chain) -> Chain:
    """Sum_k (-1)^k (g_0..g_k, rt(g_k)..rt(g_n)); a homotopy from id to rt."""
    out = ChainBuilder(c.dim + 1)
    for s, k in c.terms.items():
        try:
            img = tuple(round_trip(x) for x in s)
        except KeyError as exc:
            raise VertexNotInHull("round trip undefined on vertex", vertex=exc.args[0]) from None
        sign = k
        for j in range(len(s)):
            out.add(s[: j + 1] + img[j:], sign)
            sign = -sign
    return out.build()


@dataclass
class Evaluation:
    chain: Chain
    ratio: Fraction
    c: Fraction | None = None
    contraction_radius: Fraction | None = None
    hull_size: int | None = None


class SubdivisionMap:
    """Memoized f_i on based simplices."""

    def __init__(self, ctx: GroupContext, max_dim: int = 3):
        self.ctx = ctx
        self.params = SubdivisionParams(max_dim)
        self.memo: dict[tuple, Evaluation] = {}

    def based(self, s: Sequence[Element]) -> tuple[Element, tuple]:
        g0 = s[0]
        if g0 == "":
            return g0, tuple(s)
        ginv = invert_word(g0)
        return g0, tuple(self.ctx.multiply(ginv, x) for x in s)

    def f(self, s: Sequence[Element]) -> Chain:
        s = tuple(s)
        i = len(s) - 1
        if i > self.params.max_dim:
            raise ValueError(f"dimension {i} exceeds max_dim {self.params.max_dim}")
        if i == 0:
            return subdivide_f0(s)
        g0, b = self.based(s)
        ev = self.memo.get(b)
        if ev is None:
            ev = self._evaluate(b)
            self.memo[b] = ev
        return act(self.ctx, g0, ev.chain)

    def f_boundary(self, s: Sequence[Element]) -> Chain:
        """f_{i-1}(d s)."""
        out = ChainBuilder(len(s) - 2)
        sign = 1
        for k in range(len(s)):
            out.add_chain(self.f(s[:k] + s[k + 1 :]), sign)
            sign = -sign
        return out.build()

    def _evaluate(self, s: tuple) -> Evaluation:
        ctx = self.ctx
        i = len(s) - 1
        sob = 1 + ctx.diameter(s)
        if i == 1:
            chain = subdivide_f1(ctx, s)
            return Evaluation(chain, Fraction(l1_norm(chain), sob))
        z = self.f_boundary(s)
        corr = build_correspondence(ctx, s, ctx.delta)
        self.params.record(i - 1, corr.c)
        radius = self.params.contraction_radius(i - 1)
        op = ContractionOperator(corr.tree, corr.net.vertices, corr.basepoint, radius)
        phi, psi = corr.phi, corr.psi
        try:
            lifted = map_vertices(phi.__getitem__, z)
        except KeyError as exc:
            raise VertexNotInHull("f_{i-1}(ds) leaves the hull", vertex=exc.args[0]) from None
        tree_part = map_vertices(psi.__getitem__, op.apply(lifted))
        chain = tree_part - prism_homotopy(corr.round_trip, z)
        if boundary(chain) != z:
            raise RuntimeError(f"chain-map identity failed on {s!r}")
        r_i = self.params.r(i)
        for t in chain.terms:
            if ctx.diameter(t) > r_i:
                raise RadiusScheduleExceeded(
                    "output simplex exceeds the radius schedule",
                    simplex=list(s),
                    output=list(t),
                    diameter=ctx.diameter(t),
                    r=_q(r_i),
                )
        return Evaluation(chain, Fraction(l1_norm(chain), sob), corr.c, radius, len(corr.hull))

    def max_ratio(self, i: int) -> Fraction:
        if i == 0:
            return Fraction(1)
        return max((ev.ratio for b, ev in self.memo.items() if len(b) == i + 1), default=Fraction(0))

    def correspondence(self, s: Sequence[Element]) -> Correspondence:
        return build_correspondence(self.ctx, s, self.ctx.delta)


@dataclass
class Certificate:
    simplex: tuple
    dimension: int
    chain_map_residual_norm: int
    output_l1: int
    input_sobolev: int
    max_output_diameter: int
    radius: Fraction
    diam_bound_ok: bool
    support_ok: bool
    norm_bound: int

    @property
    def passed(self) -> bool:
        return (
            self.chain_map_residual_norm == 0
            and self.diam_bound_ok
            and self.support_ok
            and self.output_l1 <= self.norm_bound
        )

    def to_json(self) -> dict:
        return {
            "simplex": list(self.simplex),
            "dimension": self.dimension,
            "chain_map_residual_norm": self.chain_map_residual_norm,
            "output_l1": self.output_l1,
            "input_sobolev": self.input_sobolev,
            "max_output_diameter": self.max_output_diameter,
            "radius": _q(self.radius),
            "diam_bound_ok": self.diam_bound_ok,
            "support_ok": self.support_ok,
            "norm_bound": self.norm_bound,
            "passed": self.passed,
        }


def norm_bound(smap: SubdivisionMap, i: int, sobolev: int) -> int:
    """Per-simplex ceiling on ||f_i(s)||_1 from the measured ratio of f_{i-1}."""
    if i <= 1:
        return sobolev
    p = smap.params
    e = e_constant(p.contraction_radius(i - 1), i - 1)
    return floor((e + i) * smap.max_ratio(i - 1) * (i + 1) * sobolev)


def certify(smap: SubdivisionMap, s: Sequence[Element]) -> Certificate:
    ctx = smap.ctx
    s = tuple(s)
    i = len(s) - 1
    out = smap.f(s)
    if i >= 1:
        residual = l1_norm(boundary(out) - smap.f_boundary(s))
    else:
        residual = 0
    sob = 1 + ctx.diameter(s)
    r_i = smap.params.r(i)
    max_diam = max((ctx.diameter(t) for t in out.terms), default=0)
    hull = ctx.geodesic_hull(s)
    return Certificate(
        simplex=s,
        dimension=i,
        chain_map_residual_norm=residual,
        output_l1=l1_norm(out),
        input_sobolev=sob,
        max_output_diameter=max_diam,
        radius=r_i,
        diam_bound_ok=max_diam <= r_i,
        support_ok=support(out) <= hull,
        norm_bound=norm_bound(smap, i, sob),
    )


@dataclass
class CertificationRun:
    certificates: list[Certificate]
    smap: SubdivisionMap
    skipped: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.certificates)

    def max_ratios(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for c in self.certificates:
            q = Fraction(c.output_l1, c.input_sobolev)
            if q > out.get(c.dimension, Fraction(-1)):
                out[c.dimension] = q
        return out


def certify_corpus(ctx: GroupContext, simplices: Iterable[Sequence[Element]], max_dim: int = 3) -> CertificationRun:
    """Subdivide everything first so certificates see the final radius schedule."""
    smap = SubdivisionMap(ctx, max_dim)
    todo = sorted({tuple(s) for s in simplices}, key=lambda s: (len(s), s))
    for s in todo:
        smap.f(s)
    certs = [certify(smap, s) for s in todo]
    return CertificationRun(certs, smap)
