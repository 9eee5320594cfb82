"""Explicit chain contraction of the augmented Rips complex of a tree net.

Chains here are over net indices ``0..m-1``.  ``h_0`` follows net points
along the tree geodesic from the basepoint; higher ``h_i`` are defined by
coning at the first vertex: ``h_i(s) = cone(s[0], s - h_{i-1}(d s))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

from .chains import Chain, ChainBuilder, augmentation, boundary, l1_norm, support
from .errors import RipsViolation
from .tree import MetricTree, conv_hull


def e_constant(r, i: int) -> int:
    """Norm constant e(r, i): ceil(r)+1, then e(r, i-1)*(i+1)+1."""
    if i < 1:
        raise ValueError("e(r, i) is defined for i >= 1")
    r = Fraction(r)
    if r < 1:
        raise ValueError("e(r, i) is defined for r >= 1")
    e = ceil(r) + 1
    for k in range(2, i + 1):
        e = e * (k + 1) + 1
    return e


class ContractionOperator:
    def __init__(self, tree: MetricTree, net: Sequence[int], basepoint: int, r):
        self.tree = tree
        self.net = list(net)
        self.basepoint = basepoint
        self.r = Fraction(r)
        m = len(self.net)
        if not 0 <= basepoint < m:
            raise ValueError("basepoint must be a net index")
        self.d = [[tree.dist(self.net[a], self.net[b]) for b in range(m)] for a in range(m)]
        for a in range(m):
            for b in range(a + 1, m):
                if self.d[a][b] < 1:
                    raise ValueError(f"net points {a} and {b} are closer than 1")
        self._pos = {v: k for k, v in enumerate(self.net)}
        self._memo: dict[tuple, Chain] = {}

    def diameter(self, s: Sequence[int]) -> Fraction:
        d = self.d
        best = Fraction(0)
        for i in range(len(s)):
            row = d[s[i]]
            for j in range(i + 1, len(s)):
                if row[s[j]] > best:
                    best = row[s[j]]
        return best

    def h_minus1(self, k: int = 1) -> Chain:
        return Chain.simplex((self.basepoint,), k)

    def path_indices(self, a: int, b: int) -> list[int]:
        """Net points on the tree geodesic from net point a to net point b, in order."""
        pos = self._pos
        return [pos[v] for v in self.tree.path(self.net[a], self.net[b]) if v in pos]

    def h0(self, v: int) -> Chain:
        key = (v,)
        got = self._memo.get(key)
        if got is None:
            pts = self.path_indices(self.basepoint, v)
            out = ChainBuilder(1)
            for a, b in zip(pts, pts[1:]):
                out.add((a, b), 1)
            got = self._memo[key] = out.build()
        return got

    def h(self, s: tuple) -> Chain:
        got = self._memo.get(s)
        if got is not None:
            return got
        if len(s) == 1:
            return self.h0(s[0])
        if self.diameter(s) > self.r:
            raise RipsViolation(
                "simplex exceeds the contraction radius",
                simplex=list(s),
                diameter=str(self.diameter(s)),
                r=str(self.r),
            )
        z = ChainBuilder(len(s))
        z.add(s, 1)
        sign = -1
        for i in range(len(s)):
            for t, c in self.h(s[:i] + s[i + 1 :]).terms.items():
                z.add(t, sign * c)
            sign = -sign
        v = s[0]
        got = Chain._raw({(v,) + t: c for t, c in z.terms.items()}, len(s))
        self._memo[s] = got
        return got

    def apply(self, c: Chain) -> Chain:
        out = ChainBuilder(c.dim + 1)
        for s, k in c.terms.items():
            for t, v in self.h(s).terms.items():
                out.add(t, k * v)
        return out.build()

    def conv(self, s: Iterable[int]) -> set[int]:
        pos = self._pos
        return {pos[v] for v in conv_hull(self.tree, (self.net[a] for a in s)) if v in pos}

    def rips_simplices(self, i: int) -> list[tuple]:
        """Every ordered (i+1)-tuple of net indices with diameter <= r."""
        m, d, r = len(self.net), self.d, self.r
        out = [(a,) for a in range(m)]
        for _ in range(i):
            out = [s + (b,) for s in out for b in range(m) if all(d[a][b] <= r for a in s)]
        return out


@dataclass
class ContractionReport:
    r: Fraction
    checked: dict[int, int] = field(default_factory=dict)
    identity_failures: list[dict] = field(default_factory=list)
    support_failures: list[dict] = field(default_factory=list)
    bound_failures: list[dict] = field(default_factory=list)
    weak_bound_failures: list[dict] = field(default_factory=list)
    output_radius_failures: list[dict] = field(default_factory=list)
    path_bound_failures: list[dict] = field(default_factory=list)
    rips_violations: list[dict] = field(default_factory=list)
    max_norm: dict[int, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not (
            self.identity_failures
            or self.support_failures
            or self.bound_failures
            or self.output_radius_failures
            or self.path_bound_failures
            or self.rips_violations
        )

    @property
    def ok_weak(self) -> bool:
        """As ``ok`` but with the norm bound read as ``<=``."""
        return not (
            self.identity_failures
            or self.support_failures
            or self.weak_bound_failures
            or self.output_radius_failures
            or self.path_bound_failures
            or self.rips_violations
        )


def verify_contraction(
    op: ContractionOperator, max_dim: int, simplices: Iterable[tuple] | None = None
) -> ContractionReport:
    """Check d h + h d = id, support and norm claims; exhaustive unless simplices given."""
    rep = ContractionReport(op.r)
    if simplices is None:
        todo = [s for i in range(max_dim + 1) for s in op.rips_simplices(i)]
    else:
        todo = [tuple(s) for s in simplices]
    for s in todo:
        i = len(s) - 1
        if op.diameter(s) > op.r:
            rep.rips_violations.append({"simplex": list(s), "diameter": str(op.diameter(s))})
            continue
        rep.checked[i] = rep.checked.get(i, 0) + 1
        hs = op.h(s)
        sigma = Chain.simplex(s)
        if i == 0:
            lhs = boundary(hs) + op.h_minus1(augmentation(sigma))
        else:
            lhs = boundary(hs) + op.apply(boundary(sigma))
        if lhs != sigma:
            rep.identity_failures.append({"simplex": list(s), "residual": l1_norm(lhs - sigma)})
        if i == 0:
            continue
        norm = l1_norm(hs)
        rep.max_norm[i] = max(rep.max_norm.get(i, 0), norm)
        e = e_constant(op.r, i)
        if not norm < e:
            rep.bound_failures.append({"simplex": list(s), "norm": norm, "e": e})
        if norm > e:
            rep.weak_bound_failures.append({"simplex": list(s), "norm": norm, "e": e})
        hull = op.conv(s)
        if not support(hs) <= hull:
            rep.support_failures.append(
                {"simplex": list(s), "outside": sorted(support(hs) - hull)}
            )
        if any(op.diameter(t) > op.r for t in hs.terms):
            rep.output_radius_failures.append({"simplex": list(s)})
        if i == 1:
            path = op.apply(boundary(sigma))
            if l1_norm(path) > ceil(op.r):
                rep.path_bound_failures.append({"simplex": list(s), "norm": l1_norm(path)})
    return rep
