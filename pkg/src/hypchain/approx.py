"""Tree approximation of geodesic hulls and the rough-isometry data around it.

The tree is built by gluing the based geodesics from ``y0`` along Gromov
products (rounded down, so every vertex sits at integer distance from the
root and all edges have unit length).  Points of the hull off those based
geodesics are placed on the tree segment between the images of the two
tuple entries whose geodesic carries them.  All distortion constants are
measured exactly; none is assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Sequence

from .errors import EmptyTuple
from .group import Element, GroupContext
from .tree import MetricTree, Net, select_net


def gromov_product(ctx: GroupContext, x: Element, y: Element, base: Element) -> Fraction:
    return Fraction(ctx.distance(base, x) + ctx.distance(base, y) - ctx.distance(x, y), 2)


@dataclass
class TreeApproximation:
    ys: tuple[Element, ...]
    tree: MetricTree
    f: dict[Element, int]
    stage1: list[Element]
    hull: list[Element]
    c0: Fraction
    c_prime: Fraction
    branches: list[list[int]]
    diagnostics: list[dict] = field(default_factory=list)


def _distortion(ctx, tree, f, pts) -> Fraction:
    worst = Fraction(0)
    for i in range(len(pts)):
        x = pts[i]
        fx = f[x]
        for j in range(i + 1, len(pts)):
            y = pts[j]
            gap = abs(ctx.distance(x, y) - tree.dist(fx, f[y]))
            if gap > worst:
                worst = gap
    return worst


def approximate_by_tree(ctx: GroupContext, ys: Sequence[Element], delta=None) -> TreeApproximation:
    ys = tuple(ys)
    if not ys:
        raise EmptyTuple("cannot approximate the hull of an empty tuple")
    key = ctx.shortlex_key
    y0 = ys[0]
    geos = [ctx.geodesic(y0, y) for y in ys]

    n_vertices = 1
    edges: list[tuple[int, int, int]] = []
    branches: list[list[int]] = [[0]]
    for i in range(1, len(ys)):
        best_t, best_j = Fraction(0), 0
        for j in range(1, i):
            t = gromov_product(ctx, ys[j], ys[i], y0)
            if t > best_t:
                best_t, best_j = t, j
        d_i = len(geos[i]) - 1
        t = min(floor(best_t), d_i, len(branches[best_j]) - 1)
        branch = branches[best_j][: t + 1]
        for _ in range(t + 1, d_i + 1):
            edges.append((branch[-1], n_vertices, 1))
            branch.append(n_vertices)
            n_vertices += 1
        branches.append(branch)
    tree = MetricTree(n_vertices, edges, root=0)

    f: dict[Element, int] = {y0: 0}
    for i in range(1, len(ys)):
        for k, x in enumerate(geos[i]):
            f.setdefault(x, branches[i][k])
    stage1 = sorted(f, key=key)
    c0 = _distortion(ctx, tree, f, stage1)

    diagnostics = []
    for a in range(1, len(ys)):
        for b in range(a + 1, len(ys)):
            fa, fb = f[ys[a]], f[ys[b]]
            seg = None
            for x in ctx.geodesic(ys[a], ys[b]):
                if x in f:
                    continue
                if seg is None:
                    seg = tree.path(fa, fb)
                k = min(max(ctx.distance(x, ys[a]), 0), len(seg) - 1)
                f[x] = seg[k]
                miss_a = abs(k - ctx.distance(x, ys[a]))
                miss_b = abs(tree.dist(seg[k], fb) - ctx.distance(x, ys[b]))
                if max(miss_a, miss_b) > c0:
                    diagnostics.append({
                        "vertex": x,
                        "pair": [a, b],
                        "errors": [str(miss_a), str(miss_b)],
                        "c0": str(c0),
                        "delta": None if delta is None else str(delta),
                    })
    hull = sorted(f, key=key)
    c_prime = _distortion(ctx, tree, f, hull)
    return TreeApproximation(ys, tree, f, stage1, hull, c0, c_prime, branches, diagnostics)


def based_isometry_defects(ctx: GroupContext, approx: TreeApproximation) -> list[dict]:
    """Based geodesics on which f fails to be an isometric embedding."""
    bad = []
    y0 = approx.ys[0]
    for i, y in enumerate(approx.ys[1:], start=1):
        geo = ctx.geodesic(y0, y)
        img = [approx.f[x] for x in geo]
        ok = len(set(img)) == len(img) and all(
            approx.tree.dist(img[0], img[k]) == k for k in range(len(img))
        )
        if not ok:
            bad.append({"index": i, "target": y})
    return bad


@dataclass
class Correspondence:
    ys: tuple[Element, ...]
    approx: TreeApproximation
    net: Net
    phi: dict[Element, int]
    psi: list[Element]
    c: Fraction
    parts: dict[str, Fraction]

    @property
    def tree(self) -> MetricTree:
        return self.net.tree

    @property
    def hull(self) -> list[Element]:
        return self.approx.hull

    @property
    def basepoint(self) -> int:
        return self.net.vertices.index(self.tree.root)

    def round_trip(self, x: Element) -> Element:
        return self.psi[self.phi[x]]

    def to_json(self) -> dict:
        data = self.tree.to_json()
        data["net"] = list(self.net.vertices)
        data["f"] = {x: self.approx.f[x] for x in self.hull}
        data["phi"] = {x: self.phi[x] for x in self.hull}
        data["psi"] = list(self.psi)
        data["c"] = f"{self.c.numerator}/{self.c.denominator}"
        data["c_prime"] = f"{self.approx.c_prime.numerator}/{self.approx.c_prime.denominator}"
        data["tuple"] = list(self.ys)
        return data


def build_correspondence(ctx: GroupContext, ys: Sequence[Element], delta=None) -> Correspondence:
    approx = approximate_by_tree(ctx, ys, delta)
    net = select_net(approx.tree)
    tree = net.tree
    verts = net.vertices
    hull = approx.hull
    key = ctx.shortlex_key

    phi: dict[Element, int] = {}
    for x in hull:
        fx = approx.f[x]
        phi[x] = min(range(len(verts)), key=lambda k: (tree.dist(fx, verts[k]), k))
    psi: list[Element] = []
    for v in verts:
        psi.append(min(hull, key=lambda x: (tree.dist(approx.f[x], v), key(x))))

    parts = {
        "phi_distortion": Fraction(0),
        "psi_distortion": Fraction(0),
        "phi_psi_displacement": Fraction(0),
        "psi_phi_displacement": Fraction(0),
    }
    for i, x in enumerate(hull):
        for y in hull[i + 1 :]:
            gap = abs(ctx.distance(x, y) - tree.dist(verts[phi[x]], verts[phi[y]]))
            parts["phi_distortion"] = max(parts["phi_distortion"], gap)
        parts["psi_phi_displacement"] = max(
            parts["psi_phi_displacement"], Fraction(ctx.distance(x, psi[phi[x]]))
        )
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            gap = abs(tree.dist(verts[a], verts[b]) - ctx.distance(psi[a], psi[b]))
            parts["psi_distortion"] = max(parts["psi_distortion"], gap)
        parts["phi_psi_displacement"] = max(
            parts["phi_psi_displacement"], tree.dist(verts[phi[psi[a]]], verts[a])
        )
    c = max(parts.values())
    return Correspondence(tuple(ys), approx, net, phi, psi, c, parts)


def check_correspondence(ctx: GroupContext, corr: Correspondence) -> list[str]:
    """Re-verify every tolerance claim of a correspondence; returns failures."""
    out = []
    tree, verts = corr.tree, corr.net.vertices
    hull = corr.hull
    for i, x in enumerate(hull):
        if ctx.distance(x, corr.round_trip(x)) > corr.c:
            out.append(f"psi.phi displaces {x!r} by more than c")
        for y in hull[i + 1 :]:
            if abs(ctx.distance(x, y) - tree.dist(verts[corr.phi[x]], verts[corr.phi[y]])) > corr.c:
                out.append(f"phi distorts ({x!r}, {y!r}) by more than c")
    for a in range(len(verts)):
        if tree.dist(verts[corr.phi[corr.psi[a]]], verts[a]) > corr.c:
            out.append(f"phi.psi displaces net point {a} by more than c")
        for b in range(a + 1, len(verts)):
            if abs(tree.dist(verts[a], verts[b]) - ctx.distance(corr.psi[a], corr.psi[b])) > corr.c:
                out.append(f"psi distorts net pair ({a}, {b}) by more than c")
    return out
