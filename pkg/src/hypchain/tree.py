"""Metric simplicial trees with exact rational edge lengths."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class TreePoint:
    """A vertex, or a point at ``offset`` along ``edge`` measured from its first endpoint."""

    vertex: int | None = None
    edge: int | None = None
    offset: Fraction = Fraction(0)

    @classmethod
    def at(cls, vertex: int) -> TreePoint:
        return cls(vertex=vertex)


class MetricTree:
    """Finite tree on vertices ``0..n-1`` with positive rational edge lengths."""

    def __init__(self, n: int, edges: Sequence[tuple[int, int, Fraction]], root: int = 0):
        self.n = n
        self.edges = [(u, v, Fraction(l)) for u, v, l in edges]
        self.root = root
        if n < 1 or not 0 <= root < n:
            raise ValueError("tree needs at least one vertex and a valid root")
        if len(self.edges) != n - 1:
            raise ValueError(f"a tree on {n} vertices has {n - 1} edges, got {len(self.edges)}")
        self.nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for k, (u, v, l) in enumerate(self.edges):
            if l <= 0:
                raise ValueError(f"edge {k} has nonpositive length {l}")
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"edge {k} has bad endpoints ({u}, {v})")
            self.nbrs[u].append((v, k))
            self.nbrs[v].append((u, k))
        self.parent = [-1] * n
        self.parent_edge = [-1] * n
        self.depth = [Fraction(0)] * n
        self.level = [0] * n
        seen = [False] * n
        seen[root] = True
        order = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, k in self.nbrs[u]:
                if not seen[v]:
                    seen[v] = True
                    self.parent[v] = u
                    self.parent_edge[v] = k
                    self.depth[v] = self.depth[u] + self.edges[k][2]
                    self.level[v] = self.level[u] + 1
                    order.append(v)
                    queue.append(v)
        if len(order) != n:
            raise ValueError("tree is not connected")
        self.bfs_order = order

    def _lca(self, u: int, v: int) -> int:
        level, parent = self.level, self.parent
        while level[u] > level[v]:
            u = parent[u]
        while level[v] > level[u]:
            v = parent[v]
        while u != v:
            u, v = parent[u], parent[v]
        return u

    def dist(self, u: int, v: int) -> Fraction:
        if u == v:
            return Fraction(0)
        w = self._lca(u, v)
        return self.depth[u] + self.depth[v] - 2 * self.depth[w]

    def path(self, u: int, v: int) -> list[int]:
        """Vertices of the unique geodesic from ``u`` to ``v``."""
        w = self._lca(u, v)
        up, down = [], []
        while u != w:
            up.append(u)
            u = self.parent[u]
        while v != w:
            down.append(v)
            v = self.parent[v]
        return up + [w] + down[::-1]

    def point_dist(self, p: TreePoint, q: TreePoint) -> Fraction:
        if p.vertex is not None and q.vertex is not None:
            return self.dist(p.vertex, q.vertex)
        if p.edge is not None and p.edge == q.edge:
            return abs(p.offset - q.offset)
        return min(a + self.dist(x, y) + b for x, a in self._exits(p) for y, b in self._exits(q))

    def _exits(self, p: TreePoint) -> list[tuple[int, Fraction]]:
        if p.vertex is not None:
            return [(p.vertex, Fraction(0))]
        u, v, l = self.edges[p.edge]
        return [(u, p.offset), (v, l - p.offset)]

    def normalize(self, p: TreePoint) -> TreePoint:
        if p.vertex is not None:
            return p
        u, v, l = self.edges[p.edge]
        if p.offset == 0:
            return TreePoint.at(u)
        if p.offset == l:
            return TreePoint.at(v)
        return p

    def to_json(self) -> dict:
        return {
            "vertices": self.n,
            "root": self.root,
            "edges": [[u, v, _frac(l)] for u, v, l in self.edges],
        }


def _frac(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def conv_hull(tree: MetricTree, vertices: Iterable[int]) -> set[int]:
    """Vertex set of the smallest subtree containing ``vertices``."""
    vs = list(dict.fromkeys(vertices))
    if not vs:
        return set()
    out = {vs[0]}
    for v in vs[1:]:
        out.update(tree.path(vs[0], v))
    return out


@dataclass
class Net:
    """A 1-separated net; ``tree`` is subdivided so every net point is a vertex."""

    tree: MetricTree
    vertices: list[int]
    points: list[TreePoint] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.vertices)


def _near_endpoint(tree: MetricTree, k: int) -> tuple[int, Fraction, int]:
    u, v, l = tree.edges[k]
    if tree.parent[v] == u:
        return u, l, v
    return v, l, u


def select_net(tree: MetricTree) -> Net:
    """Unit-spaced points on every edge, thinned greedily to separation 1.

    Original tree vertices are offered first (by id), then interior points by
    (edge id, offset).  Keeping vertices first keeps branch points in the net
    whenever the tree allows it.
    """
    cands: list[TreePoint] = [TreePoint.at(v) for v in range(tree.n)]
    for k in range(len(tree.edges)):
        near, l, _ = _near_endpoint(tree, k)
        u = tree.edges[k][0]
        j = 1
        while j < l:
            off = Fraction(j) if near == u else l - j
            cands.append(TreePoint(edge=k, offset=off))
            j += 1
    kept: list[TreePoint] = []
    for p in cands:
        if all(tree.point_dist(p, q) >= 1 for q in kept):
            kept.append(p)
    sub, where = subdivide(tree, [p for p in kept if p.vertex is None])
    verts = sorted(p.vertex if p.vertex is not None else where[p] for p in kept)
    back = {p.vertex if p.vertex is not None else where[p]: p for p in kept}
    return Net(sub, verts, [back[v] for v in verts])


def subdivide(tree: MetricTree, points: Sequence[TreePoint]) -> tuple[MetricTree, dict]:
    """Insert interior edge points as new vertices; old vertex ids are kept."""
    by_edge: dict[int, list[TreePoint]] = {}
    for p in points:
        by_edge.setdefault(p.edge, []).append(p)
    n = tree.n
    edges: list[tuple[int, int, Fraction]] = []
    where: dict[TreePoint, int] = {}
    for k, (u, v, l) in enumerate(tree.edges):
        pts = sorted(set(by_edge.get(k, ())), key=lambda p: p.offset)
        prev, prev_off = u, Fraction(0)
        for p in pts:
            where[p] = n
            edges.append((prev, n, p.offset - prev_off))
            prev, prev_off = n, p.offset
            n += 1
        edges.append((prev, v, l - prev_off))
    return MetricTree(n, edges, tree.root), where


def net_separation(net: Net) -> Fraction | None:
    t, vs = net.tree, net.vertices
    best = None
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            d = t.dist(vs[i], vs[j])
            if best is None or d < best:
                best = d
    return best


def net_density(net: Net) -> Fraction:
    """Largest distance from any point of the tree to the net."""
    t = net.tree
    near = [None] * t.n
    # Dijkstra without heap: trees are small and lengths exact.
    for v in net.vertices:
        near[v] = Fraction(0)
    changed = True
    while changed:
        changed = False
        for u, v, l in t.edges:
            for a, b in ((u, v), (v, u)):
                if near[a] is not None and (near[b] is None or near[a] + l < near[b]):
                    near[b] = near[a] + l
                    changed = True
    worst = max(near)
    for u, v, l in t.edges:
        a, b = near[u], near[v]
        if abs(a - b) <= l:
            worst = max(worst, (a + b + l) / 2)
    return worst


def net_max_gap(net: Net) -> Fraction:
    """Largest distance between consecutive net points along a tree geodesic."""
    t, vs = net.tree, net.vertices
    inside = set(vs)
    worst = Fraction(0)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            p = t.path(vs[i], vs[j])
            if not any(x in inside for x in p[1:-1]):
                worst = max(worst, t.dist(vs[i], vs[j]))
    return worst
