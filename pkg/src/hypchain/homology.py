"""Integral homology of finite Rips complexes and a lazy homotopy builder.

These are the independent oracles: Smith normal form over the integers
for acyclicity claims, and the cone-at-identity homotopy that compares an
equivariant chain map with the identity on the homogeneous resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import gcd
from typing import Callable, Sequence

from .chains import Chain, ChainBuilder, act, boundary, cone, l1_norm
from .errors import BasisNotClosed, HomotopyIdentityFailed
from .group import Element, GroupContext, invert_word


class SparseMatrix:
    """Integer matrix stored as ``{row: {col: value}}`` without zeros."""

    def __init__(self, nrows: int, ncols: int, rows: dict[int, dict[int, int]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}
        for i, row in (rows or {}).items():
            clean = {j: v for j, v in row.items() if v}
            if clean:
                self.rows[i] = clean

    @classmethod
    def from_dense(cls, m: Sequence[Sequence[int]]) -> SparseMatrix:
        nrows = len(m)
        ncols = len(m[0]) if nrows else 0
        return cls(nrows, ncols, {i: dict(enumerate(r)) for i, r in enumerate(m)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out: dict[int, dict[int, int]] = {}
        for i, row in self.rows.items():
            acc: dict[int, int] = {}
            for k, a in row.items():
                for j, b in other.rows.get(k, {}).items():
                    acc[j] = acc.get(j, 0) + a * b
            out[i] = acc
        return SparseMatrix(self.nrows, other.ncols, out)

    def is_zero(self) -> bool:
        return not self.rows

    def column_l1(self) -> list[int]:
        out = [0] * self.ncols
        for row in self.rows.values():
            for j, v in row.items():
                out[j] += abs(v)
        return out


@dataclass
class SNFResult:
    divisors: list[int]
    rank: int

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.divisors if d > 1]


def smith_normal_form(m: SparseMatrix | Sequence[Sequence[int]]) -> SNFResult:
    """Elementary divisors and rank by unimodular elimination.

    Pivot: least absolute value, ties broken row-major.  The matrix is
    consumed as a working copy; the input is not modified.
    """
    if not isinstance(m, SparseMatrix):
        m = SparseMatrix.from_dense(m)
    rows = {i: dict(r) for i, r in m.rows.items()}
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)

    def setv(i: int, j: int, v: int) -> None:
        r = rows.setdefault(i, {})
        if v:
            r[j] = v
            cols.setdefault(j, set()).add(i)
        else:
            r.pop(j, None)
            s = cols.get(j)
            if s is not None:
                s.discard(i)
                if not s:
                    del cols[j]
            if not r:
                del rows[i]

    def pick() -> tuple[int, int]:
        best = None
        for i in sorted(rows):
            for j, v in rows[i].items():
                a = abs(v)
                if best is None or (a, i, j) < best:
                    best = (a, i, j)
            if best is not None and best[0] == 1:
                break
        return best[1], best[2]

    diag: list[int] = []
    while rows:
        p, q = pick()
        while True:
            pv = rows[p][q]
            swapped = False
            # clear column q with row operations
            for i in sorted(cols.get(q, ())):
                if i == p:
                    continue
                k = rows[i][q] // pv
                for j, v in list(rows[p].items()):
                    setv(i, j, rows.get(i, {}).get(j, 0) - k * v)
            rem = [i for i in cols.get(q, ()) if i != p]
            if rem:
                i = min(rem, key=lambda i: (abs(rows[i][q]), i))
                p, swapped = i, True
            else:
                # clear row q with column operations; column q holds only the pivot
                for j in sorted(k for k in rows[p] if k != q):
                    k = rows[p][j] // pv
                    for i in list(cols.get(q, ())):
                        setv(i, j, rows.get(i, {}).get(j, 0) - k * rows[i][q])
                rem = [j for j in rows[p] if j != q]
                if rem:
                    q = min(rem, key=lambda j: (abs(rows[p][j]), j))
                    swapped = True
            if not swapped:
                break
        diag.append(abs(rows[p][q]))
        setv(p, q, 0)
    return SNFResult(_divisor_chain(diag), len(diag))


def _divisor_chain(diag: list[int]) -> list[int]:
    d = sorted(diag)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return sorted(d)


# -- finite Rips complexes --------------------------------------------------


@dataclass
class FiniteComplexBasis:
    """Per-dimension simplex lists of a Rips complex on points ``0..n-1``."""

    n_points: int
    r: object
    simplices: dict[int, list[tuple]] = field(default_factory=dict)
    ordered: bool = False

    def index(self, dim: int) -> dict[tuple, int]:
        return {s: k for k, s in enumerate(self.simplices.get(dim, ()))}

    def size(self, dim: int) -> int:
        if dim < 0:
            return 0
        return len(self.simplices.get(dim, ()))


def rips_basis(dist: Sequence[Sequence], r, max_dim: int, ordered: bool = False) -> FiniteComplexBasis:
    """Rips complex of a finite metric space given by its distance matrix.

    Oriented mode uses strictly increasing tuples; ordered mode uses every
    tuple, degenerate ones included, as the homogeneous resolution does.
    """
    n = len(dist)
    out = FiniteComplexBasis(n, r, {}, ordered)
    if ordered:
        layer = [(a,) for a in range(n)]
        out.simplices[0] = layer
        for d in range(1, max_dim + 1):
            layer = [s + (b,) for s in layer for b in range(n) if all(dist[a][b] <= r for a in s)]
            out.simplices[d] = layer
        return out
    nbrs = [[b for b in range(a + 1, n) if dist[a][b] <= r] for a in range(n)]
    layer = [(a,) for a in range(n)]
    out.simplices[0] = layer
    for d in range(1, max_dim + 1):
        nxt = []
        for s in layer:
            for b in nbrs[s[-1]]:
                if all(dist[a][b] <= r for a in s[:-1]):
                    nxt.append(s + (b,))
        layer = nxt
        out.simplices[d] = layer
    return out


def boundary_matrix(basis: FiniteComplexBasis, n: int) -> SparseMatrix:
    """Matrix of d_n: columns indexed by n-simplices, rows by (n-1)-simplices."""
    if n < 1:
        raise ValueError("boundary_matrix needs n >= 1; use augmentation_matrix")
    src = basis.simplices.get(n, [])
    tgt = basis.index(n - 1)
    rows: dict[int, dict[int, int]] = {}
    for j, s in enumerate(src):
        sign = 1
        for k in range(len(s)):
            face = s[:k] + s[k + 1 :]
            i = tgt.get(face)
            if i is None:
                raise BasisNotClosed("face missing from basis", simplex=list(s), face=list(face))
            r = rows.setdefault(i, {})
            r[j] = r.get(j, 0) + sign
            sign = -sign
    return SparseMatrix(basis.size(n - 1), len(src), rows)


def augmentation_matrix(basis: FiniteComplexBasis) -> SparseMatrix:
    n0 = basis.size(0)
    return SparseMatrix(1, n0, {0: {j: 1 for j in range(n0)}} if n0 else {})


@dataclass
class HomologyGroup:
    dim: int
    betti: int
    torsion: list[int]

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"dim": self.dim, "betti": self.betti, "torsion": list(self.torsion)}


def homology(basis: FiniteComplexBasis, k: int, augmented: bool = False) -> list[HomologyGroup]:
    """H_0..H_k over the integers; with ``augmented`` degree 0 is reduced."""
    top = max(basis.simplices, default=-1)
    if top < k + 1:
        raise BasisNotClosed("basis must reach dimension k+1", have=top, need=k + 1)
    snf: dict[int, SNFResult] = {}
    for n in range(0, k + 2):
        if n == 0:
            snf[0] = smith_normal_form(augmentation_matrix(basis)) if augmented else SNFResult([], 0)
        else:
            snf[n] = smith_normal_form(boundary_matrix(basis, n))
    out = []
    for n in range(k + 1):
        betti = basis.size(n) - snf[n].rank - snf[n + 1].rank
        out.append(HomologyGroup(n, betti, snf[n + 1].torsion))
    return out


def metric_from_points(points: Sequence[Sequence]) -> list[list]:
    """Distance matrix from an explicit list of rows, validated as a metric."""
    n = len(points)
    for i, row in enumerate(points):
        if len(row) != n:
            raise ValueError(f"distance row {i} has length {len(row)}, expected {n}")
        if row[i] != 0:
            raise ValueError(f"d({i},{i}) must be 0")
    for i, j in combinations(range(n), 2):
        if points[i][j] != points[j][i] or points[i][j] <= 0:
            raise ValueError(f"d({i},{j}) must be positive and symmetric")
    for i, j, l in product(range(n), repeat=3):
        if points[i][l] > points[i][j] + points[j][l]:
            raise ValueError(f"triangle inequality fails at ({i},{j},{l})")
    return [list(r) for r in points]


def cycle_metric(n: int) -> list[list[int]]:
    return [[min(abs(i - j), n - abs(i - j)) for j in range(n)] for i in range(n)]


# -- homotopy to the identity -----------------------------------------------


class HomotopyBuilder:
    """Lazy chain homotopy from ``phi`` to the identity.

    ``h_0(g) = g.x`` and on a based simplex ``h_k(e, g..) = cone_e((phi -
    id - h_{k-1} d)(e, g..))``; other simplices are translated to based form.
    Every evaluation re-checks ``d h_k + h_{k-1} d = phi_k - id``.
    """

    def __init__(
        self,
        ctx: GroupContext,
        phi: Callable[[tuple], Chain],
        x: Chain | None = None,
        check_equivariance: bool = True,
    ):
        self.ctx = ctx
        self.phi = phi
        self.x = x if x is not None else Chain.zero(1)
        self.check_equivariance = check_equivariance
        self._memo: dict[tuple, Chain] = {}
        self.evaluated = 0
        e = ctx.identity
        if self.x:
            if self.x.dim != 1:
                raise ValueError("base correction must be a 1-chain")
            if boundary(self.x) != phi((e,)) - Chain.simplex((e,)):
                raise HomotopyIdentityFailed(
                    "base correction does not bound phi_0(e) - e",
                    residual=l1_norm(boundary(self.x) - phi((e,)) + Chain.simplex((e,))),
                )
        elif phi((e,)) != Chain.simplex((e,)):
            raise HomotopyIdentityFailed("phi_0(e) != e needs a base correction")

    def _phi_based(self, g0: Element, based: tuple, s: tuple) -> Chain:
        val = self.phi(based)
        if self.check_equivariance and g0 != self.ctx.identity:
            moved = self.phi(s)
            if moved != act(self.ctx, g0, val):
                raise HomotopyIdentityFailed(
                    "phi is not equivariant", simplex=list(s), translate=g0
                )
        return val

    def h(self, s: Sequence[Element]) -> Chain:
        ctx = self.ctx
        s = tuple(s)
        g0 = s[0]
        based = s if g0 == ctx.identity else tuple(ctx.multiply(invert_word(g0), y) for y in s)
        got = self._memo.get(based)
        if got is None:
            got = self._evaluate(based)
            self._memo[based] = got
        if self.check_equivariance and g0 != ctx.identity:
            self._phi_based(g0, based, s)
        return act(ctx, g0, got)

    def apply(self, c: Chain) -> Chain:
        out = ChainBuilder(c.dim + 1)
        for s, k in c.terms.items():
            out.add_chain(self.h(s), k)
        return out.build()

    def _evaluate(self, s: tuple) -> Chain:
        ctx = self.ctx
        self.evaluated += 1
        sigma = Chain.simplex(s)
        if len(s) == 1:
            out = act(ctx, s[0], self.x)
            lhs = boundary(out)
        else:
            hd = self.apply(boundary(sigma))
            out = cone(ctx.identity, self.phi(s) - sigma - hd)
            lhs = boundary(out) + hd
        rhs = self.phi(s) - sigma
        if lhs != rhs:
            raise HomotopyIdentityFailed(
                "d h + h d != phi - id", simplex=list(s), residual=l1_norm(lhs - rhs)
            )
        return out

    def residual(self, s: Sequence[Element]) -> int:
        s = tuple(s)
        sigma = Chain.simplex(s)
        lhs = boundary(self.h(s))
        if len(s) > 1:
            lhs = lhs + self.apply(boundary(sigma))
        return l1_norm(lhs - (self.phi(s) - sigma))

