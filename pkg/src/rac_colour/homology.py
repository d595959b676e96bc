"""Flag simplicial complexes and reduced Betti numbers over the rationals.

A complex is stored as the clique complex of an edge graph, capped at a
caller-supplied dimension.  Betti numbers come from ranks of the augmented
simplicial boundary matrices, computed with fraction-free integer
elimination; no floating point is involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class FlagComplex:
    """Clique complex of a graph, truncated at max_dim.

    ``simplices[d]`` lists the d-simplices as sorted vertex tuples, in
    lexicographic order.  Vertex labels are preserved by induced
    subcomplexes, so they need not be contiguous.
    """

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    max_dim: int
    simplices: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def counts(self) -> list[int]:
        return [len(level) for level in self.simplices]

    def dimension(self) -> int:
        return len(self.simplices) - 1

    def is_empty(self) -> bool:
        return not self.vertices

    def has_clique_above_cap(self) -> bool:
        """True if the edge graph contains a (max_dim + 2)-clique.

        A capped complex is genuinely flag exactly when this is False.
        """
        if self.dimension() < self.max_dim:
            return False
        adj = _adjacency_sets(self.vertices, self.edges)
        top = self.simplices[self.max_dim]
        return bool(_extend_cliques(top, adj))


def clique_complex(vertices: Iterable[int], edges: Iterable[tuple[int, int]],
                   max_dim: int) -> FlagComplex:
    """All cliques of size <= max_dim + 1 of a simple loopless graph."""
    vs = tuple(sorted(set(vertices)))
    es = []
    vset = set(vs)
    seen = set()
    for a, b in edges:
        if a == b:
            raise ValueError(f"loop at vertex {a}")
        if a not in vset or b not in vset:
            raise ValueError(f"edge ({a}, {b}) uses an unknown vertex")
        e = (a, b) if a < b else (b, a)
        if e not in seen:
            seen.add(e)
            es.append(e)
    es.sort()
    if not vs:
        return FlagComplex((), (), max_dim, ())

    adj = _adjacency_sets(vs, es)
    levels: list[tuple[tuple[int, ...], ...]] = [tuple((v,) for v in vs)]
    current: list[tuple[int, ...]] = [(v,) for v in vs]
    for _ in range(max_dim):
        current = _extend_cliques(current, adj)
        if not current:
            break
        levels.append(tuple(current))
    return FlagComplex(vs, tuple(es), max_dim, tuple(levels))


def induced_subcomplex(k: FlagComplex, support: Iterable[int]) -> FlagComplex:
    """Subcomplex of the simplices lying entirely inside the support set."""
    keep = set(support)
    unknown = keep - set(k.vertices)
    if unknown:
        raise ValueError(f"support contains unknown vertices {sorted(unknown)}")
    vs = tuple(v for v in k.vertices if v in keep)
    es = tuple(e for e in k.edges if e[0] in keep and e[1] in keep)
    levels = []
    for level in k.simplices:
        kept = tuple(s for s in level if all(v in keep for v in s))
        if not kept:
            break
        levels.append(kept)
    return FlagComplex(vs, es, k.max_dim, tuple(levels))


@dataclass(frozen=True)
class BettiVector:
    """Reduced Betti numbers, starting at degree -1.

    reduced[0] is the (-1)-st reduced Betti number; it equals 1 exactly for
    the empty complex.
    """

    reduced: tuple[int, ...]

    def reduced_at(self, i: int) -> int:
        """Reduced Betti number in degree i, where i >= -1."""
        idx = i + 1
        if idx < 0:
            return 0
        if idx >= len(self.reduced):
            return 0
        return self.reduced[idx]

    def unreduced(self) -> tuple[int, ...]:
        """Ordinary Betti numbers beta_0, beta_1, ..."""
        if self.reduced_at(-1) == 1:
            return (0,)
        out = [self.reduced_at(0) + 1]
        out.extend(self.reduced[2:])
        return tuple(out)


def boundary_matrices(k: FlagComplex) -> list[list[list[int]]]:
    """Augmented boundary maps [d_0, d_1, ...] as dense integer matrices.

    d_0 is the 1 x c_0 augmentation onto the empty simplex; d_i for i >= 1
    is the usual signed simplicial boundary with sorted-vertex orientation.
    """
    mats: list[list[list[int]]] = []
    if k.is_empty():
        return mats
    counts = k.counts()
    mats.append([[1] * counts[0]])
    for d in range(1, len(counts)):
        index = {s: i for i, s in enumerate(k.simplices[d - 1])}
        mat = [[0] * counts[d] for _ in range(counts[d - 1])]
        for j, simplex in enumerate(k.simplices[d]):
            for pos in range(len(simplex)):
                face = simplex[:pos] + simplex[pos + 1:]
                mat[index[face]][j] = -1 if pos & 1 else 1
        mats.append(mat)
    if __debug__:
        _assert_squares_to_zero(mats)
    return mats


def reduced_betti(k: FlagComplex) -> BettiVector:
    """Reduced Betti numbers over the rationals, by exact integer ranks."""
    if k.is_empty():
        return BettiVector((1,))
    mats = boundary_matrices(k)
    counts = k.counts()
    ranks = [integer_rank(m) for m in mats]
    ranks.append(0)
    out = [1 - ranks[0]]
    for d in range(len(counts)):
        out.append(counts[d] - ranks[d] - ranks[d + 1])
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return BettiVector(tuple(out))


def euler_characteristic(k: FlagComplex) -> int:
    """Alternating sum of simplex counts."""
    return sum(c if d % 2 == 0 else -c for d, c in enumerate(k.counts()))


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix via fraction-free (Bareiss) elimination.

    All divisions are exact, so the result is the rank over the rationals
    no matter how the intermediate entries grow.
    """
    a = [list(row) for row in rows]
    if not a or not a[0]:
        return 0
    nr, nc = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pivot = a[r][c]
        for i in range(r + 1, nr):
            factor = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, nc):
                row_i[j] = (row_i[j] * pivot - factor * row_r[j]) // prev
            row_i[c] = 0
        prev = pivot
        r += 1
        if r == nr:
            break
    return r


def _adjacency_sets(vertices: Sequence[int], edges: Iterable[tuple[int, int]]):
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _extend_cliques(cliques: Sequence[tuple[int, ...]], adj) -> list[tuple[int, ...]]:
    """One-vertex extensions, keeping each clique sorted and unique."""
    out = []
    for c in cliques:
        common = adj[c[0]]
        for v in c[1:]:
            common = common & adj[v]
        last = c[-1]
        for u in sorted(common):
            if u > last:
                out.append(c + (u,))
    return out


def _assert_squares_to_zero(mats: list[list[list[int]]]) -> None:
    # d_i . d_{i+1} must vanish identically for a valid chain complex.
    for d in range(len(mats) - 1):
        lo, hi = mats[d], mats[d + 1]
        inner = len(hi)
        for col in range(len(hi[0]) if hi else 0):
            support = [i for i in range(inner) if hi[i][col]]
            for row in lo:
                assert sum(row[i] * hi[i][col] for i in support) == 0, \
                    "boundary of a boundary is nonzero"
