"""Combinatorial right-angled polytopes and their symmetry groups.

Two models are built in: the labelled 3-cube, and the ideal 24-cell in its
self-dual vertex model, where the 24 colouring slots are the elements of a
24-element subgroup of GL(4, F2).  That subgroup is the image of the unit
Hurwitz quaternions (the binary tetrahedral group) under an injective
homomorphism fixed by the two generator matrices below; adjacency of two
slots M, N is the condition that M N^{-1} has order 6.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .f2 import F2Matrix
from .homology import FlagComplex, clique_complex


class DataIntegrityError(Exception):
    """Built-in model data failed a structural self-check."""


# --- exact unit Hurwitz quaternions -----------------------------------------

@dataclass(frozen=True, order=True)
class HurwitzElement:
    """Unit quaternion with integer or half-integer coordinates.

    Coordinates are stored doubled, so every field is an integer and the
    unit-norm condition reads w2^2 + x2^2 + y2^2 + z2^2 == 4.
    """

    w2: int
    x2: int
    y2: int
    z2: int

    def __post_init__(self):
        if self.w2 ** 2 + self.x2 ** 2 + self.y2 ** 2 + self.z2 ** 2 != 4:
            raise ValueError("not a unit quaternion")
        parities = {self.w2 & 1, self.x2 & 1, self.y2 & 1, self.z2 & 1}
        if len(parities) != 1:
            raise ValueError("coordinates must be all integral or all half-integral")

    def __mul__(self, other: "HurwitzElement") -> "HurwitzElement":
        a1, b1, c1, d1 = self.w2, self.x2, self.y2, self.z2
        a2, b2, c2, d2 = other.w2, other.x2, other.y2, other.z2
        w = a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2
        x = a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2
        y = a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2
        z = a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2
        if (w | x | y | z) & 1:
            raise ArithmeticError("product left the Hurwitz order")
        return HurwitzElement(w >> 1, x >> 1, y >> 1, z >> 1)

    def conjugate(self) -> "HurwitzElement":
        return HurwitzElement(self.w2, -self.x2, -self.y2, -self.z2)

    def inverse(self) -> "HurwitzElement":
        # unit norm, so the inverse is the conjugate
        return self.conjugate()

    def __neg__(self) -> "HurwitzElement":
        return HurwitzElement(-self.w2, -self.x2, -self.y2, -self.z2)

    def is_identity(self) -> bool:
        return self == HURWITZ_ONE

    def real_part_is_half(self) -> bool:
        return self.w2 == 1

    def order(self) -> int:
        power = self
        for n in range(1, 25):
            if power.is_identity():
                return n
            power = power * self
        raise ArithmeticError("element order exceeds the group order")


HURWITZ_ONE = HurwitzElement(2, 0, 0, 0)
HURWITZ_MINUS_ONE = HurwitzElement(-2, 0, 0, 0)
HURWITZ_S = HurwitzElement(1, 1, 1, 1)
HURWITZ_T = HurwitzElement(1, 1, 1, -1)


@dataclass(frozen=True)
class HurwitzGroup:
    """The 24 unit Hurwitz quaternions with their multiplication."""

    elements: tuple[HurwitzElement, ...]
    s: HurwitzElement
    t: HurwitzElement

    def index(self, q: HurwitzElement) -> int:
        return self.elements.index(q)

    def order_six_elements(self) -> tuple[HurwitzElement, ...]:
        return tuple(q for q in self.elements if q.order() == 6)


@functools.lru_cache(maxsize=1)
def hurwitz_group() -> HurwitzGroup:
    """Build and self-check the group of 24 unit Hurwitz quaternions."""
    elements = []
    for axis in range(4):
        for sign in (2, -2):
            coords = [0, 0, 0, 0]
            coords[axis] = sign
            elements.append(HurwitzElement(*coords))
    for w in (1, -1):
        for x in (1, -1):
            for y in (1, -1):
                for z in (1, -1):
                    elements.append(HurwitzElement(w, x, y, z))
    elements = tuple(sorted(elements))
    universe = set(elements)
    for p in elements:
        for q in elements:
            if p * q not in universe:
                raise DataIntegrityError("quaternion units are not closed under product")
    s, t = HURWITZ_S, HURWITZ_T
    st2 = (s * t) * (s * t)
    if not (st2 == s * s * s == t * t * t == HURWITZ_MINUS_ONE):
        raise DataIntegrityError("generator relations fail for the quaternion units")
    if len(_generated_by(s, t)) != 24:
        raise DataIntegrityError("the two generators do not generate all 24 units")
    return HurwitzGroup(elements, s, t)


def _generated_by(*gens: HurwitzElement) -> set[HurwitzElement]:
    seen = {HURWITZ_ONE}
    frontier = [HURWITZ_ONE]
    while frontier:
        q = frontier.pop()
        for g in gens:
            nxt = q * g
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


# --- the matrix model: a 24-element subgroup of GL(4, F2) --------------------

# GL4Element values are invertible 4x4 F2Matrix instances.
GL4Element = F2Matrix

PSI_S_ROWS = ("0011", "0101", "1101", "0100")
PSI_T_ROWS = ("1100", "0001", "1000", "1010")

# Image of the central involution -1; generates the kernel of the two-sided
# vertex action as the pair (M, M).
CENTRAL_INVOLUTION_ROWS = ("0111", "0100", "1101", "0001")

# Order-3 matrix whose right multiplication fixes every colour of the
# first-column colouring (its first column is e1).
RIGHT_C3_ROWS = ("1100", "0101", "0010", "0100")

# The 24 vertex slots of the 24-cell model.  The first six form one
# octahedral vertex figure with antipodal pairs (0,1), (2,3), (4,5).
VERTEX_MATRIX_ROWS = (
    ("1000", "0100", "0010", "0001"),
    ("1001", "0100", "1100", "1110"),
    ("0010", "1010", "0011", "0100"),
    ("0111", "0101", "0110", "1011"),
    ("0110", "0001", "1101", "0101"),
    ("1101", "1110", "1001", "0101"),
    ("0111", "0100", "1101", "0001"),
    ("0011", "1011", "1001", "1110"),
    ("0110", "0100", "0011", "1110"),
    ("0010", "1011", "0111", "0001"),
    ("1100", "1011", "0110", "1110"),
    ("1101", "1011", "1000", "0001"),
    ("1001", "1010", "0111", "1011"),
    ("1100", "0001", "1000", "1010"),
    ("0011", "0101", "1101", "0100"),
    ("0111", "1110", "1100", "1010"),
    ("1100", "0101", "0010", "0100"),
    ("1000", "1110", "0011", "1010"),
    ("1101", "1010", "1100", "0100"),
    ("0010", "1110", "0110", "0101"),
    ("1000", "0101", "1001", "1011"),
    ("1001", "0001", "0010", "0101"),
    ("0110", "1010", "1000", "1011"),
    ("0011", "0001", "0111", "1010"),
)


def matrix_order(m: F2Matrix) -> int:
    """Multiplicative order of an invertible matrix (bounded search)."""
    ident = F2Matrix.identity(m.rows)
    power = m
    for n in range(1, 25):
        if power == ident:
            return n
        power = power @ m
    raise ArithmeticError("matrix order exceeds 24")


@functools.lru_cache(maxsize=1)
def _psi_table() -> dict[HurwitzElement, F2Matrix]:
    """The quaternion -> matrix homomorphism, extended from the generators.

    Built by breadth-first closure over words in the two generators; any
    revisit with a conflicting image means the generator matrices are
    corrupt, and raises.
    """
    group = hurwitz_group()
    images = {
        group.s: F2Matrix.from_strings(PSI_S_ROWS),
        group.t: F2Matrix.from_strings(PSI_T_ROWS),
    }
    table = {HURWITZ_ONE: F2Matrix.identity(4)}
    frontier = [HURWITZ_ONE]
    while frontier:
        q = frontier.pop()
        for gen, gen_img in images.items():
            nxt = q * gen
            nxt_img = table[q] @ gen_img
            if nxt in table:
                if table[nxt] != nxt_img:
                    raise DataIntegrityError("generator images are not a homomorphism")
            else:
                table[nxt] = nxt_img
                frontier.append(nxt)
    if len(table) != 24:
        raise DataIntegrityError("generator images generate the wrong group order")
    if len(set(table.values())) != 24:
        raise DataIntegrityError("quaternion-to-matrix map is not injective")
    for p in group.elements:
        for q in group.elements:
            if table[p * q] != table[p] @ table[q]:
                raise DataIntegrityError("quaternion-to-matrix map is not multiplicative")
    return table


def psi(q: HurwitzElement) -> GL4Element:
    """Image of a unit Hurwitz quaternion in GL(4, F2)."""
    return _psi_table()[q]


def adjacency_transport_holds() -> bool:
    """Re(p q^{-1}) = 1/2 iff the matrix of p q^{-1} has order 6, all pairs."""
    group = hurwitz_group()
    table = _psi_table()
    els = group.elements
    for i in range(24):
        for j in range(i + 1, 24):
            ratio = els[i] * els[j].inverse()
            quaternion_side = ratio.real_part_is_half()
            matrix_side = matrix_order(table[els[i]] @ table[els[j]].inverse()) == 6
            if quaternion_side != matrix_side:
                return False
    return True


# --- polytopes ----------------------------------------------------------------

@dataclass(frozen=True)
class VertexFigure:
    """Cube vertex figure: six facets, opposite pairs at (0,1), (2,3), (4,5)."""

    facets: tuple[int, ...]

    def __post_init__(self):
        if len(self.facets) != 6 or len(set(self.facets)) != 6:
            raise ValueError("a cube vertex figure needs six distinct facets")

    @property
    def opposite_pairs(self) -> tuple[tuple[int, int], ...]:
        f = self.facets
        return ((f[0], f[1]), (f[2], f[3]), (f[4], f[5]))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "VertexFigure":
        """Canonical ordering: each pair ascending, pairs sorted by first member."""
        ordered = sorted(tuple(sorted(p)) for p in pairs)
        if len(ordered) != 3:
            raise ValueError("expected exactly three opposite pairs")
        return cls(tuple(f for pair in ordered for f in pair))


@dataclass(frozen=True)
class Polytope:
    """Right-angled polytope given by its facet-intersection combinatorics.

    ``neighbour_masks[i]`` has bit j set when facets i and j meet; dual_K is
    the clique complex of that graph, capped at the stated dimension.  For
    the 24-cell model, ``vertex_matrices`` carries the group element
    labelling each facet slot.
    """

    name: str
    dim: int
    m: int
    neighbour_masks: tuple[int, ...]
    dual_K: FlagComplex
    ideal_vertices: tuple[VertexFigure, ...] = ()
    vertex_matrices: tuple[F2Matrix, ...] | None = None

    def __post_init__(self):
        if len(self.neighbour_masks) != self.m:
            raise ValueError("adjacency mask count must equal the facet count")
        for i, mask in enumerate(self.neighbour_masks):
            if mask >> self.m:
                raise ValueError("adjacency mask out of range")
            if (mask >> i) & 1:
                raise ValueError(f"facet {i} marked adjacent to itself")
            for j in range(self.m):
                if ((mask >> j) & 1) != ((self.neighbour_masks[j] >> i) & 1):
                    raise ValueError("adjacency is not symmetric")
        for fig in self.ideal_vertices:
            if any(not 0 <= f < self.m for f in fig.facets):
                raise ValueError("vertex figure references an unknown facet")
            for a, b in fig.opposite_pairs:
                if self.is_adjacent(a, b):
                    raise ValueError(f"opposite facets {a}, {b} must not be adjacent")
            members = fig.facets
            opposite = dict(fig.opposite_pairs)
            opposite.update((b, a) for a, b in fig.opposite_pairs)
            for x in members:
                for y in members:
                    if x < y and opposite.get(x) != y and not self.is_adjacent(x, y):
                        raise ValueError(f"non-opposite figure facets {x}, {y} must be adjacent")

    def is_adjacent(self, i: int, j: int) -> bool:
        return bool((self.neighbour_masks[i] >> j) & 1)

    def adjacency_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.m) for j in range(i + 1, self.m)
                if self.is_adjacent(i, j)]

    def opposite_facet_pairs(self) -> tuple[tuple[int, int], ...]:
        """Non-adjacency pairs, for polytopes where each facet misses exactly one."""
        pairs = []
        for i in range(self.m):
            missing = [j for j in range(self.m) if j != i and not self.is_adjacent(i, j)]
            if len(missing) != 1:
                raise ValueError("facet does not have a unique opposite")
            if i < missing[0]:
                pairs.append((i, missing[0]))
        return tuple(pairs)


@functools.lru_cache(maxsize=1)
def cube3() -> Polytope:
    """The labelled 3-cube: opposite facet pairs (0,1), (2,3), (4,5)."""
    m = 6
    full = (1 << m) - 1
    opposite = {0: 1, 1: 0, 2: 3, 3: 2, 4: 5, 5: 4}
    masks = tuple(full ^ (1 << i) ^ (1 << opposite[i]) for i in range(m))
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m) if (masks[i] >> j) & 1]
    dual = clique_complex(range(m), pairs, 2)
    return Polytope(name="cube3", dim=3, m=m, neighbour_masks=masks, dual_K=dual)


def _find_octahedra(masks: Sequence[int]) -> set[frozenset[int]]:
    """Exhaustive search for 6-vertex subsets inducing an octahedron graph."""
    import itertools

    n = len(masks)
    found = set()
    for combo in itertools.combinations(range(n), 6):
        bits = 0
        for v in combo:
            bits |= 1 << v
        if any((masks[v] & bits).bit_count() != 4 for v in combo):
            continue
        # 4-regular on 6 vertices with a perfect matching of non-edges
        non_edges = [(a, b) for a, b in itertools.combinations(combo, 2)
                     if not (masks[a] >> b) & 1]
        if len(non_edges) == 3 and len({v for e in non_edges for v in e}) == 6:
            found.add(frozenset(combo))
    return found


def twentyfour_cell(vertex_matrices: tuple[F2Matrix, ...] | None = None) -> Polytope:
    """The ideal right-angled 24-cell in the self-dual vertex model.

    Every structural fact is recomputed and cross-checked, so a corrupted
    matrix table raises DataIntegrityError instead of propagating silently.
    """
    if vertex_matrices is None:
        return _default_twentyfour_cell()
    return _build_twentyfour_cell(tuple(vertex_matrices))


@functools.lru_cache(maxsize=1)
def _default_twentyfour_cell() -> Polytope:
    mats = tuple(F2Matrix.from_strings(rows) for rows in VERTEX_MATRIX_ROWS)
    return _build_twentyfour_cell(mats)


def _build_twentyfour_cell(mats: tuple[F2Matrix, ...]) -> Polytope:
    if len(mats) != 24 or len(set(mats)) != 24:
        raise DataIntegrityError("expected 24 distinct vertex matrices")
    try:
        inverses = [m.inverse() for m in mats]
    except ValueError as exc:
        raise DataIntegrityError(f"vertex matrix is singular: {exc}") from exc
    if set(mats) != set(_psi_table().values()):
        raise DataIntegrityError("vertex matrices do not match the quaternion image group")

    index = {m: i for i, m in enumerate(mats)}
    n = 24
    masks = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if matrix_order(mats[i] @ inverses[j]) == 6:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    if any(mask.bit_count() != 8 for mask in masks):
        raise DataIntegrityError("24-cell adjacency is not 8-regular")

    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if (masks[i] >> j) & 1]
    dual = clique_complex(range(n), pairs, 2)
    if dual.counts() != [24, 96, 96] or dual.has_clique_above_cap():
        raise DataIntegrityError("24-cell dual complex has the wrong face counts")

    # Vertex figures two ways: the orbit of the first six slots under left
    # multiplication, and a blind induced-subgraph search.  They must agree.
    first_six = mats[:6]
    orbit = set()
    for h in mats:
        try:
            members = frozenset(index[h @ v] for v in first_six)
        except KeyError as exc:
            raise DataIntegrityError("vertex matrices are not closed under product") from exc
        orbit.add(members)
    if len(orbit) != 24:
        raise DataIntegrityError("expected 24 octahedra in the multiplication orbit")
    searched = _find_octahedra(masks)
    if searched != orbit:
        raise DataIntegrityError("octahedron orbit and exhaustive search disagree")

    figures = []
    for members in sorted(orbit, key=sorted):
        antipodal = [(a, b) for a in members for b in members
                     if a < b and not (masks[a] >> b) & 1]
        figures.append(VertexFigure.from_pairs(antipodal))

    return Polytope(
        name="24cell",
        dim=4,
        m=n,
        neighbour_masks=tuple(masks),
        dual_K=dual,
        ideal_vertices=tuple(figures),
        vertex_matrices=mats,
    )


# --- symmetries ----------------------------------------------------------------

# A symmetry is a facet permutation: position i holds the image of facet i.
Symmetry = tuple[int, ...]


def identity_symmetry(m: int) -> Symmetry:
    return tuple(range(m))


def compose(s: Symmetry, t: Symmetry) -> Symmetry:
    """s after t: facet i goes to s[t[i]]."""
    return tuple(s[t[i]] for i in range(len(s)))


def invert(s: Symmetry) -> Symmetry:
    out = [0] * len(s)
    for i, v in enumerate(s):
        out[v] = i
    return tuple(out)


def graph_automorphisms(p: Polytope) -> tuple[Symmetry, ...]:
    """All facet permutations preserving adjacency, by backtracking."""
    masks = p.neighbour_masks
    n = p.m
    if n > 24:
        raise ValueError("automorphism search supports at most 24 facets")
    full = (1 << n) - 1
    degree_mask: dict[int, int] = {}
    for v in range(n):
        d = masks[v].bit_count()
        degree_mask[d] = degree_mask.get(d, 0) | (1 << v)

    order = _constraint_order(masks)
    prefix_nbrs: list[list[int]] = []
    prefix_others: list[list[int]] = []
    for d, v in enumerate(order):
        nbrs, others = [], []
        for u in order[:d]:
            (nbrs if (masks[v] >> u) & 1 else others).append(u)
        prefix_nbrs.append(nbrs)
        prefix_others.append(others)

    autos: list[Symmetry] = []
    img = [-1] * n

    def backtrack(depth: int, used: int) -> None:
        if depth == n:
            autos.append(tuple(img))
            return
        v = order[depth]
        cand = full & ~used & degree_mask[masks[v].bit_count()]
        for u in prefix_nbrs[depth]:
            cand &= masks[img[u]]
            if not cand:
                return
        for u in prefix_others[depth]:
            cand &= ~masks[img[u]] & full
            if not cand:
                return
        while cand:
            low = cand & -cand
            cand ^= low
            c = low.bit_length() - 1
            img[v] = c
            backtrack(depth + 1, used | low)
        img[v] = -1

    backtrack(0, 0)
    return tuple(sorted(autos))


def _constraint_order(masks: Sequence[int]) -> list[int]:
    n = len(masks)
    order = [0]
    placed = 1 << 0
    while len(order) < n:
        best = max((v for v in range(n) if not (placed >> v) & 1),
                   key=lambda v: ((masks[v] & placed).bit_count(), -v))
        order.append(best)
        placed |= 1 << best
    return order


@functools.lru_cache(maxsize=8)
def symmetry_group(p: Polytope) -> tuple[Symmetry, ...]:
    """Facet permutations preserving adjacency and the vertex-figure set."""
    autos = graph_automorphisms(p)
    if not p.ideal_vertices:
        return autos
    figure_sets = {frozenset(f.facets) for f in p.ideal_vertices}
    kept = tuple(s for s in autos
                 if all(frozenset(s[f] for f in fig.facets) in figure_sets
                        for fig in p.ideal_vertices))
    return kept


def left_action(p: Polytope, h: F2Matrix) -> Symmetry:
    """Symmetry of the matrix-model polytope sending each slot V to h V."""
    return _matrix_action(p, lambda v: h @ v)


def right_action(p: Polytope, g: F2Matrix) -> Symmetry:
    """Symmetry of the matrix-model polytope sending each slot V to V g."""
    return _matrix_action(p, lambda v: v @ g)


def _matrix_action(p: Polytope, move) -> Symmetry:
    if p.vertex_matrices is None:
        raise ValueError("polytope carries no vertex matrices")
    index = {m: i for i, m in enumerate(p.vertex_matrices)}
    perm = []
    for v in p.vertex_matrices:
        target = move(v)
        if target not in index:
            raise ValueError("the action does not preserve the vertex set")
        perm.append(index[target])
    return tuple(perm)


# --- generic polytope serialization --------------------------------------------

def polytope_from_dict(data: dict) -> Polytope:
    """Build a polytope from the generic JSON form.

    Expected keys: facets, adjacency, ideal_vertices (optional, each entry
    listing six facets ordered by opposite pairs), max_dual_dim.
    """
    try:
        m = int(data["facets"])
        adjacency = [(int(a), int(b)) for a, b in data["adjacency"]]
        max_dim = int(data.get("max_dual_dim", 2))
        raw_figures = data.get("ideal_vertices", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad polytope description: {exc}") from exc
    if m <= 0 or m > 24:
        raise ValueError("facet count must be between 1 and 24")
    masks = [0] * m
    for a, b in adjacency:
        if not (0 <= a < m and 0 <= b < m) or a == b:
            raise ValueError(f"bad adjacency pair ({a}, {b})")
        masks[a] |= 1 << b
        masks[b] |= 1 << a
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m) if (masks[i] >> j) & 1]
    dual = clique_complex(range(m), pairs, max_dim)
    figures = []
    for entry in raw_figures:
        facets = [int(f) for f in entry]
        if len(facets) != 6:
            raise ValueError("each ideal vertex must list six facets")
        declared = [(facets[0], facets[1]), (facets[2], facets[3]), (facets[4], facets[5])]
        figures.append(VertexFigure.from_pairs(declared))
    dim = max_dim + 2 if figures else max_dim + 1
    return Polytope(
        name=str(data.get("name", "custom")),
        dim=dim,
        m=m,
        neighbour_masks=tuple(masks),
        dual_K=dual,
        ideal_vertices=tuple(figures),
    )


def polytope_to_dict(p: Polytope) -> dict:
    return {
        "name": p.name,
        "facets": p.m,
        "adjacency": [list(e) for e in p.adjacency_pairs()],
        "ideal_vertices": [list(f.facets) for f in p.ideal_vertices],
        "max_dual_dim": p.dual_K.max_dim,
    }


def builtin_polytope(name: str) -> Polytope:
    if name == "cube3":
        return cube3()
    if name == "24cell":
        return twentyfour_cell()
    raise ValueError(f"unknown polytope {name!r}; expected cube3 or 24cell")
