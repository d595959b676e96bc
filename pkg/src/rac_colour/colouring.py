"""Colourings of right-angled polytopes and their classification.

A colouring assigns a nonzero GF(2) vector to every facet.  From the
defining matrix (colours as columns) we derive properness, orientability,
the flat type of cube colourings, cusp counts of ideal polytopes,
equivalence-class canonical forms, and the admissible symmetry group.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .f2 import F2Matrix, F2Vector, Subspace, contains_all_ones, rank, rref, row_space
from .polytopes import (Polytope, Symmetry, VertexFigure, cube3, symmetry_group)


class FlatClass(enum.Enum):
    """The three orientable flat 3-manifolds arising from cube colourings."""

    F1_TORUS = "F1_torus"
    F2_HALF_TWIST = "F2_half_twist"
    F6_HANTZSCHE_WENDT = "F6_hantzsche_wendt"

    @property
    def short(self) -> str:
        return self.value.split("_")[0]

    @classmethod
    def from_short(cls, tag: str) -> "FlatClass":
        for member in cls:
            if member.short == tag:
                return member
        raise ValueError(f"unknown flat class {tag!r}")


@dataclass(frozen=True)
class Colouring:
    """Facet -> nonzero vector assignment over a fixed polytope."""

    polytope: Polytope
    k: int
    colours: tuple[F2Vector, ...]

    def __post_init__(self):
        if len(self.colours) != self.polytope.m:
            raise ValueError("one colour per facet is required")
        if any(v.length != self.k for v in self.colours):
            raise ValueError("colour length must equal k")

    @property
    def rank(self) -> int:
        return rank(defining_matrix(self))

    def is_surjective(self) -> bool:
        return self.rank == self.k


def defining_matrix(c: Colouring, ordering: Sequence[int] | None = None) -> F2Matrix:
    """k x m matrix whose column i is the colour of the i-th facet listed."""
    if ordering is None:
        ordering = range(c.polytope.m)
    if sorted(ordering) != list(range(c.polytope.m)):
        raise ValueError("ordering must be a permutation of the facets")
    return F2Matrix.from_columns([c.colours[f] for f in ordering])


def is_proper(c: Colouring) -> bool:
    """Linear independence of the colours on every simplex of the dual complex."""
    return offending_simplex(c) is None


def offending_simplex(c: Colouring) -> tuple[int, ...] | None:
    """First dual simplex whose colours are dependent, or None if proper."""
    for level in c.polytope.dual_K.simplices:
        for simplex in level:
            vectors = [c.colours[v] for v in simplex]
            if rank(F2Matrix.from_columns(vectors)) != len(simplex):
                return simplex
    return None


def is_orientable(c: Colouring) -> bool:
    """All-ones vector membership in the row space of the defining matrix."""
    return contains_all_ones(row_space(defining_matrix(c)))


def t_set(p: Polytope) -> tuple[F2Vector, ...]:
    """Opposite-pair indicator vectors e_a + e_b of a cube-like polytope.

    Recomputed from the adjacency (each facet has a unique opposite), so a
    relabelled cube gets the matching vectors automatically.
    """
    pairs = p.opposite_facet_pairs()
    if len(pairs) * 2 != p.m:
        raise ValueError("opposite pairs do not partition the facets")
    return tuple(F2Vector.unit(a, p.m) + F2Vector.unit(b, p.m) for a, b in pairs)


def classify_flat_cube(c: Colouring) -> FlatClass:
    """Flat type of a proper orientable colouring of a 3-cube.

    Counts how many opposite-pair vectors fall in the row space: three for
    the torus, one for the half-twist, none for the Hantzsche-Wendt case.
    Two is impossible for orientable colourings.
    """
    if c.polytope.m != 6:
        raise ValueError("flat classification needs a 6-facet cube")
    if not is_proper(c):
        raise ValueError("colouring is not proper")
    if not is_orientable(c):
        raise ValueError("colouring is not orientable")
    space = row_space(defining_matrix(c))
    hits = sum(1 for t in t_set(c.polytope) if space.contains(t))
    if hits == 3:
        return FlatClass.F1_TORUS
    if hits == 1:
        return FlatClass.F2_HALF_TWIST
    if hits == 0:
        return FlatClass.F6_HANTZSCHE_WENDT
    raise AssertionError("two opposite-pair vectors in the row space of an orientable colouring")


def restrict_to_vertex_figure(c: Colouring, v: VertexFigure) -> Colouring:
    """Cube colouring induced on a vertex figure, in opposite-pair order."""
    if v not in c.polytope.ideal_vertices:
        raise ValueError("vertex figure does not belong to the polytope")
    return Colouring(cube3(), c.k, tuple(c.colours[f] for f in v.facets))


@dataclass(frozen=True)
class CuspCensus:
    """Per-ideal-vertex span dimensions and lifted cusp counts."""

    per_vertex: tuple[tuple[int, int], ...]  # (d_p, copies = 2^(k - d_p))
    total: int


def cusp_census(c: Colouring) -> CuspCensus:
    """Cusp count of the cover: each ideal vertex lifts to 2^(k - d_p) cusps.

    d_p is the dimension of the span of the six colours at the vertex, so
    the copy count is the index of that span in the full colour space.
    """
    if not is_proper(c):
        raise ValueError("colouring is not proper")
    if not c.polytope.ideal_vertices:
        raise ValueError("polytope has no ideal vertices")
    per_vertex = []
    for fig in c.polytope.ideal_vertices:
        d = rank(F2Matrix.from_columns([c.colours[f] for f in fig.facets]))
        per_vertex.append((d, 1 << (c.k - d)))
    return CuspCensus(tuple(per_vertex), sum(n for _, n in per_vertex))


def dj_canonical_form(c: Colouring, symmetries: Sequence[Symmetry] | None = None) -> F2Matrix:
    """Canonical matrix of the equivalence class of a colouring.

    Minimizes rref over all column permutations by polytope symmetries;
    rref already quotients the left GL(k) action, so equal outputs
    characterize equivalent colourings of the same rank space.
    """
    if symmetries is None:
        symmetries = symmetry_group(c.polytope)
    matrix = defining_matrix(c)
    best = None
    for s in symmetries:
        candidate = rref(matrix.permute_columns(s))
        if best is None or candidate.key() < best.key():
            best = candidate
    return best


def apply_equivalence(c: Colouring, linear: F2Matrix, s: Symmetry) -> Colouring:
    """The colouring linear . c . s, i.e. facet i gets linear @ colour(s[i])."""
    if linear.rows != c.k or linear.cols != c.k or not linear.is_invertible():
        raise ValueError("the recolouring map must be invertible k x k")
    return Colouring(c.polytope, c.k,
                     tuple(linear.mul_vector(c.colours[s[i]]) for i in range(c.polytope.m)))


def dj_invariants(c: Colouring) -> tuple[int, bool]:
    """(independent opposite pairs, whether the matrix kills the all-ones vector).

    Both quantities are unchanged by recolouring and by cube symmetries, so
    they separate classes of equal rank and flat type.
    """
    if not is_proper(c):
        raise ValueError("colouring is not proper")
    pairs = c.polytope.opposite_facet_pairs()
    independent = sum(1 for a, b in pairs if c.colours[a] != c.colours[b])
    image = defining_matrix(c).mul_vector(F2Vector.ones(c.polytope.m))
    return independent, image.is_zero()


@dataclass(frozen=True)
class AdmissibleGroup:
    """Symmetries whose colour permutation extends to a linear map."""

    elements: tuple[tuple[Symmetry, F2Matrix], ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def phi(self) -> Mapping[Symmetry, F2Matrix]:
        return dict(self.elements)

    def symmetries(self) -> tuple[Symmetry, ...]:
        return tuple(s for s, _ in self.elements)


def admissible_group(c: Colouring) -> AdmissibleGroup:
    """All symmetries s with an invertible phi satisfying phi(colour(f)) = colour(s(f)).

    phi is solved on a maximal independent subset of the colours and then
    verified on every facet, which also checks that equal colours stay
    equal under the induced correspondence.
    """
    if not c.is_surjective():
        raise ValueError("admissible symmetries need a surjective colouring")
    basis_facets = _independent_colour_facets(c)
    base = F2Matrix.from_columns([c.colours[f] for f in basis_facets])
    base_inv = base.inverse()
    elements = []
    for s in symmetry_group(c.polytope):
        target = F2Matrix.from_columns([c.colours[s[f]] for f in basis_facets])
        phi = target @ base_inv
        if not phi.is_invertible():
            continue
        if all(phi.mul_vector(c.colours[f]) == c.colours[s[f]] for f in range(c.polytope.m)):
            elements.append((s, phi))
    return AdmissibleGroup(tuple(elements))


def coloured_isometry_order(c: Colouring, adm: AdmissibleGroup | None = None) -> int:
    """Order of the coloured isometry group: 2^k times the admissible order."""
    if adm is None:
        adm = admissible_group(c)
    return (1 << c.k) * adm.order


def _independent_colour_facets(c: Colouring) -> list[int]:
    chosen: list[int] = []
    vectors: list[F2Vector] = []
    for f in range(c.polytope.m):
        trial = vectors + [c.colours[f]]
        if rank(F2Matrix.from_row_vectors(trial)) == len(trial):
            chosen.append(f)
            vectors.append(c.colours[f])
        if len(chosen) == c.k:
            return chosen
    raise ValueError("colours do not span the colour space")


def first_column_colouring(p: Polytope) -> Colouring:
    """Colour every matrix-labelled slot by the first column of its matrix."""
    if p.vertex_matrices is None:
        raise ValueError("polytope carries no vertex matrices")
    k = p.vertex_matrices[0].rows
    return Colouring(p, k, tuple(m.column(0) for m in p.vertex_matrices))


# --- serialization ---------------------------------------------------------------

def colouring_to_dict(c: Colouring) -> dict:
    return {
        "polytope": c.polytope.name,
        "k": c.k,
        "columns": [v.to_string() for v in c.colours],
    }


def colouring_from_dict(data: dict, polytope: Polytope) -> Colouring:
    try:
        k = int(data["k"])
        columns = list(data["columns"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad colouring description: {exc}") from exc
    if len(columns) != polytope.m:
        raise ValueError(
            f"expected {polytope.m} columns for {polytope.name}, got {len(columns)}")
    colours = []
    for i, col in enumerate(columns):
        try:
            v = F2Vector.from_string(col)
        except ValueError as exc:
            raise ValueError(f"columns[{i}]: {exc}") from exc
        if v.length != k:
            raise ValueError(f"columns[{i}] has length {v.length}, expected k = {k}")
        colours.append(v)
    return Colouring(polytope, k, tuple(colours))
