"""Exhaustive, symmetry-pruned enumeration of proper colourings.

The search walks facets in a fixed order, assigning colour vectors encoded
as small integers (bit i = coordinate i).  Three reductions keep the tree
small without losing equivalence classes:

* colour-space normalization: the first colour is the first basis vector,
  and every later colour is either inside the span of the directions seen
  so far or the next fresh basis vector.  This quotients the GL(k) factor
  out of the enumeration entirely.
* constraint propagation: a facet's colour must avoid the XOR of the
  already-assigned part of every dual simplex through it, which is exactly
  properness restricted to assigned facets; completed vertex figures are
  tested against the requested cusp conditions on the spot.
* orbit pruning: a partial assignment is abandoned unless it is the
  lexicographic minimum among its images under all polytope symmetries
  that stabilize the assigned facet set, compared after normalization.

Every class keeps exactly one surviving leaf (the lexicographic minimum of
its orbit), and emitted representatives are deduplicated by their
equivalence-class canonical matrix, so pruned and unpruned runs agree.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .colouring import (Colouring, FlatClass, classify_flat_cube, cusp_census,
                        defining_matrix, dj_canonical_form, dj_invariants,
                        is_orientable, is_proper, restrict_to_vertex_figure)
from .f2 import F2Matrix, F2Vector
from .polytopes import Polytope, Symmetry, cube3, symmetry_group, twentyfour_cell
from .toric import betti_numbers


@dataclass(frozen=True)
class SearchSpec:
    """What to enumerate: polytope, rank window, and filters."""

    polytope: Polytope
    k_min: int
    k_max: int
    orientable: bool = False
    surjective: bool = True
    cusp_class: FlatClass | None = None

    def __post_init__(self):
        low = self.polytope.dim - 1 if self.polytope.ideal_vertices else self.polytope.dim
        if not low <= self.k_min <= self.k_max <= self.polytope.m:
            raise ValueError(
                f"rank window [{self.k_min}, {self.k_max}] outside [{low}, {self.polytope.m}]")
        if self.cusp_class is not None and not self.polytope.ideal_vertices:
            raise ValueError("cusp filter requires a polytope with ideal vertices")

    def summary(self) -> dict:
        return {
            "polytope": self.polytope.name,
            "rank_min": self.k_min,
            "rank_max": self.k_max,
            "orientable": self.orientable,
            "cusp_class": self.cusp_class.short if self.cusp_class else None,
        }


@dataclass
class DJClass:
    """One equivalence class of colourings found by a census."""

    canonical: F2Matrix
    representative: Colouring
    invariants: dict

    @property
    def rank(self) -> int:
        return self.representative.k

    @property
    def label(self) -> str:
        return self.invariants["label"]


@dataclass
class CensusResult:
    spec: SearchSpec
    classes: tuple[DJClass, ...]
    counts: dict[str, int]
    wall_time: float

    def to_dict(self) -> dict:
        """Stable JSON form; wall time deliberately excluded (see CLI notes)."""
        return {
            "spec": self.spec.summary(),
            "classes": [
                {
                    "canonical": cls.canonical.to_strings(),
                    "representative_columns": [v.to_string() for v in
                                               cls.representative.colours],
                    "labels": _jsonable(cls.invariants),
                }
                for cls in self.classes
            ],
            "counts": dict(sorted(self.counts.items())),
        }


def _jsonable(data: dict) -> dict:
    return {key: list(val) if isinstance(val, tuple) else val
            for key, val in data.items()}


# --- search context -------------------------------------------------------------

@dataclass
class _Context:
    polytope: Polytope
    symmetries: tuple[Symmetry, ...]
    k_min: int
    k_max: int
    orientable: bool
    eps_cut: bool
    t_target: int | None
    order: tuple[int, ...]
    sim_members: tuple[tuple[int, ...], ...]
    sims_of: tuple[tuple[int, ...], ...]
    octs_of: tuple[tuple[int, ...], ...]
    oct_facets: tuple[tuple[int, ...], ...]
    stabs: tuple[tuple[Symmetry, ...], ...]
    prune: bool
    dead_mask: int
    completion_memo: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.polytope.m


_T_HITS = {FlatClass.F1_TORUS: 3, FlatClass.F2_HALF_TWIST: 1,
           FlatClass.F6_HANTZSCHE_WENDT: 0}


def _visit_order(p: Polytope) -> tuple[int, ...]:
    """First vertex figure first (if any), then most-connected-first."""
    order: list[int] = []
    placed = 0
    if p.ideal_vertices:
        for f in p.ideal_vertices[0].facets:
            order.append(f)
            placed |= 1 << f
    else:
        order.append(0)
        placed = 1
    masks = p.neighbour_masks
    while len(order) < p.m:
        best = max((v for v in range(p.m) if not (placed >> v) & 1),
                   key=lambda v: ((masks[v] & placed).bit_count(), -v))
        order.append(best)
        placed |= 1 << best
    return tuple(order)


def _build_context(spec: SearchSpec, prune: bool) -> _Context:
    p = spec.polytope
    syms = symmetry_group(p)
    order = _visit_order(p)

    sim_members: list[tuple[int, ...]] = []
    sims_of: list[list[int]] = [[] for _ in range(p.m)]
    for level in p.dual_K.simplices[1:]:
        for simplex in level:
            sid = len(sim_members)
            sim_members.append(simplex)
            for f in simplex:
                sims_of[f].append(sid)

    octs_of: list[list[int]] = [[] for _ in range(p.m)]
    oct_facets = tuple(fig.facets for fig in p.ideal_vertices)
    for oid, members in enumerate(oct_facets):
        for f in members:
            octs_of[f].append(oid)

    identity = tuple(range(p.m))
    stabs: list[tuple[Symmetry, ...]] = [()]
    prefix: set[int] = set()
    for d in range(p.m):
        prefix.add(order[d])
        stabs.append(tuple(s for s in syms
                           if s != identity and {s[v] for v in prefix} == prefix))

    eps_cut = bool(p.ideal_vertices) and (spec.orientable or spec.cusp_class is not None)
    t_target = _T_HITS[spec.cusp_class] if spec.cusp_class is not None else None
    return _Context(
        polytope=p,
        symmetries=syms,
        k_min=spec.k_min,
        k_max=spec.k_max,
        orientable=spec.orientable,
        eps_cut=eps_cut,
        t_target=t_target,
        order=order,
        sim_members=tuple(sim_members),
        sims_of=tuple(tuple(s) for s in sims_of),
        octs_of=tuple(tuple(o) for o in octs_of),
        oct_facets=oct_facets,
        stabs=tuple(stabs),
        prune=prune,
        dead_mask=((1 << (1 << spec.k_max)) - 1) ^ 1,
    )


# --- inner loops ----------------------------------------------------------------

def _octa_ok(cols: list[int], k: int, eps_cut: bool, t_target: int | None) -> bool:
    """Cusp conditions on a fully coloured vertex figure.

    cols lists the six colours in figure order, so the opposite-pair
    indicator vectors are the fixed bit patterns 3, 12 and 48.
    """
    rows = []
    for i in range(k):
        w = 0
        for j, c in enumerate(cols):
            w |= ((c >> i) & 1) << j
        rows.append(w)
    space = {0}
    for r in rows:
        space |= {x ^ r for x in space}
    if eps_cut and 63 not in space:
        return False
    if t_target is not None:
        hits = (3 in space) + (12 in space) + (48 in space)
        if hits != t_target:
            return False
    return True


def _rank_of_words(words: Sequence[int]) -> int:
    lead: dict[int, int] = {}
    for w in words:
        while w:
            high = 1 << (w.bit_length() - 1)
            other = lead.get(high)
            if other is None:
                lead[high] = w
                break
            w ^= other
    return len(lead)


def _all_ones_in_row_space(cols: Sequence[int], r: int, m: int) -> bool:
    rows = []
    for i in range(r):
        w = 0
        for j, c in enumerate(cols):
            w |= ((c >> i) & 1) << j
        rows.append(w)
    base = _rank_of_words(rows)
    return _rank_of_words(rows + [(1 << m) - 1]) == base


def _beats_assignment(assigned: Sequence[int], order: Sequence[int], depth: int,
                      stab: Sequence[Symmetry]) -> bool:
    """Whether any stabilizing symmetry yields a smaller normalized prefix.

    The current prefix is already normalized by construction, so each image
    is normalized on the fly and compared entrywise with early exit.
    """
    for s in stab:
        lead: dict[int, tuple[int, int]] = {}
        ndirs = 0
        for i in range(depth):
            t = assigned[s[order[i]]]
            residual, image = t, 0
            while residual:
                high = 1 << (residual.bit_length() - 1)
                pair = lead.get(high)
                if pair is None:
                    break
                residual ^= pair[0]
                image ^= pair[1]
            if residual:
                value = 1 << ndirs
                ndirs += 1
                lead[1 << (residual.bit_length() - 1)] = (residual, image ^ value)
            else:
                value = image
            current = assigned[order[i]]
            if value != current:
                if value < current:
                    return True
                break
    return False


def orbit_prune(partial_colours: Sequence[F2Vector],
                visit_order: Sequence[int],
                symmetries: Sequence[Symmetry]) -> bool:
    """True iff a partial assignment is canonical in its orbit.

    The assignment colours visit_order[i] with partial_colours[i]; the
    orbit combines symmetries stabilizing the assigned facet set with
    arbitrary invertible recolourings, the latter handled by comparing
    normalized forms.
    """
    depth = len(partial_colours)
    if depth == 0:
        return True
    m = len(visit_order) if len(visit_order) >= max(visit_order) + 1 else max(visit_order) + 1
    for s in symmetries:
        m = max(m, len(s))
    assigned = [-1] * m
    ints = [sum(v[i] << i for i in range(v.length)) for v in partial_colours]
    normalized = _normalize_sequence(ints)
    prefix = set()
    for i in range(depth):
        assigned[visit_order[i]] = normalized[i]
        prefix.add(visit_order[i])
    identity = tuple(range(len(symmetries[0]))) if symmetries else ()
    stab = [s for s in symmetries
            if s != identity and {s[v] for v in prefix} == prefix]
    return not _beats_assignment(assigned, visit_order, depth, stab)


def _normalize_sequence(values: Sequence[int]) -> list[int]:
    lead: dict[int, tuple[int, int]] = {}
    ndirs = 0
    out = []
    for t in values:
        residual, image = t, 0
        while residual:
            high = 1 << (residual.bit_length() - 1)
            pair = lead.get(high)
            if pair is None:
                break
            residual ^= pair[0]
            image ^= pair[1]
        if residual:
            value = 1 << ndirs
            ndirs += 1
            lead[1 << (residual.bit_length() - 1)] = (residual, image ^ value)
        else:
            value = image
        out.append(value)
    return out


class _State:
    """Mutable search state with trail-based undo.

    forbid[v] is a bitmask over colour values: bit w set means facet v must
    not take value w.  Simplex counters feed it by forward checking: when a
    dual simplex has exactly one unassigned member left, the XOR of its
    assigned colours becomes forbidden there.  Vertex figures with one
    member left contribute every completion that would violate the
    requested cusp conditions.
    """

    __slots__ = ("assigned", "forbid", "sim_count", "sim_acc", "oct_count")

    def __init__(self, ctx: _Context):
        self.assigned = [-1] * ctx.m
        self.forbid = [1] * ctx.m
        self.sim_count = [len(members) for members in ctx.sim_members]
        self.sim_acc = [0] * len(ctx.sim_members)
        self.oct_count = [0] * len(ctx.oct_facets)


def _apply(ctx: _Context, st: _State, v: int, t: int):
    """Assign colour t to facet v; returns (dead, forbid-undo trail)."""
    assigned = st.assigned
    forbid = st.forbid
    sim_count = st.sim_count
    sim_acc = st.sim_acc
    dead_mask = ctx.dead_mask

    assigned[v] = t
    trail: list[tuple[int, int]] = []
    dead = False
    for sid in ctx.sims_of[v]:
        sim_count[sid] -= 1
        sim_acc[sid] ^= t
        if sim_count[sid] == 1:
            members = ctx.sim_members[sid]
            u = -1
            for f in members:
                if assigned[f] < 0:
                    u = f
                    break
            old = forbid[u]
            new = old | (1 << sim_acc[sid])
            if new != old:
                forbid[u] = new
                trail.append((u, old))
                if new & dead_mask == dead_mask:
                    dead = True

    octa_active = ctx.eps_cut or ctx.t_target is not None
    for oid in ctx.octs_of[v]:
        st.oct_count[oid] += 1
        if not octa_active or dead:
            continue
        count = st.oct_count[oid]
        members = ctx.oct_facets[oid]
        if count == 5:
            u = -1
            slot = -1
            for pos, f in enumerate(members):
                if assigned[f] < 0:
                    u, slot = f, pos
                    break
            key = tuple(assigned[f] for f in members)
            bad = ctx.completion_memo.get(key)
            if bad is None:
                cols = list(key)
                bad = 0
                for value in range(1, 1 << ctx.k_max):
                    cols[slot] = value
                    if not _octa_ok(cols, ctx.k_max, ctx.eps_cut, ctx.t_target):
                        bad |= 1 << value
                ctx.completion_memo[key] = bad
            old = forbid[u]
            new = old | bad
            if new != old:
                forbid[u] = new
                trail.append((u, old))
                if new & dead_mask == dead_mask:
                    dead = True
        elif count == 6:
            # completion through the count-5 lookahead cannot violate the cusp
            # conditions, so this only guards replays and direct state edits
            assert _octa_ok([assigned[f] for f in members], ctx.k_max,
                            ctx.eps_cut, ctx.t_target), "vertex figure check bypassed"
    return dead, trail


def _undo(ctx: _Context, st: _State, v: int, t: int, trail: list[tuple[int, int]]) -> None:
    for u, old in reversed(trail):
        st.forbid[u] = old
    for oid in ctx.octs_of[v]:
        st.oct_count[oid] -= 1
    for sid in ctx.sims_of[v]:
        st.sim_count[sid] += 1
        st.sim_acc[sid] ^= t
    st.assigned[v] = -1


def _dfs(ctx: _Context, depth: int, ndirs: int, st: _State,
         split_depth: int | None,
         leaves: list[tuple[int, tuple[int, ...]]],
         prefixes: list[tuple[int, tuple[int, ...]]] | None) -> None:
    m = ctx.m
    if split_depth is not None and depth == split_depth:
        prefixes.append((ndirs, tuple(st.assigned)))
        return
    if depth == m:
        if ndirs < ctx.k_min:
            return
        cols = tuple(st.assigned)
        if ctx.orientable and not _all_ones_in_row_space(cols, ndirs, m):
            return
        leaves.append((ndirs, cols))
        return

    v = ctx.order[depth]
    assigned = st.assigned
    span = 1 << ndirs
    allowed = ~st.forbid[v] & ((1 << span) - 1)
    candidates = []
    while allowed:
        low = allowed & -allowed
        allowed ^= low
        candidates.append(low.bit_length() - 1)
    if ndirs < ctx.k_max and not (st.forbid[v] >> span) & 1:
        candidates.append(span)

    remaining_after = m - depth - 1
    next_stab = ctx.stabs[depth + 1] if ctx.prune else ()
    for t in candidates:
        new_dirs = ndirs + 1 if t == span else ndirs
        if new_dirs + remaining_after < ctx.k_min:
            continue
        dead, trail = _apply(ctx, st, v, t)
        if not dead and not (next_stab and
                             _beats_assignment(assigned, ctx.order, depth + 1, next_stab)):
            _dfs(ctx, depth + 1, new_dirs, st, split_depth, leaves, prefixes)
        _undo(ctx, st, v, t, trail)


# --- assembling results -----------------------------------------------------------

def _colouring_from_ints(p: Polytope, r: int, cols: Sequence[int]) -> Colouring:
    vectors = tuple(F2Vector.from_entries([(c >> i) & 1 for i in range(r)]) for c in cols)
    return Colouring(p, r, vectors)


def _collect_classes(ctx: _Context,
                     leaves: Sequence[tuple[int, tuple[int, ...]]]):
    """Deduplicate leaves by canonical matrix; keep the smallest witness."""
    out: dict[tuple, tuple[int, ...]] = {}
    for r, cols in leaves:
        colouring = _colouring_from_ints(ctx.polytope, r, cols)
        canon = dj_canonical_form(colouring, ctx.symmetries)
        key = (r, canon.row_words)
        prev = out.get(key)
        if prev is None or cols < prev:
            out[key] = cols
    return out


def _merge(into: dict, other: dict) -> None:
    for key, cols in other.items():
        prev = into.get(key)
        if prev is None or cols < prev:
            into[key] = cols


def _class_invariants(ctx: _Context, colouring: Colouring) -> dict:
    p = ctx.polytope
    inv: dict = {"rank": colouring.k, "orientable": is_orientable(colouring)}
    if p.ideal_vertices:
        if inv["orientable"]:
            shorts = Counter(
                classify_flat_cube(restrict_to_vertex_figure(colouring, fig)).short
                for fig in p.ideal_vertices)
            inv["label"] = ",".join(f"{name}x{num}" for name, num in sorted(shorts.items()))
        else:
            inv["label"] = "non-orientable"
        inv["cusps"] = cusp_census(colouring).total
        inv["betti"] = betti_numbers(p.dual_K, defining_matrix(colouring), p.dim).betti
    else:
        try:
            flat = classify_flat_cube(colouring).value if inv["orientable"] else "non-orientable"
        except ValueError:
            flat = "unclassified"
        inv["label"] = flat
        if flat != "unclassified":
            inv["flat_class"] = flat
            independent, eps_zero = dj_invariants(colouring)
            inv["independent_pairs"] = independent
            inv["eps_image_zero"] = eps_zero
    return inv


_WORKER_CONTEXT: _Context | None = None


def _init_worker(spec: SearchSpec, prune: bool) -> None:
    global _WORKER_CONTEXT
    _WORKER_CONTEXT = _build_context(spec, prune)


def _replay_prefix(ctx: _Context, snapshot: tuple[int, ...]) -> tuple[int, _State]:
    """Rebuild full search state from an assigned-colour snapshot."""
    st = _State(ctx)
    depth = 0
    for v in ctx.order:
        t = snapshot[v]
        if t < 0:
            break
        dead, _ = _apply(ctx, st, v, t)
        if dead:
            raise AssertionError("prefix snapshot replays to a dead state")
        depth += 1
    return depth, st


def _run_subtree(task: tuple[int, tuple[int, ...]]):
    ctx = _WORKER_CONTEXT
    ndirs, snapshot = task
    depth, st = _replay_prefix(ctx, snapshot)
    leaves: list[tuple[int, tuple[int, ...]]] = []
    _dfs(ctx, depth, ndirs, st, None, leaves, None)
    return _collect_classes(ctx, leaves)


def enumerate_colourings(spec: SearchSpec, *, prune: bool = True, jobs: int = 1,
                         progress: Callable[[int, int], None] | None = None
                         ) -> CensusResult:
    """Census of proper colourings matching the filters, one class each."""
    start = time.perf_counter()
    ctx = _build_context(spec, prune)
    classes: dict[tuple, tuple[int, ...]] = {}

    if jobs <= 1:
        leaves: list[tuple[int, tuple[int, ...]]] = []
        _dfs(ctx, 0, 0, _State(ctx), None, leaves, None)
        classes = _collect_classes(ctx, leaves)
    else:
        split_depth = min(8 if spec.polytope.ideal_vertices else 3, ctx.m)
        prefixes: list[tuple[int, tuple[int, ...]]] = []
        _dfs(ctx, 0, 0, _State(ctx), split_depth, [], prefixes)
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(spec, prune)) as pool:
            futures = [pool.submit(_run_subtree, task) for task in prefixes]
            done = 0
            for fut in as_completed(futures):
                _merge(classes, fut.result())
                done += 1
                if progress is not None:
                    progress(done, len(futures))

    dj_classes = []
    for (r, canon_words), cols in sorted(classes.items()):
        representative = _colouring_from_ints(spec.polytope, r, cols)
        assert is_proper(representative)
        dj_classes.append(DJClass(
            canonical=F2Matrix(canon_words, ctx.m),
            representative=representative,
            invariants=_class_invariants(ctx, representative),
        ))
    counts = Counter(f"rank{cls.rank}:{cls.label}" for cls in dj_classes)
    return CensusResult(
        spec=spec,
        classes=tuple(dj_classes),
        counts=dict(sorted(counts.items())),
        wall_time=time.perf_counter() - start,
    )


def enumerate_cube(spec: SearchSpec | None = None, *, prune: bool = True,
                   jobs: int = 1) -> CensusResult:
    """Census over the 3-cube; defaults to orientable colourings of all ranks."""
    if spec is None:
        spec = SearchSpec(cube3(), 3, 6, orientable=True)
    if spec.polytope.ideal_vertices or spec.polytope.m != 6:
        raise ValueError("this census runs on the 3-cube")
    return enumerate_colourings(spec, prune=prune, jobs=jobs)


def enumerate_24cell_uniqueness(*, prune: bool = True, jobs: int = 1,
                                cusp_filter: bool = True,
                                progress: Callable[[int, int], None] | None = None
                                ) -> CensusResult:
    """Rank-4 orientable census of the 24-cell, by default requiring every
    cusp section to be the Hantzsche-Wendt manifold."""
    spec = SearchSpec(
        twentyfour_cell(), 4, 4, orientable=True,
        cusp_class=FlatClass.F6_HANTZSCHE_WENDT if cusp_filter else None,
    )
    return enumerate_colourings(spec, prune=prune, jobs=jobs, progress=progress)


def default_jobs() -> int:
    env = os.environ.get("RAC_COLOUR_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1
