"""Betti numbers of colouring covers via the row-space decomposition.

The i-th Betti number of the cover is the sum, over all vectors w in the
row space of the defining matrix, of the (i-1)-st reduced Betti number of
the subcomplex induced on the support of w.  Only the zero vector has
empty support (colours are nonzero), so beta_0 is always 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .f2 import F2Matrix, F2Vector, row_space
from .homology import BettiVector, FlagComplex, induced_subcomplex, reduced_betti


@dataclass(frozen=True)
class BettiProfile:
    """Betti numbers beta_0..beta_n with their per-vector breakdown."""

    betti: tuple[int, ...]
    per_omega: tuple[tuple[F2Vector, BettiVector], ...]

    def as_dict(self) -> dict:
        return {
            "betti": list(self.betti),
            "per_omega": {w.to_string(): list(bv.reduced) for w, bv in self.per_omega},
        }


def betti_numbers(k: FlagComplex, defining: F2Matrix, n: int) -> BettiProfile:
    """Betti numbers of the cover of an n-manifold quotient.

    Columns of the defining matrix are indexed by the vertex labels of the
    complex; the profile is padded with zeros up to degree n.
    """
    if defining.cols != k.n_vertices:
        raise ValueError("one matrix column per complex vertex is required")
    label_of = dict(enumerate(k.vertices))
    betti = [0] * (n + 1)
    breakdown = []
    for omega in row_space(defining):
        support = [label_of[j] for j in range(omega.length) if omega[j]]
        piece = reduced_betti(induced_subcomplex(k, support))
        breakdown.append((omega, piece))
        for i in range(n + 1):
            betti[i] += piece.reduced_at(i - 1)
    return BettiProfile(tuple(betti), tuple(breakdown))


def euler_from_betti(profile: BettiProfile) -> int:
    """Alternating sum of the Betti numbers."""
    return sum(b if i % 2 == 0 else -b for i, b in enumerate(profile.betti))
