"""Exact linear algebra over the two-element field, with bit-packed rows.

Vectors and matrix rows are stored as Python integers of at most 64 bits.
Entry 0 of a vector sits at the *most significant* bit of its word, so the
packed word of a vector, read as an integer, orders vectors
lexicographically entry by entry.  Matrices compare row-major through
``F2Matrix.key()`` for the same reason.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_LENGTH = 64


@dataclass(frozen=True)
class F2Vector:
    """Fixed-length vector over GF(2) packed into a machine word."""

    bits: int
    length: int

    def __post_init__(self):
        if not 0 < self.length <= MAX_LENGTH:
            raise ValueError(f"vector length must be in 1..{MAX_LENGTH}, got {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits do not fit the stated length")

    @classmethod
    def from_entries(cls, entries: Sequence[int]) -> "F2Vector":
        bits = 0
        for e in entries:
            bits = (bits << 1) | (e & 1)
        return cls(bits, len(entries))

    @classmethod
    def from_string(cls, s: str) -> "F2Vector":
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"expected a nonempty string of 0/1 characters, got {s!r}")
        return cls(int(s, 2), len(s))

    @classmethod
    def zero(cls, length: int) -> "F2Vector":
        return cls(0, length)

    @classmethod
    def unit(cls, j: int, length: int) -> "F2Vector":
        """Standard basis vector with a single 1 in position j (0-based)."""
        return cls(1 << (length - 1 - j), length)

    @classmethod
    def ones(cls, length: int) -> "F2Vector":
        return cls((1 << length) - 1, length)

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> (self.length - 1 - j)) & 1

    def __add__(self, other: "F2Vector") -> "F2Vector":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return F2Vector(self.bits ^ other.bits, self.length)

    __xor__ = __add__

    def dot(self, other: "F2Vector") -> int:
        if self.length != other.length:
            raise ValueError("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def entries(self) -> tuple[int, ...]:
        return tuple((self.bits >> (self.length - 1 - j)) & 1 for j in range(self.length))

    def to_string(self) -> str:
        return format(self.bits, f"0{self.length}b")

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class F2Matrix:
    """Dense GF(2) matrix; each row is one packed word."""

    row_words: tuple[int, ...]
    cols: int

    def __post_init__(self):
        if not 0 < self.cols <= MAX_LENGTH:
            raise ValueError(f"column count must be in 1..{MAX_LENGTH}, got {self.cols}")
        for w in self.row_words:
            if w < 0 or w >> self.cols:
                raise ValueError("row word does not fit the stated width")

    @property
    def rows(self) -> int:
        return len(self.row_words)

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "F2Matrix":
        rows = list(rows)
        if not rows:
            raise ValueError("a matrix needs at least one row")
        width = len(rows[0])
        words = []
        for r in rows:
            if len(r) != width or set(r) - {"0", "1"}:
                raise ValueError(f"bad matrix row {r!r}")
            words.append(int(r, 2))
        return cls(tuple(words), width)

    @classmethod
    def from_row_vectors(cls, vectors: Sequence[F2Vector]) -> "F2Matrix":
        if not vectors:
            raise ValueError("a matrix needs at least one row")
        width = vectors[0].length
        if any(v.length != width for v in vectors):
            raise ValueError("row length mismatch")
        return cls(tuple(v.bits for v in vectors), width)

    @classmethod
    def from_columns(cls, vectors: Sequence[F2Vector]) -> "F2Matrix":
        """Matrix whose i-th column is vectors[i]."""
        if not vectors:
            raise ValueError("a matrix needs at least one column")
        k = vectors[0].length
        if any(v.length != k for v in vectors):
            raise ValueError("column length mismatch")
        m = len(vectors)
        words = []
        for i in range(k):
            w = 0
            for v in vectors:
                w = (w << 1) | v[i]
            words.append(w)
        return cls(tuple(words), m)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(tuple(1 << (n - 1 - i) for i in range(n)), n)

    @classmethod
    def zero(cls, k: int, m: int) -> "F2Matrix":
        return cls((0,) * k, m)

    def entry(self, i: int, j: int) -> int:
        return (self.row_words[i] >> (self.cols - 1 - j)) & 1

    def row(self, i: int) -> F2Vector:
        return F2Vector(self.row_words[i], self.cols)

    def column(self, j: int) -> F2Vector:
        bits = 0
        shift = self.cols - 1 - j
        for w in self.row_words:
            bits = (bits << 1) | ((w >> shift) & 1)
        return F2Vector(bits, self.rows)

    def columns(self) -> list[F2Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "F2Matrix":
        return F2Matrix.from_columns([self.row(i) for i in range(self.rows)])

    def mul(self, other: "F2Matrix") -> "F2Matrix":
        """Matrix product self @ other over GF(2)."""
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        words = []
        for w in self.row_words:
            acc = 0
            for j in range(self.cols):
                if (w >> (self.cols - 1 - j)) & 1:
                    acc ^= other.row_words[j]
            words.append(acc)
        return F2Matrix(tuple(words), other.cols)

    __matmul__ = mul

    def mul_vector(self, v: F2Vector) -> F2Vector:
        """A @ v, mapping GF(2)^cols to GF(2)^rows."""
        if v.length != self.cols:
            raise ValueError("shape mismatch")
        bits = 0
        for w in self.row_words:
            bits = (bits << 1) | ((w & v.bits).bit_count() & 1)
        return F2Vector(bits, self.rows)

    def permute_columns(self, perm: Sequence[int]) -> "F2Matrix":
        """Matrix whose column i is column perm[i] of self."""
        if sorted(perm) != list(range(self.cols)):
            raise ValueError("not a permutation of the column indices")
        words = []
        for w in self.row_words:
            nw = 0
            for j in perm:
                nw = (nw << 1) | ((w >> (self.cols - 1 - j)) & 1)
            words.append(nw)
        return F2Matrix(tuple(words), self.cols)

    def inverse(self) -> "F2Matrix":
        """Inverse of a square invertible matrix, by augmented elimination."""
        n = self.rows
        if n != self.cols:
            raise ValueError("not square")
        aug = [(self.row_words[i] << n) | (1 << (n - 1 - i)) for i in range(n)]
        width = 2 * n
        r = 0
        for j in range(n):
            bit = 1 << (width - 1 - j)
            piv = next((i for i in range(r, n) if aug[i] & bit), None)
            if piv is None:
                raise ValueError("matrix is singular")
            aug[r], aug[piv] = aug[piv], aug[r]
            for i in range(n):
                if i != r and aug[i] & bit:
                    aug[i] ^= aug[r]
            r += 1
        mask = (1 << n) - 1
        return F2Matrix(tuple(w & mask for w in aug), n)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and rank(self) == self.rows

    def key(self) -> tuple[int, ...]:
        """Total-order key: rows read as one big-endian bit string."""
        return self.row_words

    def to_strings(self) -> list[str]:
        return [format(w, f"0{self.cols}b") for w in self.row_words]

    def to_text(self) -> str:
        return "\n".join(self.to_strings())

    @classmethod
    def from_text(cls, text: str) -> "F2Matrix":
        return cls.from_strings(line.strip() for line in text.strip().splitlines())

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class Subspace:
    """Subspace of GF(2)^length, held by a reduced echelon basis."""

    basis: tuple[F2Vector, ...]
    length: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_spanning(cls, vectors: Sequence[F2Vector], length: int | None = None) -> "Subspace":
        if length is None:
            if not vectors:
                raise ValueError("need an ambient length for the empty spanning set")
            length = vectors[0].length
        if not vectors:
            return cls((), length)
        reduced = rref(F2Matrix.from_row_vectors(vectors))
        basis = tuple(reduced.row(i) for i in range(reduced.rows) if reduced.row_words[i])
        return cls(basis, length)

    def contains(self, v: F2Vector) -> bool:
        if v.length != self.length:
            raise ValueError("length mismatch")
        residual = v.bits
        for b in self.basis:
            lead = 1 << (b.bits.bit_length() - 1)
            if residual & lead:
                residual ^= b.bits
        return residual == 0

    def __iter__(self) -> Iterator[F2Vector]:
        """All 2^dim members, in Gray-code order over the basis.

        Consecutive outputs differ by a single basis addition, so the whole
        enumeration costs one XOR per vector.
        """
        current = 0
        yield F2Vector(0, self.length)
        for i in range(1, 1 << self.dim):
            flip = (i & -i).bit_length() - 1
            current ^= self.basis[flip].bits
            yield F2Vector(current, self.length)

    def __len__(self) -> int:
        return 1 << self.dim


def rank(a: F2Matrix) -> int:
    """Rank over GF(2) by Gaussian elimination."""
    work = list(a.row_words)
    r = 0
    for j in range(a.cols):
        bit = 1 << (a.cols - 1 - j)
        piv = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        r += 1
        if r == len(work):
            break
    return r


def rref(a: F2Matrix) -> F2Matrix:
    """Reduced row echelon form; zero rows sink to the bottom.

    RREF is the canonical representative of the left-GL orbit:
    rref(G @ A) == rref(A) for every invertible G.
    """
    work = list(a.row_words)
    r = 0
    for j in range(a.cols):
        bit = 1 << (a.cols - 1 - j)
        piv = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        r += 1
        if r == len(work):
            break
    return F2Matrix(tuple(work), a.cols)


def row_space(a: F2Matrix) -> Subspace:
    """Row space of a, presented by its reduced echelon basis."""
    reduced = rref(a)
    basis = tuple(reduced.row(i) for i in range(reduced.rows) if reduced.row_words[i])
    return Subspace(basis, a.cols)


def kernel(a: F2Matrix) -> Subspace:
    """Right null space {v : A v = 0}, so dim Row + dim Ker = cols."""
    reduced = rref(a)
    m = a.cols
    pivots: list[int] = []
    for i in range(reduced.rows):
        w = reduced.row_words[i]
        if w:
            pivots.append(m - w.bit_length())
    pivot_set = set(pivots)
    basis = []
    for free in range(m):
        if free in pivot_set:
            continue
        bits = 1 << (m - 1 - free)
        for i, p in enumerate(pivots):
            if reduced.entry(i, free):
                bits |= 1 << (m - 1 - p)
        basis.append(F2Vector(bits, m))
    return Subspace.from_spanning(basis, m)


def contains_all_ones(s: Subspace) -> bool:
    """Whether the all-ones vector lies in the subspace."""
    return s.contains(F2Vector.ones(s.length))
