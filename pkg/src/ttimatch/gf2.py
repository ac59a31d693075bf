"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python integers (machine-word limbs
under the hood), so XOR, AND and popcount run at word speed. All values are
immutable after construction; every operation returns new values, which makes
them safe to share across worker processes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np


@dataclass(frozen=True)
class BitVector:
    """Length-`n` vector over GF(2), packed into a single int."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 0 or self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits out of range for length-{self.n} vector")

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "BitVector":
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise IndexError(f"bit index {i} out of range [0, {n})")
            bits ^= 1 << i
        return cls(n, bits)

    @classmethod
    def from_numpy(cls, arr) -> "BitVector":
        arr = np.asarray(arr)
        bits = 0
        for i in np.nonzero(arr)[0]:
            bits |= 1 << int(i)
        return cls(len(arr), bits)

    def to_numpy(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.uint8)
        b = self.bits
        while b:
            low = b & -b
            out[low.bit_length() - 1] = 1
            b ^= low
        return out

    def indices(self) -> list[int]:
        out, b = [], self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def weight(self) -> int:
        return self.bits.bit_count()

    def get(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"bit index {i} out of range [0, {self.n})")
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} != {other.n}")
        return BitVector(self.n, self.bits ^ other.bits)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class BitMatrix:
    """rows x cols matrix over GF(2); each row packed into one int."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ValueError("row count does not match data")
        for r in self.data:
            if r < 0 or r >> self.cols:
                raise ValueError("row has bits outside column range")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Iterable[int], cols: int) -> "BitMatrix":
        data = tuple(rows)
        return cls(len(data), cols, data)

    @classmethod
    def from_numpy(cls, arr) -> "BitMatrix":
        arr = np.asarray(arr)
        rows, cols = arr.shape
        data = []
        for i in range(rows):
            r = 0
            for j in np.nonzero(arr[i])[0]:
                r |= 1 << int(j)
            data.append(r)
        return cls(rows, cols, tuple(data))

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for i, r in enumerate(self.data):
            while r:
                low = r & -r
                out[i, low.bit_length() - 1] = 1
                r ^= low
        return out

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) out of range")
        return (self.data[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def column(self, j: int) -> BitVector:
        if not 0 <= j < self.cols:
            raise IndexError(f"column {j} out of range")
        bits = 0
        for i, r in enumerate(self.data):
            if (r >> j) & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            while r:
                low = r & -r
                out[low.bit_length() - 1] |= 1 << i
                r ^= low
        return BitMatrix(self.cols, self.rows, tuple(out))

    def matvec(self, v: BitVector) -> BitVector:
        """Matrix-vector product over GF(2) via per-row popcount parity."""
        if v.n != self.cols:
            raise ValueError(f"dimension mismatch: {self.cols} cols vs {v.n}")
        bits = 0
        for i, r in enumerate(self.data):
            if (r & v.bits).bit_count() & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose()
        data = []
        for r in self.data:
            row = 0
            for j, c in enumerate(ot.data):
                if (r & c).bit_count() & 1:
                    row |= 1 << j
            data.append(row)
        return BitMatrix(self.rows, other.cols, tuple(data))

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        data = tuple(a | (b << self.cols) for a, b in zip(self.data, other.data))
        return BitMatrix(self.rows, self.cols + other.cols, data)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return BitMatrix(self.rows + other.rows, self.cols, self.data + other.data)


def row_reduce(m: BitMatrix) -> tuple[BitMatrix, list[int], int]:
    """Reduced row echelon form over GF(2).

    Returns (rref, pivot column list, rank). Row space is preserved.
    """
    data = list(m.data)
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        bit = 1 << c
        piv = None
        for i in range(r, m.rows):
            if data[i] & bit:
                piv = i
                break
        if piv is None:
            continue
        data[r], data[piv] = data[piv], data[r]
        for i in range(m.rows):
            if i != r and (data[i] & bit):
                data[i] ^= data[r]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return BitMatrix(m.rows, m.cols, tuple(data)), pivots, len(pivots)


def rank(m: BitMatrix) -> int:
    return row_reduce(m)[2]


class Solver:
    """Reusable elimination of a fixed matrix for repeated solves.

    Stores the row operations so each right-hand side costs one reduction
    pass instead of a full elimination.
    """

    def __init__(self, m: BitMatrix):
        self.m = m
        rows, cols = m.rows, m.cols
        # Augment each row with an identity tag to track row operations.
        work = [m.data[i] | (1 << (cols + i)) for i in range(rows)]
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            bit = 1 << c
            piv = None
            for i in range(r, rows):
                if work[i] & bit:
                    piv = i
                    break
            if piv is None:
                continue
            work[r], work[piv] = work[piv], work[r]
            for i in range(rows):
                if i != r and (work[i] & bit):
                    work[i] ^= work[r]
            pivots.append(c)
            r += 1
        self.rank = r
        self.pivots = pivots
        mask = (1 << cols) - 1
        self.rref_rows = [w & mask for w in work]
        self.ops = [w >> cols for w in work]  # row-combination masks

    def solve(self, b: BitVector) -> Optional[BitVector]:
        if b.n != self.m.rows:
            raise ValueError(f"dimension mismatch: {self.m.rows} rows vs {b.n}")
        # Apply the recorded row operations to b.
        rhs = [(self.ops[i] & b.bits).bit_count() & 1 for i in range(self.m.rows)]
        for i in range(self.rank, self.m.rows):
            if rhs[i]:
                return None
        x = 0
        for i, c in enumerate(self.pivots):
            if rhs[i]:
                x |= 1 << c
        return BitVector(self.m.cols, x)


def solve(
    m: BitMatrix,
    b: BitVector,
    minimize_weight: bool = False,
    sweep_limit: int = 20,
) -> Optional[BitVector]:
    """Return some x with m x = b, or None if the system is inconsistent.

    With `minimize_weight`, the solution is improved over the coset
    x + nullspace(m): exhaustively when the nullspace dimension is at most
    `sweep_limit`, otherwise by a greedy pass that keeps XORing in nullspace
    vectors while that strictly reduces the weight.
    """
    solver = Solver(m)
    x = solver.solve(b)
    if x is None or not minimize_weight:
        return x
    null = nullspace_basis(m)
    if not null:
        return x
    if len(null) <= sweep_limit:
        best = x.bits
        best_w = best.bit_count()
        nb = [v.bits for v in null]
        for mask in range(1, 1 << len(nb)):
            cand = x.bits
            mm = mask
            while mm:
                low = mm & -mm
                cand ^= nb[low.bit_length() - 1]
                mm ^= low
            w = cand.bit_count()
            if w < best_w:
                best, best_w = cand, w
        return BitVector(m.cols, best)
    # Greedy: single pass repeated until no vector helps.
    cur = x.bits
    improved = True
    while improved:
        improved = False
        for v in null:
            cand = cur ^ v.bits
            if cand.bit_count() < cur.bit_count():
                cur = cand
                improved = True
    return BitVector(m.cols, cur)


def nullspace_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of {v : m v = 0}; size is cols - rank(m)."""
    rref, pivots, r = row_reduce(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = 1 << f
        for i, c in enumerate(pivots):
            if (rref.data[i] >> f) & 1:
                v |= 1 << c
        basis.append(BitVector(m.cols, v))
    return basis


def in_image(m: BitMatrix, b: BitVector) -> bool:
    """True iff b lies in the column space of m (m x = b is solvable)."""
    return solve(m, b) is not None


class RowBasis:
    """Incremental membership tests against the row space of a matrix.

    Used for fast "is this residual a stabilizer?" checks inside the
    Monte Carlo loop.
    """

    def __init__(self, m: BitMatrix):
        self.cols = m.cols
        rref, pivots, _ = row_reduce(m)
        self.rows = [rref.data[i] for i in range(len(pivots))]
        self.pivots = pivots

    def reduce(self, v: BitVector) -> int:
        """Reduce v against the basis; returns the residual bits."""
        if v.n != self.cols:
            raise ValueError("dimension mismatch")
        bits = v.bits
        for p, row in zip(self.pivots, self.rows):
            if (bits >> p) & 1:
                bits ^= row
        return bits

    def contains(self, v: BitVector) -> bool:
        return self.reduce(v) == 0
