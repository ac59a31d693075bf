"""CSS codes on a torus built from pairs of bivariate polynomials.

A code is specified by polynomials (a, b) on an l x m torus:

    hx = [ A | B ],     hz = [ B* | A* ]

where A is the multiplication matrix of a and * is the antipode. Qubit
columns [0, l*m) are the "left block" and [l*m, 2*l*m) the "right block",
both ordered by site index i + l*j; check rows use the same site order.

Bit-flip errors are decoded against one detecting matrix (hx by default, the
`sector` flag selects hz instead); residual equivalence is then tested
against the row space of the opposite matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, Optional

from .gf2 import BitMatrix, BitVector, RowBasis, in_image, rank, row_reduce, solve
from .poly import LaurentPoly, poly_to_matrix

Sector = Literal["X", "Z"]


@dataclass(frozen=True)
class CssCode:
    """Two-block CSS code with its generating polynomial pair."""

    name: str
    ell: int
    m: int
    a: LaurentPoly
    b: LaurentPoly
    hx: BitMatrix
    hz: BitMatrix
    k: int
    distance: Optional[int] = None  # catalog metadata, not computed
    coarse_b: Optional[int] = None  # coarse-graining parameter, catalog metadata

    @property
    def n(self) -> int:
        return 2 * self.ell * self.m

    @property
    def n_checks(self) -> int:
        return self.ell * self.m

    def check_site(self, c: int) -> tuple[int, int]:
        return (c % self.ell, c // self.ell)

    def site_check(self, i: int, j: int) -> int:
        return (i % self.ell) + self.ell * (j % self.m)

    def qubit_site(self, q: int) -> tuple[int, int, int]:
        """Return (block, i, j) for qubit column q."""
        nn = self.ell * self.m
        blk, r = divmod(q, nn)
        return (blk, r % self.ell, r // self.ell)

    def detecting_matrix(self, sector: Sector = "X") -> BitMatrix:
        return self.hx if sector == "X" else self.hz

    def stabilizer_matrix(self, sector: Sector = "X") -> BitMatrix:
        """Rows whose span is the equivalence class of trivial errors."""
        return self.hz if sector == "X" else self.hx

    @cached_property
    def _hx_columns(self) -> tuple[int, ...]:
        return _columns_of(self.hx)

    @cached_property
    def _hz_columns(self) -> tuple[int, ...]:
        return _columns_of(self.hz)

    def column_bits(self, sector: Sector = "X") -> tuple[int, ...]:
        """Per-qubit check masks of the detecting matrix (fast syndromes)."""
        return self._hx_columns if sector == "X" else self._hz_columns

    @cached_property
    def _stab_basis_x(self) -> RowBasis:
        return RowBasis(self.hz)

    @cached_property
    def _stab_basis_z(self) -> RowBasis:
        return RowBasis(self.hx)

    def stabilizer_basis(self, sector: Sector = "X") -> RowBasis:
        return self._stab_basis_x if sector == "X" else self._stab_basis_z

    def translate_error(self, e: BitVector, di: int, dj: int) -> BitVector:
        """Translate an error pattern by (di, dj), block-wise."""
        nn = self.ell * self.m
        bits = 0
        eb = e.bits
        while eb:
            low = eb & -eb
            q = low.bit_length() - 1
            eb ^= low
            blk, r = divmod(q, nn)
            i, j = r % self.ell, r // self.ell
            bits |= 1 << (blk * nn + ((i + di) % self.ell) + self.ell * ((j + dj) % self.m))
        return BitVector(e.n, bits)

    def translate_syndrome(self, s: BitVector, di: int, dj: int) -> BitVector:
        bits = 0
        sb = s.bits
        while sb:
            low = sb & -sb
            c = low.bit_length() - 1
            sb ^= low
            i, j = c % self.ell, c // self.ell
            bits |= 1 << (((i + di) % self.ell) + self.ell * ((j + dj) % self.m))
        return BitVector(s.n, bits)


def _columns_of(mat: BitMatrix) -> tuple[int, ...]:
    cols = [0] * mat.cols
    for i, r in enumerate(mat.data):
        while r:
            low = r & -r
            cols[low.bit_length() - 1] |= 1 << i
            r ^= low
    return tuple(cols)


def build_bb_code(
    a: LaurentPoly,
    b: LaurentPoly,
    ell: int,
    m: int,
    name: str = "",
    distance: Optional[int] = None,
    coarse_b: Optional[int] = None,
) -> CssCode:
    """Construct the CSS code hx = [A|B], hz = [B*|A*] and verify it."""
    if a.lattice != (ell, m) or b.lattice != (ell, m):
        raise ValueError("polynomials must live on the target lattice")
    A = poly_to_matrix(a)
    B = poly_to_matrix(b)
    As = poly_to_matrix(a.antipode())
    Bs = poly_to_matrix(b.antipode())
    hx = A.hstack(B)
    hz = Bs.hstack(As)
    prod = hx.matmul(hz.transpose())
    if any(prod.data):
        raise ValueError("CSS orthogonality hx hz^T = 0 failed")
    n = 2 * ell * m
    k = n - rank(hx) - rank(hz)
    return CssCode(
        name=name or f"bb({a}; {b})@{ell}x{m}",
        ell=ell, m=m, a=a, b=b, hx=hx, hz=hz, k=k,
        distance=distance, coarse_b=coarse_b,
    )


def syndrome(code: CssCode, e: BitVector, sector: Sector = "X") -> BitVector:
    """Violated checks of a bit-flip pattern under the chosen detecting matrix."""
    if e.n != code.n:
        raise ValueError(f"error length {e.n} != {code.n} qubits")
    cols = code.column_bits(sector)
    bits = 0
    eb = e.bits
    while eb:
        low = eb & -eb
        bits ^= cols[low.bit_length() - 1]
        eb ^= low
    return BitVector(code.n_checks, bits)


def logical_basis(
    code: CssCode, sector: Sector = "X", reduce_weight_limit: int = 12
) -> list[BitVector]:
    """k representatives spanning ker(detecting) / rowspace(stabilizer).

    Representatives are weight-reduced by a stabilizer coset sweep when the
    stabilizer rank is at most `reduce_weight_limit`, else by a greedy pass.
    """
    det = code.detecting_matrix(sector)
    stab = code.stabilizer_matrix(sector)
    from .gf2 import nullspace_basis

    kernel = nullspace_basis(det)
    stab_rref, stab_pivots, stab_rank = row_reduce(stab)
    basis_rows = [stab_rref.data[i] for i in range(stab_rank)]
    reps: list[BitVector] = []
    # Keep kernel vectors independent modulo the stabilizer row space.
    span_rows = list(basis_rows)
    span_pivots = list(stab_pivots)
    for v in kernel:
        bits = v.bits
        for p, row in zip(span_pivots, span_rows):
            if (bits >> p) & 1:
                bits ^= row
        if bits == 0:
            continue
        reps.append(BitVector(code.n, bits))
        # insert into the running span for independence bookkeeping
        p = (bits & -bits).bit_length() - 1
        span_pivots.append(p)
        span_rows.append(bits)
        # re-sort so reduction stays triangular
        order = sorted(range(len(span_pivots)), key=lambda t: span_pivots[t])
        span_pivots = [span_pivots[t] for t in order]
        span_rows = [span_rows[t] for t in order]
    if len(reps) != code.k:
        raise AssertionError(f"logical basis size {len(reps)} != k = {code.k}")
    # weight reduction
    out = []
    if stab_rank <= reduce_weight_limit:
        stab_vecs = [stab_rref.data[i] for i in range(stab_rank)]
        for v in reps:
            best, best_w = v.bits, v.weight()
            for mask in range(1, 1 << stab_rank):
                cand = v.bits
                mm = mask
                while mm:
                    low = mm & -mm
                    cand ^= stab_vecs[low.bit_length() - 1]
                    mm ^= low
                if cand.bit_count() < best_w:
                    best, best_w = cand, cand.bit_count()
            out.append(BitVector(code.n, best))
    else:
        for v in reps:
            cur = v.bits
            improved = True
            while improved:
                improved = False
                for row in basis_rows:
                    cand = cur ^ row
                    if cand.bit_count() < cur.bit_count():
                        cur = cand
                        improved = True
            out.append(BitVector(code.n, cur))
    return out


def logical_failure(code: CssCode, residual: BitVector, sector: Sector = "X") -> bool:
    """True iff a zero-syndrome residual acts nontrivially on the logicals."""
    s = syndrome(code, residual, sector)
    if s.bits:
        raise ValueError("residual has nonzero syndrome; not a candidate logical")
    return not code.stabilizer_basis(sector).contains(residual)
