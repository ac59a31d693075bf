"""Cell-matching decoder: flush excitations to canonical classes per cell,
match each excitation type on its own coarse lattice, lift matched edges back
through local transport generators.

Two instantiations ship:

* toric family (weight-2 detecting columns): 1x1 cells, trivial flush, one
  excitation type matched with torus Manhattan distance, lifted by
  single-qubit moves. This is the classic matching decoder.
* hexagonal color family ((1 + x + xy, 1 + y + xy)): 3x1 cells each holding
  one check of each of the three classes; a searched flush table removes one
  class with at most two nearby flips, and the remaining two classes are
  matched on their triangular sublattices and lifted by two-qubit strings.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..code import CssCode, Sector, syndrome
from ..gf2 import BitVector
from ..matching import mwpm_pairs
from .outcome import DecodeOutcome


@dataclass(frozen=True)
class FlushEntry:
    """Local correction for one in-cell syndrome pattern."""

    qubit_offsets: tuple[tuple[int, int, int], ...]  # (block, di, dj) from anchor
    residual_class: int  # class coordinates of the pattern, packed bits


@dataclass
class FlushTable:
    """Local syndrome pattern -> local flush error.

    Keys are (phase, pattern). For the color family the pattern is the
    syndrome on the fixed neighborhood around a violated flushed-color check
    (`hood_rel` lists the neighborhood offsets) and the phase is 0; a plain
    per-cell table would key on the in-cell pattern with a row phase instead.
    """

    cell: tuple[int, int]
    entries: dict[tuple[int, int], FlushEntry]
    flushed_class: Optional[int] = None  # color family: which class is removed
    hood_rel: Optional[list[tuple[int, int]]] = None

    def lookup(self, phase: int, pattern: int) -> FlushEntry:
        return self.entries[(phase, pattern)]


# ---------------------------------------------------------------------------
# Toric instantiation
# ---------------------------------------------------------------------------


class _ToricLift:
    """Single excitation type on the full torus, Manhattan metric."""

    def __init__(self, code: CssCode, sector: Sector):
        self.code = code
        det = code.detecting_matrix(sector)
        # which single qubit moves an excitation from check c one step in +x/+y
        self.step_x = self._find_step(det, (1, 0))
        self.step_y = self._find_step(det, (0, 1))

    def _find_step(self, det, delta):
        code = self.code
        target = {code.site_check(0, 0), code.site_check(*delta)}
        for q in range(code.n):
            if set(det.column(q).indices()) == target:
                blk, qi, qj = code.qubit_site(q)
                return (blk, qi, qj)
        raise ValueError("code has no single-qubit nearest-neighbor movers")

    def sites(self, residual: BitVector) -> list[int]:
        return residual.indices()

    def distance_matrix(self, sites: list[int]) -> np.ndarray:
        code = self.code
        pos = np.array([code.check_site(c) for c in sites], dtype=np.int64)
        dx = np.abs(pos[:, None, 0] - pos[None, :, 0])
        dy = np.abs(pos[:, None, 1] - pos[None, :, 1])
        dx = np.minimum(dx, code.ell - dx)
        dy = np.minimum(dy, code.m - dy)
        return dx + dy

    def lift_pair(self, a: int, b: int) -> int:
        """Error bits of a minimal path from a to b (x-first, then y)."""
        code = self.code
        ai, aj = code.check_site(a)
        bi, bj = code.check_site(b)
        bits = 0
        dx = (bi - ai) % code.ell
        if dx > code.ell - dx:
            dx = dx - code.ell
        dy = (bj - aj) % code.m
        if dy > code.m - dy:
            dy = dy - code.m
        i, j = ai, aj
        nn = code.ell * code.m
        blk, qi, qj = self.step_x
        for _ in range(abs(dx)):
            if dx > 0:
                bits ^= 1 << (blk * nn + (i + qi) % code.ell + code.ell * ((j + qj) % code.m))
                i += 1
            else:
                bits ^= 1 << (blk * nn + (i - 1 + qi) % code.ell + code.ell * ((j + qj) % code.m))
                i -= 1
        blk, qi, qj = self.step_y
        for _ in range(abs(dy)):
            if dy > 0:
                bits ^= 1 << (blk * nn + (i + qi) % code.ell + code.ell * ((j + qj) % code.m))
                j += 1
            else:
                bits ^= 1 << (blk * nn + (i + qi) % code.ell + code.ell * ((j - 1 + qj) % code.m))
                j -= 1
        return bits


# ---------------------------------------------------------------------------
# Color instantiation
# ---------------------------------------------------------------------------

_HEX_MOVES = ((2, 1), (1, 2), (-1, 1), (-2, -1), (-1, -2), (1, -1))


def _color_of(code: CssCode, c: int) -> int:
    i, j = code.check_site(c)
    return (i + j) % 3


def _is_color_family(code: CssCode) -> bool:
    a = sorted((t.i, t.j) for t in code.a.terms)
    b = sorted((t.i, t.j) for t in code.b.terms)
    return a == [(0, 0), (1, 0), (1, 1)] and b == [(0, 0), (0, 1), (1, 1)]


def _rel_offset(code: CssCode, q: int, site: int) -> tuple[int, int, int]:
    blk, qi, qj = code.qubit_site(q)
    si, sj = code.check_site(site)
    return (blk, (qi - si) % code.ell, (qj - sj) % code.m)


def _cell_neighborhood_qubits(code: CssCode, anchor: tuple[int, int]) -> list[int]:
    """Qubits whose syndrome touches the 3x1 cell at `anchor`."""
    det = code.detecting_matrix("X")
    nn = code.ell * code.m
    ai, aj = anchor
    qubits = set()
    for dx in range(3):
        p = code.site_check(ai + dx, aj)
        pi, pj = code.check_site(p)
        # togglers of check p for the color stencils: left at p, p x^-1,
        # p (xy)^-1; right at p, p y^-1, p (xy)^-1
        for blk, (oi, oj) in (
            (0, (0, 0)), (0, (-1, 0)), (0, (-1, -1)),
            (1, (0, 0)), (1, (0, -1)), (1, (-1, -1)),
        ):
            qubits.add(blk * nn + (pi + oi) % code.ell + code.ell * ((pj + oj) % code.m))
    return sorted(qubits)


def _blue_togglers(code: CssCode, b: int) -> list[tuple[tuple[int, int, int], list[int]]]:
    """Single-qubit flips toggling check b: (qubit offset, partner checks)."""
    det = code.detecting_matrix("X")
    out = []
    for q in range(code.n):
        col = det.column(q)
        if (col.bits >> b) & 1:
            blk, qi, qj = code.qubit_site(q)
            bi, bj = code.check_site(b)
            partners = [c for c in col.indices() if c != b]
            out.append((((blk, (qi - bi) % code.ell, (qj - bj) % code.m)), partners))
    return out


def build_color_flush_table(code: CssCode, flush_color: int = 0) -> FlushTable:
    """Exhaustive search for the color-family flush table.

    The flush acts per violated check of the flushed color. Its key is the
    syndrome pattern on the check's neighborhood (the six positions that a
    single flip toggling this check can also reach — these cover the cell
    partners and the adjacent-cell partners). The chosen flip is the one
    annihilating the most observed checks, so an isolated one- or two-flip
    error is removed exactly; ties break by canonical qubit offset. No
    candidate ever creates another flushed-color violation, because every
    flip toggles exactly one check of each color.
    """
    if not _is_color_family(code):
        raise ValueError("flush table construction requires the hexagonal color family")
    # reference check of the flushed color; everything is stored relative to it
    ref = next(c for c in range(code.n_checks) if _color_of(code, c) == flush_color)
    ri, rj = code.check_site(ref)
    togglers = _blue_togglers(code, ref)
    if len(togglers) != 6:
        raise AssertionError("expected six single-flip togglers per check")
    # neighborhood: union of partner positions, canonical order
    hood: list[int] = []
    for _, partners in togglers:
        for c in partners:
            if c not in hood:
                hood.append(c)
    hood = sorted(hood, key=lambda c: ((c // code.ell - rj) % code.m,
                                       (c % code.ell - ri) % code.ell))
    hood_rel = [(((c % code.ell) - ri) % code.ell, ((c // code.ell) - rj) % code.m)
                for c in hood]
    hood_pos = {c: t for t, c in enumerate(hood)}
    entries: dict[tuple[int, int], FlushEntry] = {}
    for bits in range(1 << len(hood)):
        best = None
        for (offset, partners) in togglers:
            annihilated = sum((bits >> hood_pos[c]) & 1 for c in partners)
            key = (-annihilated, offset)
            if best is None or key < best[0]:
                best = (key, offset)
        entries[(0, bits)] = FlushEntry((best[1],), 0)
    table = FlushTable(cell=(3, 1), entries=entries, flushed_class=flush_color)
    table.hood_rel = hood_rel
    return table


class _ColorLift:
    """One color class on its triangular sublattice.

    Edge weights are shortest paths in the post-flush error metric: a single
    physical flip (after its flushed-color check is removed by the table)
    toggles this color at two sites, giving "dipole" moves of cost 1, while
    syndrome-neutral two-qubit strings give the pure triangular moves at cost
    2. Corrections are lifted with the pure strings only, so the lift never
    disturbs other classes.
    """

    def __init__(self, code: CssCode, color: int, flush: Optional[FlushTable] = None):
        self.code = code
        self.color = color
        self.strings = self._find_move_strings()
        self.dist_table = self._distance_table(flush)

    def _find_move_strings(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """Two-qubit strings realizing each triangular move from the origin
        check of this color."""
        code = self.code
        det = code.detecting_matrix("X")
        # reference check of this color
        ref = None
        for c in range(code.n_checks):
            if _color_of(code, c) == self.color:
                ref = c
                break
        ri, rj = code.check_site(ref)
        cols = code.column_bits("X")
        nn = code.ell * code.m
        near = set()
        for blk in (0, 1):
            for di in range(-2, 3):
                for dj in range(-2, 3):
                    near.add(blk * nn + (ri + di) % code.ell + code.ell * ((rj + dj) % code.m))
        near = sorted(near)
        out = {}
        for (mx, my) in _HEX_MOVES:
            target = (1 << ref) | (1 << code.site_check(ri + mx, rj + my))
            found = None
            for x, q1 in enumerate(near):
                for q2 in near[x + 1:]:
                    if cols[q1] ^ cols[q2] == target:
                        found = (q1, q2)
                        break
                if found:
                    break
            if found is None:
                raise AssertionError(f"no 2-qubit string for move {(mx, my)}")
            offs = []
            for q in found:
                blk, qi, qj = code.qubit_site(q)
                offs.append((blk, (qi - ri) % code.ell, (qj - rj) % code.m))
            out[(mx, my)] = tuple(offs)
        return out

    def _effective_moves(self, flush: Optional[FlushTable]) -> dict[tuple[int, int], int]:
        """Displacement -> cost moves of this color's defects."""
        code = self.code
        cols = code.column_bits("X")
        moves: dict[tuple[int, int], int] = {}
        for (mx, my) in _HEX_MOVES:
            moves[(mx % code.ell, my % code.m)] = 2
        if flush is None:
            return moves
        # single-flip dipoles: each physical flip plus the flush of its
        # removed-color check toggles this color at (up to) two sites
        for blk in (0, 1):
            for gi in range(3):
                q = blk * code.ell * code.m + code.site_check(gi, 0)
                sbits = cols[q]
                blue = [c for c in BitVector(code.n_checks, sbits).indices()
                        if _color_of(code, c) == flush.flushed_class]
                if len(blue) != 1:
                    continue
                b = blue[0]
                bi, bj = code.check_site(b)
                pattern = 0
                for t, (du, dv) in enumerate(flush.hood_rel or ()):
                    if (sbits >> code.site_check(bi + du, bj + dv)) & 1:
                        pattern |= 1 << t
                entry = flush.lookup(0, pattern)
                fb = 0
                for (fblk, oi, oj) in entry.qubit_offsets:
                    fq = fblk * code.ell * code.m + code.site_check(bi + oi, bj + oj)
                    fb ^= cols[fq]
                net = sbits ^ fb
                mine = [c for c in BitVector(code.n_checks, net).indices()
                        if _color_of(code, c) == self.color]
                if len(mine) == 2:
                    (ai, aj), (ei, ej) = (code.check_site(mine[0]),
                                          code.check_site(mine[1]))
                    for (du, dv) in (((ei - ai) % code.ell, (ej - aj) % code.m),
                                     ((ai - ei) % code.ell, (aj - ej) % code.m)):
                        if moves.get((du, dv), 99) > 1:
                            moves[(du, dv)] = 1
        return moves

    def _distance_table(self, flush: Optional[FlushTable]) -> np.ndarray:
        """All-displacement shortest-path costs under the effective moves."""
        import heapq

        code = self.code
        moves = self._effective_moves(flush)
        table = np.full((code.ell, code.m), -1, dtype=np.int64)
        heap = [(0, (0, 0))]
        best = {(0, 0): 0}
        while heap:
            d, (du, dv) = heapq.heappop(heap)
            if best.get((du, dv), -1) != d:
                continue
            table[du, dv] = d
            for (mx, my), c in moves.items():
                nu, nv = (du + mx) % code.ell, (dv + my) % code.m
                nd = d + c
                if (nu, nv) not in best or nd < best[(nu, nv)]:
                    best[(nu, nv)] = nd
                    heapq.heappush(heap, (nd, (nu, nv)))
        return table

    def sites(self, residual: BitVector) -> list[int]:
        return [c for c in residual.indices() if _color_of(self.code, c) == self.color]

    def _hex_dist(self, du: int, dv: int) -> int:
        # axial coordinates in the (2,1)/(1,2) move basis; same-color offsets
        # always decompose integrally
        alpha = (2 * du - dv) // 3
        beta = (2 * dv - du) // 3
        return (abs(alpha) + abs(beta) + abs(alpha + beta)) // 2

    def distance_matrix(self, sites: list[int]) -> np.ndarray:
        code = self.code
        pos = np.array([code.check_site(c) for c in sites], dtype=np.int64)
        du = (pos[:, None, 0] - pos[None, :, 0]) % code.ell
        dv = (pos[:, None, 1] - pos[None, :, 1]) % code.m
        return self.dist_table[du, dv]

    def lift_pair(self, a: int, b: int) -> int:
        """Greedy hex walk from a to b, one 2-qubit string per move."""
        code = self.code
        bits = 0
        ci, cj = code.check_site(a)
        bi, bj = code.check_site(b)
        nn = code.ell * code.m
        guard = 4 * (code.ell + code.m)
        while (ci % code.ell, cj % code.m) != (bi, bj):
            guard -= 1
            if guard < 0:
                raise AssertionError("hex walk failed to terminate")
            du = (bi - ci) % code.ell
            dv = (bj - cj) % code.m
            cur = min(
                self._hex_dist(du - wx, dv - wy)
                for wx in (0, code.ell) for wy in (0, code.m)
            )
            for (mx, my) in _HEX_MOVES:
                nu = (du - mx) % code.ell
                nv = (dv - my) % code.m
                nd = min(
                    self._hex_dist(nu - wx, nv - wy)
                    for wx in (0, code.ell) for wy in (0, code.m)
                )
                if nd < cur:
                    for (blk, oi, oj) in self.strings[(mx, my)]:
                        bits ^= 1 << (
                            blk * nn + (ci + oi) % code.ell + code.ell * ((cj + oj) % code.m)
                        )
                    ci += mx
                    cj += my
                    break
            else:
                raise AssertionError("no hex move reduces the distance")
        return bits


# ---------------------------------------------------------------------------
# Generic engine
# ---------------------------------------------------------------------------


class CellMatchingDecoder:
    """Flush per cell, match each excitation type, lift, combine."""

    def __init__(self, code: CssCode, flush: Optional[FlushTable], lifts: list,
                 sector: Sector = "X"):
        self.code = code
        self.flush = flush
        self.lifts = lifts
        self.sector = sector
        self._cols = code.column_bits(sector)

    def apply_flush(self, s_obs: BitVector) -> tuple[int, BitVector]:
        """Returns (flush error bits, residual syndrome after flushing)."""
        if self.flush is None:
            return 0, s_obs
        code = self.code
        nn = code.ell * code.m
        bits = 0
        if self.flush.hood_rel is not None:
            hood = self.flush.hood_rel
            for b in s_obs.indices():
                if _color_of(code, b) != self.flush.flushed_class:
                    continue
                bi, bj = code.check_site(b)
                pattern = 0
                for t, (du, dv) in enumerate(hood):
                    if (s_obs.bits >> code.site_check(bi + du, bj + dv)) & 1:
                        pattern |= 1 << t
                entry = self.flush.lookup(0, pattern)
                for (blk, oi, oj) in entry.qubit_offsets:
                    bits ^= 1 << (
                        blk * nn + (bi + oi) % code.ell + code.ell * ((bj + oj) % code.m)
                    )
        else:
            cw, ch = self.flush.cell
            for cy in range(0, code.m, ch):
                for cx in range(0, code.ell, cw):
                    pattern = 0
                    for t in range(cw * ch):
                        c = code.site_check(cx + t % cw, cy + t // cw)
                        if (s_obs.bits >> c) & 1:
                            pattern |= 1 << t
                    if not pattern:
                        continue
                    entry = self.flush.lookup(cy % 3, pattern)
                    for (blk, oi, oj) in entry.qubit_offsets:
                        bits ^= 1 << (
                            blk * nn + (cx + oi) % code.ell + code.ell * ((cy + oj) % code.m)
                        )
        flush_syn = 0
        b = bits
        while b:
            low = b & -b
            flush_syn ^= self._cols[low.bit_length() - 1]
            b ^= low
        return bits, BitVector(code.n_checks, s_obs.bits ^ flush_syn)

    def decode(self, s_obs: BitVector) -> DecodeOutcome:
        code = self.code
        flush_bits, residual = self.apply_flush(s_obs)
        total = flush_bits
        defect_counts = []
        for lift in self.lifts:
            sites = lift.sites(residual)
            defect_counts.append(len(sites))
            if not sites:
                continue
            if len(sites) % 2:
                raise ValueError("odd defect count; syndrome not physically realizable")
            dm = lift.distance_matrix(sites)
            pairs = mwpm_pairs(dm)
            for (x, y) in pairs:
                total ^= lift.lift_pair(sites[x], sites[y])
        correction = BitVector(code.n, total)
        if syndrome(code, correction, self.sector) != s_obs:
            raise AssertionError("cell-matching correction fails the syndrome identity")
        return DecodeOutcome(
            correction=correction,
            failed=False,
            diagnostics={"defects": defect_counts},
        )


def build_cell_decoder(code: CssCode, sector: Sector = "X",
                       flush_color: int = 0) -> CellMatchingDecoder:
    """Construct the cell-matching decoder for a supported code family."""
    det = code.detecting_matrix(sector)
    weights = {det.column(q).weight() for q in range(code.n)}
    if weights == {2}:
        return CellMatchingDecoder(code, None, [_ToricLift(code, sector)], sector)
    if _is_color_family(code):
        if code.ell % 3 or code.m % 3:
            raise ValueError("color family needs both lattice dimensions divisible by 3")
        table = build_color_flush_table(code, flush_color)
        remaining = sorted(c for c in (0, 1, 2) if c != flush_color)
        lifts = [_ColorLift(code, c, table) for c in remaining]
        return CellMatchingDecoder(code, table, lifts, sector)
    raise ValueError(
        "cell matching is instantiated for weight-2-column (toric-like) codes "
        "and the hexagonal color family"
    )


def decode_cell_matching(
    code: CssCode,
    flush: Optional[FlushTable],
    edge_gens: list,
    s_obs: BitVector,
    sector: Sector = "X",
) -> DecodeOutcome:
    """Functional form: decode with explicit flush table and edge generators."""
    return CellMatchingDecoder(code, flush, edge_gens, sector).decode(s_obs)
