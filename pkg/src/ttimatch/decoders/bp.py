"""Belief propagation (min-sum, flooding schedule) and ordered-statistics
post-processing on the Tanner graph of the detecting matrix.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..code import CssCode, Sector, syndrome
from ..gf2 import BitVector
from .outcome import DecodeOutcome


class BpDecoder:
    """Min-sum BP with uniform bit-flip prior; reusable across syndromes."""

    def __init__(self, code: CssCode, p: float, max_iters: int = 1000,
                 scale: float = 1.0, sector: Sector = "X"):
        if not 0.0 < p < 1.0:
            raise ValueError("prior must be in (0, 1)")
        self.code = code
        self.p = p
        self.max_iters = max_iters
        self.scale = scale
        self.sector = sector
        det = code.detecting_matrix(sector)
        self.h = det.to_numpy()
        checks, qubits = np.nonzero(self.h)
        order = np.lexsort((qubits, checks))
        self.e_check = checks[order].astype(np.int64)
        self.e_var = qubits[order].astype(np.int64)
        self.n_edges = len(self.e_check)
        self.check_starts = np.searchsorted(self.e_check, np.arange(code.n_checks))
        # per-variable gather indices (edges sorted by variable)
        self.llr0 = math.log((1.0 - p) / p)
        self.counts = np.diff(np.append(self.check_starts, self.n_edges))

    def run(self, s_obs: BitVector) -> tuple[Optional[BitVector], np.ndarray, int]:
        """Returns (correction or None, posterior LLRs, iterations used)."""
        s = np.zeros(self.code.n_checks, dtype=np.uint8)
        for c in s_obs.indices():
            s[c] = 1
        sign_fix = 1.0 - 2.0 * s.astype(np.float64)  # (-1)^{s_c}
        v2c = np.full(self.n_edges, self.llr0, dtype=np.float64)
        total = np.full(self.code.n, self.llr0, dtype=np.float64)
        counts = self.counts
        starts = self.check_starts
        for it in range(1, self.max_iters + 1):
            mag = np.abs(v2c)
            neg = v2c < 0
            min1 = np.minimum.reduceat(mag, starts)
            # leftmost minimal edge per check (edges are grouped by check)
            is_min = np.flatnonzero(mag == np.repeat(min1, counts))
            cc = self.e_check[is_min]
            first = np.ones(len(cc), dtype=bool)
            first[1:] = cc[1:] != cc[:-1]
            min_pos = is_min[first]
            mag2 = mag.copy()
            mag2[min_pos] = np.inf
            min2 = np.minimum.reduceat(mag2, starts)
            parity = np.bitwise_xor.reduceat(neg.astype(np.int8), starts)
            check_sign = (1.0 - 2.0 * parity) * sign_fix
            own_min = np.zeros(self.n_edges, dtype=bool)
            own_min[min_pos] = True
            out_mag = np.where(own_min, np.repeat(min2, counts), np.repeat(min1, counts))
            own_sign = 1.0 - 2.0 * neg
            c2v = self.scale * np.repeat(check_sign, counts) * own_sign * out_mag
            total.fill(self.llr0)
            np.add.at(total, self.e_var, c2v)
            v2c = total[self.e_var] - c2v
            hard = (total < 0).astype(np.uint8)
            if np.array_equal((self.h @ hard) % 2, s):
                return BitVector.from_numpy(hard), total, it
        return None, total, self.max_iters

    def decode(self, s_obs: BitVector) -> DecodeOutcome:
        corr, _, iters = self.run(s_obs)
        if corr is None:
            return DecodeOutcome.failure(iterations=iters)
        if syndrome(self.code, corr, self.sector) != s_obs:
            raise AssertionError("BP hard decision does not reproduce the syndrome")
        return DecodeOutcome(correction=corr, failed=False,
                             diagnostics={"iterations": iters})


def decode_bp(code: CssCode, s_obs: BitVector, p: float,
              max_iters: int = 1000, scale: float = 1.0,
              sector: Sector = "X") -> Optional[BitVector]:
    """One-shot min-sum BP; None when the syndrome is not reproduced."""
    corr, _, _ = BpDecoder(code, p, max_iters, scale, sector).run(s_obs)
    return corr


def osd_postprocess(
    code: CssCode,
    s_obs: BitVector,
    soft: np.ndarray,
    order: int = 10,
    order_cap: int = 10,
    sector: Sector = "X",
) -> BitVector:
    """Ordered-statistics solve: reliability-sorted elimination plus a
    bounded candidate sweep (all single flips of the free coordinates and all
    2^order patterns of the `order` least-reliable ones). Always returns a
    syndrome-consistent correction of minimal weight among the candidates.
    """
    if order > order_cap:
        raise ValueError(f"OSD order {order} exceeds the cap {order_cap}")
    det = code.detecting_matrix(sector)
    n, nc = code.n, code.n_checks
    # least reliable (most likely flipped) first; stable for determinism
    perm = np.argsort(soft, kind="stable")
    # eliminate with columns in permuted order
    rows = list(det.data)
    rhs = [(s_obs.bits >> c) & 1 for c in range(nc)]
    aug = [(rows[c] << 1) | rhs[c] for c in range(nc)]
    piv_cols: list[int] = []
    r = 0
    for k in range(n):
        col = int(perm[k])
        bit = 1 << (col + 1)
        piv = next((i for i in range(r, nc) if aug[i] & bit), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(nc):
            if i != r and (aug[i] & bit):
                aug[i] ^= aug[r]
        piv_cols.append(col)
        r += 1
        if r == nc:
            break
    for i in range(r, nc):
        if aug[i] == 1:
            raise ValueError("syndrome is not in the image of the detecting matrix")
    piv_set = set(piv_cols)
    free_cols = [int(c) for c in perm if int(c) not in piv_set]
    # base solution and per-free-column pivot masks
    base = 0  # bits over pivot rows (row i corresponds to piv_cols[i])
    for i in range(r):
        if aug[i] & 1:
            base |= 1 << i
    free_masks = []
    for f in free_cols:
        bit = 1 << (f + 1)
        mask = 0
        for i in range(r):
            if aug[i] & bit:
                mask |= 1 << i
        free_masks.append(mask)

    def weight_of(assign_bits: int, assigned: list[int]) -> tuple[int, int]:
        pivot_bits = base
        for t in assigned:
            pivot_bits ^= free_masks[t]
        return pivot_bits.bit_count() + assign_bits, pivot_bits

    best_w, best_piv = weight_of(0, [])
    best_assign: tuple[int, ...] = ()
    # single-coordinate sweeps over all free coordinates
    for t in range(len(free_cols)):
        w, piv = weight_of(1, [t])
        if w < best_w:
            best_w, best_piv, best_assign = w, piv, (t,)
    # exhaustive sweep over the `order` least-reliable free coordinates
    k = min(order, len(free_cols))
    for mask in range(1, 1 << k):
        assigned = [t for t in range(k) if (mask >> t) & 1]
        w, piv = weight_of(len(assigned), assigned)
        if w < best_w:
            best_w, best_piv, best_assign = w, piv, tuple(assigned)
    bits = 0
    for i in range(r):
        if (best_piv >> i) & 1:
            bits |= 1 << piv_cols[i]
    for t in best_assign:
        bits |= 1 << free_cols[t]
    corr = BitVector(n, bits)
    if syndrome(code, corr, sector) != s_obs:
        raise AssertionError("OSD solution does not reproduce the syndrome")
    return corr


def decode_bposd(
    code: CssCode,
    s_obs: BitVector,
    p: float,
    max_iters: int = 1000,
    order: int = 10,
    scale: float = 1.0,
    sector: Sector = "X",
) -> DecodeOutcome:
    """BP first; ordered-statistics post-processing when BP does not converge."""
    bp = BpDecoder(code, p, max_iters, scale, sector)
    corr, total, iters = bp.run(s_obs)
    if corr is not None:
        return DecodeOutcome(correction=corr, failed=False,
                             diagnostics={"iterations": iters, "osd": False})
    corr = osd_postprocess(code, s_obs, total, order, max(order, 10), sector)
    return DecodeOutcome(correction=corr, failed=False,
                         diagnostics={"iterations": iters, "osd": True})
