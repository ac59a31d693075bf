"""Excitation-class structure of a code: cokernel basis, translation scales,
per-check decomposition dictionary, rewrite operators, and short strings.

Violated-check configurations modulo locally creatable ones form the cokernel
of the detecting matrix. A basis of canonical syndrome patterns (one per
independent excitation type), together with the per-check decomposition
dictionary and transport operators, is everything the matching decoders need;
it is computed once per code and cached on disk.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Optional

from .catalog import CatalogEntry, get_entry, spec_hash
from .code import CssCode, Sector, syndrome
from .gf2 import (
    BitMatrix,
    BitVector,
    Solver,
    in_image,
    nullspace_basis,
    rank,
    row_reduce,
    solve,
)

Direction = Literal["horizontal", "vertical"]

CACHE_VERSION = 2


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShortString:
    """Error pattern moving one excitation type by `step` in one direction."""

    basis_index: int
    direction: Direction
    step: int
    error: BitVector  # anchored at the cell whose corner is the origin


@dataclass
class CokerBasisData:
    """Everything derived from the chosen cokernel basis of one code."""

    code_name: str
    spec_hash: str
    r: int
    basis: list[tuple[BitVector, int]]  # (canonical syndrome pattern, scale)
    n_matrix: BitMatrix  # r x n_checks, rows span ker(H^T)
    b_matrix: BitMatrix  # n_checks x r, columns are the basis patterns
    decomposition: BitMatrix  # r x n_checks; column c = class coords of check c
    rewrite_ops: list[BitVector]  # per check index
    short_strings: dict[tuple[int, str], ShortString] = field(default_factory=dict)

    @property
    def scales(self) -> list[int]:
        return [s for _, s in self.basis]

    def check_class(self, c: int) -> int:
        """Class coordinates of single check c, packed as r bits."""
        return self.decomposition.column(c).bits

    def bases_of_check(self, c: int) -> list[int]:
        bits = self.check_class(c)
        return [i for i in range(self.r) if (bits >> i) & 1]


# ---------------------------------------------------------------------------
# Basic cokernel operations
# ---------------------------------------------------------------------------


def coker_dimension(code: CssCode, sector: Sector = "X") -> int:
    """Number of independent excitation types: n_checks - rank(detecting)."""
    return code.n_checks - rank(code.detecting_matrix(sector))


def verify_basis(code: CssCode, candidates: list[BitVector], sector: Sector = "X") -> bool:
    """Rank test: candidates span coker and are independent modulo im H."""
    if not candidates:
        raise ValueError("candidate list must be nonempty")
    det = code.detecting_matrix(sector)
    bmat = BitMatrix(
        code.n_checks, len(candidates),
        tuple(
            sum(((v.bits >> c) & 1) << j for j, v in enumerate(candidates))
            for c in range(code.n_checks)
        ),
    )
    rank_i = rank(det)
    rank_ib = rank(det.hstack(bmat))
    return rank_ib == code.n_checks and (rank_ib - rank_i) == len(candidates)


def pattern_to_syndrome(code: CssCode, terms) -> BitVector:
    """Monomial term list -> syndrome-space bit vector."""
    bits = 0
    for (i, j) in terms:
        bits ^= 1 << code.site_check(i, j)
    return BitVector(code.n_checks, bits)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def translation_scale(
    code: CssCode,
    u: BitVector,
    sector: Sector = "X",
    catalog_basis: Optional[list[tuple[BitVector, int]]] = None,
) -> int:
    """Translation scale of the excitation class of u.

    For classes matching a cataloged basis element the shipped (family-level)
    scale is returned; torus wraparound on small lattices otherwise admits
    accidental equivalences below the transport scale the decoders rely on.
    For other classes, returns the smallest divisor d of lcm(l, m) such that
    both x^d- and y^d-translated differences are locally creatable.
    """
    det = code.detecting_matrix(sector)
    if not in_image(det, u):
        pass  # nonzero class, as required
    else:
        raise ValueError("pattern is locally creatable; scale undefined (zero class)")
    if catalog_basis is None:
        catalog_basis = _catalog_basis(code, sector)
    if catalog_basis:
        nmat = _n_matrix(code, sector)
        bmat = _b_matrix(code, [p for p, _ in catalog_basis])
        dec = _decomposition_matrix(nmat, bmat)
        coords = dec.matvec(u)
        if coords.weight() == 1:
            return catalog_basis[coords.indices()[0]][1]
    L = math.lcm(code.ell, code.m)
    for d in _divisors(L):
        dx = u ^ code.translate_syndrome(u, d, 0)
        dy = u ^ code.translate_syndrome(u, 0, d)
        if in_image(det, dx) and in_image(det, dy):
            return d
    raise AssertionError("translation by lcm(l, m) must be trivial")


def _catalog_basis(code: CssCode, sector: Sector) -> Optional[list[tuple[BitVector, int]]]:
    if sector != "X":
        return None
    try:
        entry = get_entry(code.name)
    except KeyError:
        return None
    if entry.basis is None:
        return None
    return [(pattern_to_syndrome(code, b.pattern), b.scale) for b in entry.basis]


def _n_matrix(code: CssCode, sector: Sector = "X") -> BitMatrix:
    det = code.detecting_matrix(sector)
    kernel = nullspace_basis(det.transpose())
    return BitMatrix(len(kernel), code.n_checks, tuple(v.bits for v in kernel))


def _b_matrix(code: CssCode, patterns: list[BitVector]) -> BitMatrix:
    return BitMatrix(
        code.n_checks, len(patterns),
        tuple(
            sum(((p.bits >> c) & 1) << j for j, p in enumerate(patterns))
            for c in range(code.n_checks)
        ),
    )


def _invert_gf2(m: BitMatrix) -> BitMatrix:
    n = m.rows
    aug = m.hstack(BitMatrix.identity(n))
    rref, pivots, rnk = row_reduce(aug)
    if rnk < n or pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular over GF(2)")
    mask = (1 << n) - 1
    return BitMatrix(n, n, tuple((rref.data[i] >> n) & mask for i in range(n)))


def _decomposition_matrix(nmat: BitMatrix, bmat: BitMatrix) -> BitMatrix:
    """M with M s = class coordinates of syndrome s: M = (N B)^-1 N."""
    nb = nmat.matmul(bmat)
    return _invert_gf2(nb).matmul(nmat)


def decompose_check(data: CokerBasisData, s: BitVector) -> BitVector:
    """Unique class coordinates u_s of a syndrome via the cached dictionary."""
    if s.n != data.decomposition.cols:
        raise ValueError("syndrome length mismatch")
    return data.decomposition.matvec(s)


def build_decomposition_dictionary(code: CssCode, data: CokerBasisData) -> dict[int, BitVector]:
    """Explicit per-check map, mostly for inspection; columns of the matrix."""
    return {c: data.decomposition.column(c) for c in range(code.n_checks)}


# ---------------------------------------------------------------------------
# Rewrite operators
# ---------------------------------------------------------------------------


def cell_corner(code: CssCode, c: int, scale: int) -> tuple[int, int]:
    """Corner closest to the origin of the scale-cell containing check c."""
    i, j = code.check_site(c)
    return (i - i % scale, j - j % scale)


def rewrite_rhs(code: CssCode, data: CokerBasisData, c: int) -> BitVector:
    """Syndrome that the rewrite operator of check c must produce."""
    rhs = BitVector.from_indices(code.n_checks, [c])
    coords = data.check_class(c)
    for i, (pattern, scale) in enumerate(data.basis):
        if (coords >> i) & 1:
            di, dj = cell_corner(code, c, scale)
            rhs ^= code.translate_syndrome(pattern, di, dj)
    return rhs


def find_rewrite_operator(
    code: CssCode,
    data: CokerBasisData,
    c: int,
    solver: Optional[Solver] = None,
    null: Optional[list[BitVector]] = None,
    sector: Sector = "X",
) -> BitVector:
    """Low-weight error decomposing check c into translated basis patterns.

    A window-restricted solve keeps the operator near the check; the
    unrestricted system (guaranteed solvable) is the fallback.
    """
    det = code.detecting_matrix(sector)
    rhs = rewrite_rhs(code, data, c)
    local = _solve_local(code, det, rhs)
    if local is not None:
        return local
    if solver is None:
        solver = Solver(det)
    e = solver.solve(rhs)
    if e is None:
        raise AssertionError("rewrite right-hand side must be locally creatable")
    if null is None:
        null = nullspace_basis(det)
    return _greedy_reduce(e, null)


def _greedy_reduce(e: BitVector, null: list[BitVector]) -> BitVector:
    cur = e.bits
    improved = True
    while improved:
        improved = False
        for v in null:
            cand = cur ^ v.bits
            if cand.bit_count() < cur.bit_count():
                cur = cand
                improved = True
    return BitVector(e.n, cur)


def _stencil_reach(code: CssCode) -> tuple[int, int]:
    terms = list(code.a.terms) + list(code.b.terms)
    rx = max(min(t.i, code.ell - t.i) for t in terms)
    ry = max(min(t.j, code.m - t.j) for t in terms)
    return max(rx, 1), max(ry, 1)


def _solve_local(
    code: CssCode, det: BitMatrix, rhs: BitVector, pad: Optional[tuple[int, int]] = None
) -> Optional[BitVector]:
    """Solve det e = rhs with support near the rhs bounding box, if possible."""
    if rhs.bits == 0:
        return BitVector(code.n, 0)
    if pad is None:
        rx, ry = _stencil_reach(code)
        pad = (2 * rx, 2 * ry)
    sites = [code.check_site(c) for c in rhs.indices()]
    i0 = min(i for i, _ in sites)
    j0 = min(j for _, j in sites)
    i1 = max(i for i, _ in sites)
    j1 = max(j for _, j in sites)
    xs = range(i0 - pad[0], i1 + pad[0] + 1)
    ys = range(j0 - pad[1], j1 + pad[1] + 1)
    if len(xs) >= code.ell and len(ys) >= code.m:
        return None  # window covers the torus; nothing gained
    nn = code.ell * code.m
    cols = sorted({
        blk * nn + (i % code.ell) + code.ell * (j % code.m)
        for blk in (0, 1) for i in xs for j in ys
    })
    colmap = {q: k for k, q in enumerate(cols)}
    sub_rows = []
    for row in det.data:
        rb = 0
        for q in cols:
            if (row >> q) & 1:
                rb |= 1 << colmap[q]
        sub_rows.append(rb)
    sub = BitMatrix(det.rows, len(cols), tuple(sub_rows))
    x = solve(sub, rhs, minimize_weight=True, sweep_limit=12)
    if x is None:
        return None
    bits = 0
    for k in x.indices():
        bits |= 1 << cols[k]
    return BitVector(code.n, bits)


# ---------------------------------------------------------------------------
# Transfer matrices (local transport search) and short strings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferResult:
    """Transport map for unit excitations of one reference cell."""

    matrix: BitMatrix  # (lp*mp) x (lp*mp): A . e_qp = residue pattern in adj cell
    ambiguity: tuple[int, ...]  # rref basis of residue patterns achievable alone

    def fixed(self, v_bits: int, power: int) -> bool:
        """Whether A^power fixes v modulo the residue ambiguity space."""
        w = v_bits
        for _ in range(power):
            w = _matvec_bits(self.matrix, w)
        return _reduce_bits(w ^ v_bits, self.ambiguity) == 0


def _matvec_bits(m: BitMatrix, v: int) -> int:
    out = 0
    k = 0
    vv = v
    while vv:
        if vv & 1:
            out ^= m.column(k).bits
        vv >>= 1
        k += 1
    return out


def _reduce_bits(v: int, basis: tuple[int, ...]) -> int:
    for b in basis:
        v = min(v, v ^ b)
    return v


def _eval_lattice(code: CssCode, lp: int, mp: int) -> tuple[int, int]:
    """Lattice large enough that local transport is free of torus wraps."""
    need_x = 8 * lp
    need_y = 8 * mp
    ex = code.ell * max(1, math.ceil(need_x / code.ell))
    ey = code.m * max(1, math.ceil(need_y / code.m))
    return ex, ey


def transfer_matrix(
    code: CssCode,
    direction: Direction,
    cell: tuple[int, int],
    sector: Sector = "X",
) -> Optional[TransferResult]:
    """Appendix-style transport map on `cell`-sized rectangles.

    For each unit excitation in a reference cell, searches for an error
    supported on the plus-neighborhood of the cell whose syndrome is exactly
    that excitation plus a residue confined to the adjacent cell in
    `direction`. Returns None when some unit excitation admits no such local
    mover. Evaluated on an enlarged lattice when the code's own torus is too
    small for the search to be wrap-free.
    """
    lp, mp = cell
    if code.ell % lp or code.m % mp:
        raise ValueError("cell must divide the lattice dimensions")
    from .poly import LaurentPoly

    ex, ey = _eval_lattice(code, lp, mp)
    if (ex, ey) == (code.ell, code.m):
        eval_code = code
    else:
        from .code import build_bb_code

        a = LaurentPoly.from_terms([(t.i, t.j) for t in code.a.terms], ex, ey)
        b = LaurentPoly.from_terms([(t.i, t.j) for t in code.b.terms], ex, ey)
        eval_code = build_bb_code(a, b, ex, ey, name=f"{code.name}@eval")
    det = eval_code.detecting_matrix(sector)
    ell, m = eval_code.ell, eval_code.m
    nn = ell * m
    dx, dy = (lp, 0) if direction == "horizontal" else (0, mp)
    ref = [i + ell * j for i in range(lp) for j in range(mp)]
    adj = [((i + dx) % ell) + ell * ((j + dy) % m) for i in range(lp) for j in range(mp)]
    refset, adjset = set(ref), set(adj)
    loc = {c: (c % ell) % lp + lp * ((c // ell) % mp) for c in ref}
    locadj = {
        c: ((c % ell) - dx) % ell % lp + lp * ((((c // ell) - dy) % m) % mp) for c in adj
    }
    # plus-neighborhood support
    qubits = set()
    for (cx, cy) in ((0, 0), (lp, 0), (-lp, 0), (0, mp), (0, -mp)):
        for blk in (0, 1):
            for i in range(lp):
                for j in range(mp):
                    qubits.add(blk * nn + ((i + cx) % ell) + ell * ((j + cy) % m))
    cols = sorted(qubits)
    colmap = {q: k for k, q in enumerate(cols)}
    sub_rows = []
    keep_rows = []  # all rows except adj (those are unconstrained)
    for c in range(nn):
        rb = 0
        row = det.data[c]
        for q in cols:
            if (row >> q) & 1:
                rb |= 1 << colmap[q]
        sub_rows.append(rb)
        if c not in adjset:
            keep_rows.append(c)
    sys_matrix = BitMatrix(len(keep_rows), len(cols), tuple(sub_rows[c] for c in keep_rows))
    solver = Solver(sys_matrix)
    a_cols = []
    for k in range(lp * mp):
        rhs = BitVector(
            len(keep_rows),
            sum(1 << idx for idx, c in enumerate(keep_rows) if c in refset and loc[c] == k),
        )
        sol = solver.solve(rhs)
        if sol is None:
            return None
        col = 0
        for c in adj:
            if (sub_rows[c] & sol.bits).bit_count() & 1:
                col |= 1 << locadj[c]
        a_cols.append(col)
    amat = BitMatrix(
        lp * mp, lp * mp,
        tuple(
            sum(((a_cols[k] >> r) & 1) << k for k in range(lp * mp))
            for r in range(lp * mp)
        ),
    )
    # ambiguity: adjacent-cell syndromes achievable with zero ref syndrome
    amb = []
    for v in nullspace_basis(sys_matrix):
        col = 0
        for c in adj:
            if (sub_rows[c] & v.bits).bit_count() & 1:
                col |= 1 << locadj[c]
        if col:
            reduced = _reduce_bits(col, tuple(amb))
            if reduced:
                amb.append(reduced)
                amb.sort(reverse=True)
    return TransferResult(matrix=amat, ambiguity=tuple(amb))


def _pattern_bbox(code: CssCode, pattern: BitVector) -> tuple[int, int, int, int]:
    sites = [code.check_site(c) for c in pattern.indices()]
    return (
        min(i for i, _ in sites), min(j for _, j in sites),
        max(i for i, _ in sites), max(j for _, j in sites),
    )


def find_short_string(
    code: CssCode,
    pattern: BitVector,
    step: int,
    direction: Direction,
    sector: Sector = "X",
    solver: Optional[Solver] = None,
    null: Optional[list[BitVector]] = None,
) -> Optional[BitVector]:
    """Error with syndrome exactly pattern + its step-translate.

    Tries a strip-confined solve first (a genuinely local transport
    operator); falls back to an unrestricted torus solve, which exists
    whenever the translation equivalence holds on this lattice.
    """
    det = code.detecting_matrix(sector)
    if direction == "horizontal":
        target = pattern ^ code.translate_syndrome(pattern, step, 0)
    else:
        target = pattern ^ code.translate_syndrome(pattern, 0, step)
    if target.bits == 0:
        return BitVector(code.n, 0)
    local = _solve_local(code, det, target)
    if local is not None:
        return local
    if solver is None:
        solver = Solver(det)
    e = solver.solve(target)
    if e is None:
        return None
    if null is None:
        null = nullspace_basis(det)
    return _greedy_reduce(e, null)


def find_short_strings(
    code: CssCode, data: CokerBasisData, sector: Sector = "X"
) -> tuple[list[ShortString], list[int]]:
    """Horizontal and vertical short strings for every basis element.

    Returns (strings, missing) where missing lists basis indices for which no
    realization exists at the stated scale in some direction.
    """
    det = code.detecting_matrix(sector)
    solver = Solver(det)
    null = nullspace_basis(det)
    out: list[ShortString] = []
    missing: list[int] = []
    for idx, (pattern, scale) in enumerate(data.basis):
        got_both = True
        for direction in ("horizontal", "vertical"):
            e = find_short_string(code, pattern, scale, direction, sector, solver, null)
            if e is None:
                got_both = False
                continue
            s = syndrome(code, e, sector)
            want = pattern ^ (
                code.translate_syndrome(pattern, scale, 0)
                if direction == "horizontal"
                else code.translate_syndrome(pattern, 0, scale)
            )
            if s != want:
                raise AssertionError(f"short string invariant violated for basis {idx}")
            out.append(ShortString(idx, direction, scale, e))
        if not got_both:
            missing.append(idx)
    return out, missing


def short_string_chain(
    code: CssCode,
    data: CokerBasisData,
    basis_index: int,
    cell_from: tuple[int, int],
    cell_to: tuple[int, int],
    winding: tuple[int, int],
) -> BitVector:
    """XOR of translated short strings transporting one excitation type.

    `cell_from`/`cell_to` are scale-cell coordinates; `winding` is the signed
    number of horizontal then vertical steps (must be congruent to the cell
    displacement mod the cell lattice). The resulting syndrome equals the
    basis pattern at cell_from plus the basis pattern at cell_to.
    """
    pattern, scale = data.basis[basis_index]
    ncx, ncy = code.ell // scale, code.m // scale
    dx, dy = winding
    if (cell_from[0] + dx - cell_to[0]) % ncx or (cell_from[1] + dy - cell_to[1]) % ncy:
        raise ValueError("winding inconsistent with cell displacement")
    h = data.short_strings.get((basis_index, "horizontal"))
    v = data.short_strings.get((basis_index, "vertical"))
    bits = 0
    cx, cy = cell_from
    if dx >= 0:
        for t in range(dx):
            bits ^= code.translate_error(h.error, (cx + t) * scale, cy * scale).bits
    else:
        for t in range(1, -dx + 1):
            bits ^= code.translate_error(h.error, (cx - t) * scale, cy * scale).bits
    cx += dx
    if dy >= 0:
        for t in range(dy):
            bits ^= code.translate_error(v.error, cx * scale, (cy + t) * scale).bits
    else:
        for t in range(1, -dy + 1):
            bits ^= code.translate_error(v.error, cx * scale, (cy - t) * scale).bits
    return BitVector(code.n, bits)


# ---------------------------------------------------------------------------
# Basis selection and the top-level builder
# ---------------------------------------------------------------------------


def _auto_select_basis(code: CssCode, sector: Sector) -> list[tuple[BitVector, int]]:
    """Fallback basis for codes without catalog data.

    Prefers transfer-fixed local patterns at ascending scale, then completes
    with single-check representatives (weight-minimal by construction).
    """
    det = code.detecting_matrix(sector)
    r = coker_dimension(code, sector)
    if r == 0:
        raise ValueError("code has trivial cokernel; nothing to decode by classes")
    det_rank = rank(det)
    chosen: list[tuple[BitVector, int]] = []

    def independent(cand: BitVector) -> bool:
        mat = det
        vecs = [p for p, _ in chosen] + [cand]
        bm = _b_matrix(code, vecs)
        return rank(det.hstack(bm)) == det_rank + len(vecs)

    # transfer-fixed candidates on small cells
    cell = _natural_cell(code)
    if cell is not None:
        lp, mp = cell
        tx = transfer_matrix(code, "horizontal", cell, sector)
        ty = transfer_matrix(code, "vertical", cell, sector)
        if tx is not None and ty is not None:
            max_k = math.lcm(code.ell, code.m) // max(lp, mp)
            for k in range(1, max_k + 1):
                scale_x, scale_y = k * lp, k * mp
                if scale_x != scale_y or code.ell % scale_x or code.m % scale_y:
                    continue
                for v_bits in range(1, 1 << (lp * mp)):
                    if len(chosen) == r:
                        break
                    if not (tx.fixed(v_bits, k) and ty.fixed(v_bits, k)):
                        continue
                    pattern = BitVector(
                        code.n_checks,
                        sum(
                            1 << code.site_check(t % lp, t // lp)
                            for t in range(lp * mp)
                            if (v_bits >> t) & 1
                        ),
                    )
                    if independent(pattern):
                        chosen.append((pattern, scale_x))
                if len(chosen) == r:
                    break
    # completion: single-check representatives
    for c in range(code.n_checks):
        if len(chosen) == r:
            break
        cand = BitVector.from_indices(code.n_checks, [c])
        if independent(cand):
            chosen.append((cand, translation_scale(code, cand, sector, catalog_basis=[])))
    if len(chosen) != r:
        raise AssertionError("basis completion failed")
    return chosen


def _natural_cell(code: CssCode) -> Optional[tuple[int, int]]:
    """Largest cell strictly smaller than the stencil width that divides the
    lattice (the transfer-search cell choice)."""
    terms = list(code.a.terms) + list(code.b.terms)
    def width(vals, period):
        spread = [min(v, period - v) for v in vals]
        return max(spread) + 1
    wx = width([t.i for t in terms], code.ell)
    wy = width([t.j for t in terms], code.m)
    lp = max((d for d in _divisors(code.ell) if d < wx + 1), default=None)
    mp = max((d for d in _divisors(code.m) if d < wy + 1), default=None)
    if lp is None or mp is None:
        return None
    return lp, mp


def build_basis_data(
    code: CssCode,
    entry: Optional[CatalogEntry] = None,
    sector: Sector = "X",
    require_short_strings: bool = False,
) -> CokerBasisData:
    """Compute the full excitation-class data for a code (uncached)."""
    det = code.detecting_matrix(sector)
    r = coker_dimension(code, sector)
    if entry is None:
        try:
            entry = get_entry(code.name)
        except KeyError:
            entry = None
    if entry is not None and entry.basis is not None and sector == "X":
        basis = [(pattern_to_syndrome(code, b.pattern), b.scale) for b in entry.basis]
    else:
        basis = _auto_select_basis(code, sector)
    if len(basis) != r:
        raise ValueError(f"basis size {len(basis)} != coker dimension {r}")
    if not verify_basis(code, [p for p, _ in basis], sector):
        raise ValueError("basis fails the span/independence rank test")
    # the decoders assume a common refinement of all scale cells
    min_scale = min(s for _, s in basis)
    for _, s in basis:
        if s % min_scale or code.ell % s or code.m % s:
            raise ValueError(
                "translation scales must divide each other and the lattice; "
                f"got {sorted(set(s for _, s in basis))} on {code.ell}x{code.m}"
            )
    # every scale must be a valid equivalence on this torus
    for p, s in basis:
        dx = p ^ code.translate_syndrome(p, s, 0)
        dy = p ^ code.translate_syndrome(p, 0, s)
        if not (in_image(det, dx) and in_image(det, dy)):
            raise ValueError(f"scale {s} is not a torus equivalence for {p.indices()}")
    nmat = _n_matrix(code, sector)
    bmat = _b_matrix(code, [p for p, _ in basis])
    dec = _decomposition_matrix(nmat, bmat)
    data = CokerBasisData(
        code_name=code.name,
        spec_hash=spec_hash(code),
        r=r,
        basis=basis,
        n_matrix=nmat,
        b_matrix=bmat,
        decomposition=dec,
        rewrite_ops=[],
    )
    solver = Solver(det)
    null = nullspace_basis(det)
    for c in range(code.n_checks):
        e = find_rewrite_operator(code, data, c, solver, null, sector)
        if syndrome(code, e, sector) != rewrite_rhs(code, data, c):
            raise AssertionError(f"rewrite operator for check {c} fails re-multiplication")
        data.rewrite_ops.append(e)
    strings, missing = find_short_strings(code, data, sector)
    if missing and require_short_strings:
        raise ValueError(f"no short string at stated scale for basis indices {missing}")
    for s in strings:
        data.short_strings[(s.basis_index, s.direction)] = s
    return data


# ---------------------------------------------------------------------------
# Cache
# ---------------------------------------------------------------------------


def _cache_dir() -> Path:
    env = os.environ.get("TTIMATCH_CACHE")
    if env:
        return Path(env)
    return Path(".ttimatch-cache")


def _cache_path(code: CssCode, cache_dir: Optional[Path] = None) -> Path:
    d = Path(cache_dir) if cache_dir else _cache_dir()
    return d / f"{code.name}-{spec_hash(code)}.json"


def save_basis_data(data: CokerBasisData, code: CssCode, cache_dir=None) -> Path:
    path = _cache_path(code, cache_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "version": CACHE_VERSION,
        "code": data.code_name,
        "spec_hash": data.spec_hash,
        "r": data.r,
        "n_checks": code.n_checks,
        "n_qubits": code.n,
        "basis": [
            {"pattern": p.indices(), "scale": s} for p, s in data.basis
        ],
        "n_matrix": [f"{row:x}" for row in data.n_matrix.data],
        "decomposition": [f"{row:x}" for row in data.decomposition.data],
        "rewrite_ops": [e.indices() for e in data.rewrite_ops],
        "short_strings": [
            {
                "basis_index": s.basis_index,
                "direction": s.direction,
                "step": s.step,
                "error": s.error.indices(),
            }
            for s in data.short_strings.values()
        ],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload))
    tmp.replace(path)
    return path


def load_basis_data(code: CssCode, cache_dir=None) -> Optional[CokerBasisData]:
    path = _cache_path(code, cache_dir)
    if not path.exists():
        return None
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if payload.get("version") != CACHE_VERSION:
        return None
    if payload.get("spec_hash") != spec_hash(code):
        return None
    nc, nq, r = payload["n_checks"], payload["n_qubits"], payload["r"]
    basis = [
        (BitVector.from_indices(nc, b["pattern"]), b["scale"]) for b in payload["basis"]
    ]
    data = CokerBasisData(
        code_name=payload["code"],
        spec_hash=payload["spec_hash"],
        r=r,
        basis=basis,
        n_matrix=BitMatrix(r, nc, tuple(int(x, 16) for x in payload["n_matrix"])),
        b_matrix=_b_matrix(code, [p for p, _ in basis]),
        decomposition=BitMatrix(
            r, nc, tuple(int(x, 16) for x in payload["decomposition"])
        ),
        rewrite_ops=[BitVector.from_indices(nq, e) for e in payload["rewrite_ops"]],
    )
    for rec in payload["short_strings"]:
        s = ShortString(
            rec["basis_index"], rec["direction"], rec["step"],
            BitVector.from_indices(nq, rec["error"]),
        )
        data.short_strings[(s.basis_index, s.direction)] = s
    return data


def get_basis_data(
    code: CssCode,
    cache_dir=None,
    rebuild: bool = False,
    sector: Sector = "X",
) -> CokerBasisData:
    """Load the cached basis data for a code, building and caching if needed."""
    if not rebuild:
        cached = load_basis_data(code, cache_dir)
        if cached is not None:
            return cached
    data = build_basis_data(code, sector=sector)
    save_basis_data(data, code, cache_dir)
    return data
