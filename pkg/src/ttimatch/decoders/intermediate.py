"""Intermediate-lattice matching decoder.

Scores every syndrome shift by the largest connected component of its
compatibility graph, refines the best shift by re-decoding its worst
component, then assembles the correction from per-check rewrite operators
plus short-string chains between matched scale-cells (winding taken from the
stored matching paths).
"""
from __future__ import annotations

import math
from typing import Optional

from ..code import CssCode, Sector, syndrome
from ..coker import CokerBasisData, short_string_chain
from ..gf2 import BitVector
from ..matching import MoveSet, compute_move_set, path_displacement
from ..clusters import ShiftResult, compatibility_graph, fixed_shift_pipeline
from ..params import DecoderParams, intermediate_defaults
from .outcome import DecodeOutcome
from .small import shift_set


def _score(comps: list[set[int]]) -> int:
    return len(comps[0]) if comps else 0


def decode_intermediate(
    code: CssCode,
    data: CokerBasisData,
    s_obs: BitVector,
    params: Optional[DecoderParams] = None,
    move_set: Optional[MoveSet] = None,
    sector: Sector = "X",
) -> DecodeOutcome:
    params = params or intermediate_defaults()
    if move_set is None:
        move_set = compute_move_set(code, sector)
    if s_obs.bits == 0:
        return DecodeOutcome(correction=BitVector(code.n, 0), failed=False,
                             diagnostics={"shift": (0, 0)})
    for idx, scale in enumerate(data.scales):
        if (idx, "horizontal") not in data.short_strings or (idx, "vertical") not in data.short_strings:
            raise ValueError("intermediate decoder needs short strings for every basis element")

    dfs_memo: dict = {}
    best: Optional[tuple[int, tuple[int, int], ShiftResult]] = None
    for (a, d) in shift_set(code):
        s_shifted = code.translate_syndrome(s_obs, a, d)
        res = fixed_shift_pipeline(code, data, move_set, s_shifted, params,
                                   sector=sector, dfs_memo=dfs_memo)
        res.shift = (a, d)
        comps = compatibility_graph(code, data, move_set, s_shifted, res)
        score = _score(comps)
        if best is None or score < best[0]:
            best = (score, (a, d), res)
    score, (a, d), res = best
    s_shifted = code.translate_syndrome(s_obs, a, d)

    # refinement: re-decode the largest compatibility component
    for _ in range(params.r_refine):
        comps = compatibility_graph(code, data, move_set, s_shifted, res)
        if not comps or len(comps[0]) <= 2:
            break
        comp = comps[0]
        s_comp = BitVector(code.n_checks, sum(1 << c for c in comp))
        sub = fixed_shift_pipeline(code, data, move_set, s_comp, params,
                                   sector=sector, dfs_memo=dfs_memo)
        merged = ShiftResult(shift=res.shift, matched_edges={}, paths=dict(res.paths),
                             candidates=res.candidates)
        for i in res.matched_edges:
            merged.matched_edges[i] = [
                (x, y) for (x, y) in res.matched_edges[i] if x not in comp
            ]
        for i, pairs in sub.matched_edges.items():
            merged.matched_edges.setdefault(i, []).extend(pairs)
        merged.paths.update(sub.paths)
        new_comps = compatibility_graph(code, data, move_set, s_shifted, merged)
        if _score(new_comps) < len(comp):
            res = merged
        else:
            break

    # correction: rewrite every violated check, then chain matched cells
    bits = 0
    for c in s_shifted.indices():
        bits ^= data.rewrite_ops[c].bits
    for (i, ca, cb) in res.all_edges():
        _, scale = data.basis[i]
        ai, aj = code.check_site(ca)
        cell_a = (ai // scale, aj // scale)
        bi, bj = code.check_site(cb)
        cell_b = (bi // scale, bj // scale)
        if cell_a == cell_b:
            continue  # rewrites already cancel inside one cell
        path = res.paths.get((i, ca, cb))
        if path is None:
            raise AssertionError("matched pair without a stored path")
        dx, dy = path_displacement(move_set, path)
        # winding = signed cell steps of the unwrapped path endpoint
        wind_x = math.floor((ai + dx) / scale) - cell_a[0]
        wind_y = math.floor((aj + dy) / scale) - cell_a[1]
        bits ^= short_string_chain(code, data, i, cell_a, cell_b, (wind_x, wind_y)).bits
    corr_shifted = BitVector(code.n, bits)
    if syndrome(code, corr_shifted, sector) != s_shifted:
        raise AssertionError("intermediate correction fails the shifted syndrome identity")
    corr = code.translate_error(corr_shifted, -a, -d)
    if syndrome(code, corr, sector) != s_obs:
        raise AssertionError("unshifted correction fails the syndrome identity")
    return DecodeOutcome(
        correction=corr, failed=False,
        diagnostics={"shift": (a, d), "largest_component": score},
    )
