"""Small-lattice matching decoder.

Runs the fixed-shift matching pipeline over every distinct syndrome shift,
pools fully-agreeing cluster candidates across shifts, and greedily covers
the observed syndrome with disjoint candidates. When the first two stages do
not produce a covering low-weight correction, previously selected subsets are
re-injected (single, then pairs) with internal matching forbidden.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..code import CssCode, Sector, syndrome
from ..coker import CokerBasisData
from ..gf2 import BitVector
from ..matching import MoveSet, compute_move_set
from ..clusters import ClusterCandidate, fixed_shift_pipeline
from ..params import DecoderParams
from .outcome import DecodeOutcome


def shift_set(code: CssCode) -> list[tuple[int, int]]:
    """Distinct syndrome shifts: the b x b translations, deduplicated mod
    the lattice."""
    b = code.coarse_b or 1
    return sorted({(a % code.ell, d % code.m) for a in range(b) for d in range(b)})


@dataclass
class _Pooled:
    candidate: ClusterCandidate
    multiplicity: int


def _pool_candidates(
    code: CssCode,
    data: CokerBasisData,
    move_set: MoveSet,
    s_bits: BitVector,
    params: DecoderParams,
    shifts: list[tuple[int, int]],
    forbidden_unshifted: tuple[frozenset[int], ...] = (),
    sector: Sector = "X",
    dfs_memo: Optional[dict] = None,
) -> list[_Pooled]:
    """Run the pipeline on every shift; pool unshifted candidates with F_S=1."""
    pool: dict[frozenset[int], _Pooled] = {}
    for (a, d) in shifts:
        s_shifted = code.translate_syndrome(s_bits, a, d)
        forb = tuple(
            frozenset(code.site_check(i + a, j + d) for (i, j) in
                       (code.check_site(c) for c in S))
            for S in forbidden_unshifted
        )
        res = fixed_shift_pipeline(code, data, move_set, s_shifted, params,
                                   forbidden_internal=forb, sector=sector,
                                   dfs_memo=dfs_memo)
        for cand, score in res.candidates:
            if score != 1.0:
                continue
            checks = frozenset(
                code.site_check(i - a, j - d)
                for (i, j) in (code.check_site(c) for c in cand.checks)
            )
            error = code.translate_error(cand.error, -a, -d)
            got = pool.get(checks)
            if got is None:
                pool[checks] = _Pooled(ClusterCandidate(checks, error), 1)
            else:
                got.multiplicity += 1
                if error.weight() < got.candidate.error.weight() or (
                    error.weight() == got.candidate.error.weight()
                    and error.bits < got.candidate.error.bits
                ):
                    got.candidate = ClusterCandidate(checks, error)
    return sorted(
        pool.values(),
        key=lambda p: (-p.multiplicity, -len(p.candidate.checks),
                       sorted(p.candidate.checks)),
    )


def _select_disjoint(pooled: list[_Pooled]) -> list[ClusterCandidate]:
    taken: set[int] = set()
    out = []
    for p in pooled:
        if p.candidate.checks & taken:
            continue
        out.append(p.candidate)
        taken |= p.candidate.checks
    return out


def _combine(code, family: list[ClusterCandidate]) -> tuple[BitVector, set[int]]:
    bits = 0
    covered: set[int] = set()
    for cand in family:
        bits ^= cand.error.bits
        covered |= cand.checks
    return BitVector(code.n, bits), covered


def decode_small(
    code: CssCode,
    data: CokerBasisData,
    s_obs: BitVector,
    params: Optional[DecoderParams] = None,
    move_set: Optional[MoveSet] = None,
    sector: Sector = "X",
) -> DecodeOutcome:
    """Two-stage cluster-cover decoding with subset re-injection."""
    params = params or DecoderParams()
    if move_set is None:
        move_set = compute_move_set(code, sector)
    if s_obs.bits == 0:
        return DecodeOutcome(correction=BitVector(code.n, 0), failed=False,
                             diagnostics={"stage": 0})
    shifts = shift_set(code)
    support = set(s_obs.indices())
    dfs_memo: dict = {}
    best_cover: Optional[tuple[int, int, BitVector, str]] = None  # (w, bits, corr, tag)

    def consider(corr: BitVector, covered: set[int], tag: str):
        nonlocal best_cover
        if covered != support:
            return None
        key = (corr.weight(), corr.bits, corr, tag)
        if best_cover is None or key[:2] < best_cover[:2]:
            best_cover = key
        if corr.weight() <= params.e_limit:
            return corr
        return None

    # ---- stage 1
    pooled1 = _pool_candidates(code, data, move_set, s_obs, params, shifts,
                               sector=sector, dfs_memo=dfs_memo)
    family1 = _select_disjoint(pooled1)
    corr1, covered1 = _combine(code, family1)
    got = consider(corr1, covered1, "stage1")
    if got is not None:
        return _finish(code, s_obs, got, sector, stage="stage1")

    # ---- stage 2 on the residual syndrome
    def run_stage2(base_family, forbidden=()):
        base_bits, base_cov = _combine(code, base_family)
        resid = BitVector(
            code.n_checks,
            s_obs.bits ^ sum(1 << c for cand in base_family for c in cand.checks),
        )
        if resid.bits == 0:
            return base_family, []
        pooled2 = _pool_candidates(code, data, move_set, resid, params, shifts,
                                   forbidden_unshifted=forbidden, sector=sector,
                                   dfs_memo=dfs_memo)
        family2 = _select_disjoint(pooled2)
        return base_family, family2

    f1, f2 = run_stage2(family1)
    corr12, covered12 = _combine(code, f1 + f2)
    got = consider(corr12, covered12, "stage2")
    if got is not None:
        return _finish(code, s_obs, got, sector, stage="stage2")

    # ---- subset re-injection: singles, then pairs
    family_sorted = sorted(family1, key=lambda c: sorted(c.checks))
    for drop in family_sorted:
        kept = [c for c in family1 if c is not drop]
        f1b, f2b = run_stage2(kept, forbidden=(drop.checks,))
        corr, cov = _combine(code, f1b + f2b)
        got = consider(corr, cov, "redecode1")
        if got is not None:
            return _finish(code, s_obs, got, sector, stage="redecode-single")
    for x in range(len(family_sorted)):
        for y in range(x + 1, len(family_sorted)):
            s_x, s_y = family_sorted[x], family_sorted[y]
            kept = [c for c in family1 if c is not s_x and c is not s_y]
            f1b, f2b = run_stage2(kept, forbidden=(s_x.checks, s_y.checks))
            corr, cov = _combine(code, f1b + f2b)
            got = consider(corr, cov, "redecode2")
            if got is not None:
                return _finish(code, s_obs, got, sector, stage="redecode-pair")

    if best_cover is not None:
        # covering but over the weight limit: return the lightest one found
        return _finish(code, s_obs, best_cover[2], sector, stage=best_cover[3],
                       over_weight=True)
    return DecodeOutcome.failure(stage="no-cover")


def _finish(code, s_obs, corr, sector, **diag) -> DecodeOutcome:
    if syndrome(code, corr, sector) != s_obs:
        raise AssertionError("covering correction fails the syndrome identity")
    return DecodeOutcome(correction=corr, failed=False, diagnostics=diag)
