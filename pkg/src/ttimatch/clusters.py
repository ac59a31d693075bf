"""Error-cluster discovery, matching agreement scores, the fixed-shift
re-matching pipeline, and the compatibility graph.

A cluster candidate is a connected low-weight error whose syndrome sits
inside the observed syndrome and links two matched checks; the pipeline uses
the fraction of matched edges internal to a candidate (its agreement score)
to reweight and re-run matching a few times per shift.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .code import CssCode, Sector
from .coker import CokerBasisData
from .gf2 import BitVector
from .kernels import dfs_cluster_search_backend
from .matching import MatchingGraph, MoveSet, edge_weights, mwpm, path_others
from .params import DecoderParams


@dataclass(frozen=True)
class ClusterCandidate:
    """Candidate error cluster: its check set, error, and weight."""

    checks: frozenset[int]
    error: BitVector

    @property
    def weight(self) -> int:
        return self.error.weight()


@dataclass
class ShiftResult:
    """Outcome of the matching pipeline on one shifted syndrome."""

    shift: tuple[int, int]
    matched_edges: dict[int, list[tuple[int, int]]]  # basis -> pairs
    paths: dict[tuple[int, int, int], tuple[int, ...]]  # (basis, a, b) -> moves
    candidates: list[tuple[ClusterCandidate, Optional[float]]]  # with F_S
    rounds_used: int = 0

    def all_edges(self) -> list[tuple[int, int, int]]:
        out = []
        for i in sorted(self.matched_edges):
            for (a, b) in self.matched_edges[i]:
                out.append((i, a, b))
        return out


class _Adjacency:
    """CSR adjacency of a detecting matrix, shared by DFS calls."""

    def __init__(self, code: CssCode, sector: Sector = "X"):
        det = code.detecting_matrix(sector)
        qc_idx, qc_ptr = [], [0]
        for q in range(code.n):
            col = det.column(q)
            qc_idx.extend(col.indices())
            qc_ptr.append(len(qc_idx))
        cq_idx, cq_ptr = [], [0]
        for c in range(code.n_checks):
            row = det.row(c)
            cq_idx.extend(row.indices())
            cq_ptr.append(len(cq_idx))
        self.qc_idx = np.asarray(qc_idx, dtype=np.int32)
        self.qc_ptr = np.asarray(qc_ptr, dtype=np.int32)
        self.cq_idx = np.asarray(cq_idx, dtype=np.int32)
        self.cq_ptr = np.asarray(cq_ptr, dtype=np.int32)
        self.n_checks = code.n_checks
        self.n_words = (code.n_checks + 63) // 64


_ADJ_CACHE: dict[tuple[str, str, int, int], _Adjacency] = {}


def adjacency(code: CssCode, sector: Sector = "X") -> _Adjacency:
    key = (code.name, sector, code.ell, code.m)
    if key not in _ADJ_CACHE:
        _ADJ_CACHE[key] = _Adjacency(code, sector)
    return _ADJ_CACHE[key]


def _words_of(s: BitVector, n_words: int) -> np.ndarray:
    out = np.zeros(n_words, dtype=np.uint64)
    bits = s.bits
    w = 0
    mask = (1 << 64) - 1
    while bits:
        out[w] = bits & mask
        bits >>= 64
        w += 1
    return out


def dfs_cluster(
    code: CssCode,
    s_obs: BitVector,
    c_a: int,
    c_b: int,
    w_fixed: int,
    node_budget: int = 20000,
    sector: Sector = "X",
    memo: Optional[dict] = None,
) -> Optional[ClusterCandidate]:
    """Depth-limited DFS for an error cluster linking two violated checks.

    The search is translation-covariant: the problem is translated so c_a
    sits at the origin check and the result translated back, which makes the
    outcome identical across syndrome shifts and lets callers memoize
    (`memo` keys on the translated problem).
    """
    if not ((s_obs.bits >> c_a) & 1 and (s_obs.bits >> c_b) & 1):
        raise ValueError("both endpoints must be violated checks")
    ai, aj = code.check_site(c_a)
    s_rel = code.translate_syndrome(s_obs, -ai, -aj)
    bi, bj = code.check_site(c_b)
    cb_rel = code.site_check(bi - ai, bj - aj)
    key = None
    if memo is not None:
        key = (s_rel.bits, cb_rel, w_fixed)
        if key in memo:
            got = memo[key]
            if got is None:
                return None
            error = code.translate_error(got, ai, aj)
            from .code import syndrome

            s = syndrome(code, error, sector)
            return ClusterCandidate(checks=frozenset(s.indices()), error=error)
    adj = adjacency(code, sector)
    impl = dfs_cluster_search_backend()
    got = impl.dfs_cluster_search(
        adj.qc_idx, adj.qc_ptr, adj.cq_idx, adj.cq_ptr,
        _words_of(s_rel, adj.n_words), adj.n_checks, 0, cb_rel,
        w_fixed, node_budget,
    )
    error_rel = None if got is None else BitVector.from_indices(code.n, got)
    if memo is not None:
        memo[key] = error_rel
    if error_rel is None:
        return None
    error = code.translate_error(error_rel, ai, aj)
    from .code import syndrome

    s = syndrome(code, error, sector)
    return ClusterCandidate(checks=frozenset(s.indices()), error=error)


def f_score(
    checks: frozenset[int], all_edges: list[tuple[int, int, int]]
) -> Optional[float]:
    """Fraction of matched edges touching the set that are internal to it.

    Edges are counted once each. Returns None when no matched edge touches
    the set (undefined score).
    """
    internal = touching = 0
    for (_, a, b) in all_edges:
        ina, inb = a in checks, b in checks
        if ina or inb:
            touching += 1
            if ina and inb:
                internal += 1
    if touching == 0:
        return None
    return internal / touching


def fixed_shift_pipeline(
    code: CssCode,
    data: CokerBasisData,
    move_set: MoveSet,
    s_shifted: BitVector,
    params: DecoderParams,
    forbidden_internal: tuple[frozenset[int], ...] = (),
    sector: Sector = "X",
    dfs_memo: Optional[dict] = None,
) -> ShiftResult:
    """Matching pipeline for one (already shifted) syndrome.

    Builds all per-basis matching graphs, runs exact matching, then up to
    R_match rounds of cluster discovery, agreement scoring, weight
    adjustment (delta- on internal edges, delta+ on single-endpoint edges,
    floored at zero) and re-matching. Edges internal to any `forbidden
    internal` set carry a large penalty throughout (the subset-redecode
    rule). Stops early once the matching stabilizes.
    """
    result = ShiftResult(shift=(0, 0), matched_edges={}, paths={}, candidates=[])
    if s_shifted.bits == 0:
        return result
    graphs: dict[int, MatchingGraph] = {}
    for i in range(data.r):
        g = edge_weights(code, data, move_set, s_shifted, i, params.lam, sector)
        if not g.vertices:
            continue
        if len(g.vertices) % 2:
            raise ValueError(
                f"odd vertex count in basis {i}; syndrome not physically realizable"
            )
        if forbidden_internal:
            _apply_forbidden(g, forbidden_internal, params.big_penalty)
        graphs[i] = g
        result.matched_edges[i] = mwpm(g)
        for (a, b) in result.matched_edges[i]:
            key = (a, b) if (a, b) in g.paths else (b, a)
            result.paths[(i, a, b)] = g.paths[key]
    seen_clusters: dict[frozenset[int], ClusterCandidate] = {}
    local_dfs: dict[tuple[int, int], Optional[ClusterCandidate]] = {}

    def edge_cluster(a: int, b: int) -> Optional[ClusterCandidate]:
        key = (a, b) if a < b else (b, a)
        if key not in local_dfs:
            local_dfs[key] = dfs_cluster(code, s_shifted, key[0], key[1],
                                         params.w_fixed, params.node_budget,
                                         sector, memo=dfs_memo)
        return local_dfs[key]

    rounds = 0
    for _ in range(params.r_match):
        rounds += 1
        all_edges = result.all_edges()
        round_sets: list[frozenset[int]] = []
        for (i, a, b) in all_edges:
            cand = edge_cluster(a, b)
            if cand is None:
                continue
            if cand.checks not in seen_clusters:
                seen_clusters[cand.checks] = cand
            if cand.checks not in round_sets:
                round_sets.append(cand.checks)
        changed = False
        adjusted = [S for S in round_sets if (f_score(S, all_edges) or 0.0) > params.f_limit]
        if adjusted:
            for i, g in graphs.items():
                if _adjust_weights(g, adjusted, params.delta_minus, params.delta_plus):
                    new_pairs = mwpm(g)
                    if new_pairs != result.matched_edges[i]:
                        changed = True
                        result.matched_edges[i] = new_pairs
                        for (a, b) in new_pairs:
                            key = (a, b) if (a, b) in g.paths else (b, a)
                            result.paths[(i, a, b)] = g.paths[key]
        if not changed:
            break
    final_edges = result.all_edges()
    result.candidates = [
        (cand, f_score(S, final_edges)) for S, cand in sorted(
            seen_clusters.items(), key=lambda kv: sorted(kv[0])
        )
    ]
    result.rounds_used = rounds
    return result


def _apply_forbidden(
    g: MatchingGraph, forbidden: tuple[frozenset[int], ...], penalty: int
) -> None:
    for S in forbidden:
        members = [k for k, c in enumerate(g.vertices) if c in S]
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                g.weights[members[x], members[y]] += penalty * g.lam_den
                g.weights[members[y], members[x]] += penalty * g.lam_den


def _adjust_weights(
    g: MatchingGraph, sets: list[frozenset[int]], delta_minus: float, delta_plus: float
) -> bool:
    """Apply internal/boundary weight deltas (scaled, floored at 0)."""
    dm = int(round(delta_minus * g.lam_den))
    dp = int(round(delta_plus * g.lam_den))
    changed = False
    V = len(g.vertices)
    for S in sets:
        inside = np.array([c in S for c in g.vertices], dtype=bool)
        for x in range(V):
            for y in range(x + 1, V):
                if inside[x] and inside[y]:
                    d = dm
                elif inside[x] or inside[y]:
                    d = dp
                else:
                    continue
                nw = max(0, int(g.weights[x, y]) + d)
                if nw != g.weights[x, y]:
                    g.weights[x, y] = g.weights[y, x] = nw
                    changed = True
    return changed


def compatibility_graph(
    code: CssCode,
    data: CokerBasisData,
    move_set: MoveSet,
    s_obs: BitVector,
    shift_result: ShiftResult,
) -> list[set[int]]:
    """Connected components over violated checks.

    Edges are the matched pairs plus links from matched endpoints to every
    originally violated background check canceled along the stored path.
    Components partition the violated checks; the size of the largest one
    scores a shift (smaller is better).
    """
    verts = s_obs.indices()
    parent = {c: c for c in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    sup = set(verts)
    for (i, a, b) in shift_result.all_edges():
        union(a, b)
        path = shift_result.paths.get((i, a, b))
        if path is None:
            continue
        for oc in path_others(code, move_set, a, path):
            # background checks of this basis that the path cancels
            if oc in sup and not (data.check_class(oc) >> i) & 1:
                union(a, oc)
                union(b, oc)
    comps: dict[int, set[int]] = {}
    for c in verts:
        comps.setdefault(find(c), set()).add(c)
    return sorted(comps.values(), key=lambda s: (-len(s), min(s)))
