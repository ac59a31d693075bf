"""Per-class matching graphs: move enumeration, path-based edge weights, and
exact minimum-weight perfect matching.

Weights follow the move-cost model cost = 1 + lambda * penalty, where a move
is a single-qubit error linking two checks and the penalty is waived exactly
when the move's third activated check lands on a violated background check.
Shortest paths break cost ties by hop count; the matcher breaks remaining
ties canonically so runs are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .code import CssCode, Sector
from .coker import CokerBasisData
from .gf2 import BitVector
from .kernels import dijkstra_moves, min_weight_perfect_matching


@dataclass(frozen=True)
class Move:
    """Single-qubit transition between two checks.

    delta: offset of the far check; other: offset of the third activated
    check (None for weight-2 detecting columns); qubit: (block, di, dj)
    offset of the error qubit relative to the origin check.
    """

    delta: tuple[int, int]
    other: Optional[tuple[int, int]]
    qubit: tuple[int, int, int]


@dataclass(frozen=True)
class MoveSet:
    moves: tuple[Move, ...]

    def kernel_rows(self) -> np.ndarray:
        if "_rows" not in self.__dict__:
            rows = []
            for mv in self.moves:
                odx, ody = mv.other if mv.other is not None else (0, 0)
                rows.append((mv.delta[0], mv.delta[1], odx, ody, 1 if mv.other else 0))
            arr = np.asarray(rows, dtype=np.int32)
            object.__setattr__(self, "_rows", arr)
        return self.__dict__["_rows"]


def compute_move_set(code: CssCode, sector: Sector = "X") -> MoveSet:
    """Enumerate single-qubit moves out of the origin check.

    Every qubit whose detecting column contains the origin check contributes
    one move per further check in that column; a third check in the column
    becomes the move's `other`. Duplicate (origin, delta) pairs from distinct
    qubits violate the uniqueness premise the weight model relies on.
    """
    det = code.detecting_matrix(sector)
    origin = 0
    moves: list[Move] = []
    seen: dict[tuple[int, int], tuple[int, int, int]] = {}
    for q in range(code.n):
        col = det.column(q)
        if not (col.bits >> origin) & 1:
            continue
        checks = col.indices()
        blk, qi, qj = code.qubit_site(q)
        others = [c for c in checks if c != origin]
        for t in others:
            ti, tj = code.check_site(t)
            delta = (ti, tj)
            third = [c for c in others if c != t]
            if len(third) > 1:
                raise ValueError("detecting column weight exceeds 3; move model invalid")
            other = code.check_site(third[0]) if third else None
            if delta in seen and seen[delta] != (blk, qi, qj):
                raise ValueError(
                    f"two distinct qubits realize the move to {delta}; "
                    "the single-path uniqueness premise fails for this code"
                )
            seen[delta] = (blk, qi, qj)
            moves.append(Move(delta=delta, other=other, qubit=(blk, qi, qj)))
    # canonical ordering for reproducible path tie-breaks
    moves.sort(key=lambda mv: (mv.delta, mv.qubit))
    return MoveSet(tuple(moves))


def move_qubit_index(code: CssCode, move: Move, at_check: int) -> int:
    """Qubit index of `move` applied at check `at_check`."""
    ci, cj = code.check_site(at_check)
    blk, qi, qj = move.qubit
    nn = code.ell * code.m
    return blk * nn + ((ci + qi) % code.ell) + code.ell * ((cj + qj) % code.m)


@dataclass
class MatchingGraph:
    """Complete weighted graph over the violated checks of one basis sector."""

    basis_index: int
    vertices: list[int]  # check indices
    weights: np.ndarray  # (V, V) int64, scaled by the lambda denominator
    lam_den: int
    paths: dict[tuple[int, int], tuple[int, ...]]  # (a, b) -> move index sequence

    def weight_of(self, a: int, b: int) -> int:
        ia, ib = self.vertices.index(a), self.vertices.index(b)
        return int(self.weights[ia, ib])


@lru_cache(maxsize=32)
def _lambda_fraction(lam) -> tuple[int, int]:
    f = Fraction(lam).limit_denominator(10 ** 6)
    if f < 0:
        raise ValueError("lambda must be nonnegative")
    return f.numerator, f.denominator


def edge_weights(
    code: CssCode,
    data: CokerBasisData,
    move_set: MoveSet,
    synd: BitVector,
    basis_index: int,
    lam=1,
    sector: Sector = "X",
) -> MatchingGraph:
    """Build the complete matching graph for one basis sector.

    Vertices are violated checks whose class involves this basis element;
    weights are lambda-penalized shortest move-paths over the check lattice,
    with the penalty waived when a move's third check cancels a violated
    background check. One optimal path per pair is stored (the one found
    from the lower-indexed endpoint, ties broken by move order).
    """
    lam_num, lam_den = _lambda_fraction(lam)
    vertices = [c for c in synd.indices() if (data.check_class(c) >> basis_index) & 1]
    bg = np.zeros(code.n_checks, dtype=np.uint8)
    for c in synd.indices():
        if not (data.check_class(c) >> basis_index) & 1:
            bg[c] = 1
    V = len(vertices)
    weights = np.zeros((V, V), dtype=np.int64)
    paths: dict[tuple[int, int], tuple[int, ...]] = {}
    moves = move_set.kernel_rows()
    move_deltas = [mv.delta for mv in move_set.moves]
    for ia, a in enumerate(vertices):
        targets = vertices[ia + 1:]
        if not targets:
            continue
        dist, hops, par = dijkstra_moves(
            code.ell, code.m, moves, lam_num, lam_den, bg, a, targets
        )
        for ib in range(ia + 1, V):
            b = vertices[ib]
            weights[ia, ib] = weights[ib, ia] = dist[b]
            # reconstruct move sequence a -> b
            seq = []
            node = b
            while node != a:
                k = par[node]
                seq.append(k)
                di, dj = move_deltas[k]
                ni, nj = code.check_site(node)
                node = code.site_check(ni - di, nj - dj)
            seq.reverse()
            paths[(a, b)] = tuple(seq)
    return MatchingGraph(
        basis_index=basis_index, vertices=vertices, weights=weights,
        lam_den=lam_den, paths=paths,
    )


def path_checks(code: CssCode, move_set: MoveSet, a: int, path: Sequence[int]) -> list[int]:
    """Node sequence visited by a move path starting at check a."""
    nodes = [a]
    for k in path:
        di, dj = move_set.moves[k].delta
        i, j = code.check_site(nodes[-1])
        nodes.append(code.site_check(i + di, j + dj))
    return nodes


def path_others(
    code: CssCode, move_set: MoveSet, a: int, path: Sequence[int]
) -> list[int]:
    """Third-activated checks along a stored path (where defined)."""
    out = []
    node = a
    for k in path:
        mv = move_set.moves[k]
        i, j = code.check_site(node)
        if mv.other is not None:
            out.append(code.site_check(i + mv.other[0], j + mv.other[1]))
        node = code.site_check(i + mv.delta[0], j + mv.delta[1])
    return out


def path_displacement(move_set: MoveSet, path: Sequence[int]) -> tuple[int, int]:
    """Unwrapped lattice displacement of a move path (tracks winding)."""
    dx = dy = 0
    for k in path:
        mdx, mdy = move_set.moves[k].delta
        dx += mdx
        dy += mdy
    return dx, dy


def mwpm_pairs(weights: np.ndarray) -> list[tuple[int, int]]:
    """Exact minimum-weight perfect matching on the complete graph.

    Ties in total weight are broken canonically (minimal sum of pair ranks in
    lexicographic pair order) so identical inputs give identical pairings.
    """
    n = len(weights)
    if n % 2:
        raise ValueError("odd vertex count has no perfect matching")
    if n == 0:
        return []
    w = np.asarray(weights, dtype=np.int64)
    perturbed = w * _tie_scale(n) + _rank_matrix(n)
    np.fill_diagonal(perturbed, 0)
    return min_weight_perfect_matching(n, perturbed)


@lru_cache(maxsize=64)
def _rank_matrix(n: int) -> np.ndarray:
    rank = np.zeros((n, n), dtype=np.int64)
    iu = np.triu_indices(n, 1)
    rank[iu] = np.arange(1, len(iu[0]) + 1)
    rank += rank.T
    rank.setflags(write=False)
    return rank


def _tie_scale(n: int) -> int:
    # large enough that the true total always dominates the rank tie-break
    return (n * (n - 1) // 2) * (n // 2) + 1


def mwpm(graph: MatchingGraph) -> list[tuple[int, int]]:
    """Matched check-index pairs for a basis matching graph."""
    idx_pairs = mwpm_pairs(graph.weights)
    return [(graph.vertices[i], graph.vertices[j]) for i, j in idx_pairs]
