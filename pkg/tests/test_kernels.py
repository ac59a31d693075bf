"""Oracle and twin-equivalence tests for the hot kernels."""
import itertools

import numpy as np
import pytest

from ttimatch._kernels import pure
from ttimatch.kernels import backends


def brute_force_mwpm(n, w):
    """Exhaustive minimum-weight perfect matching (n <= 10)."""
    verts = list(range(n))

    def rec(rem):
        if not rem:
            return 0, []
        a = rem[0]
        best = None
        for b in rem[1:]:
            sub = [v for v in rem if v not in (a, b)]
            cost, pairs = rec(tuple(sub))
            cost += w[a][b]
            if best is None or cost < best[0]:
                best = (cost, pairs + [(a, b)])
        return best

    return rec(tuple(verts))


def random_weights(rng, n, lo=1, hi=20):
    w = rng.integers(lo, hi + 1, size=(n, n))
    w = np.triu(w, 1)
    w = w + w.T
    return w.astype(np.int64)


ALL_BACKENDS = sorted(backends().items())


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_mwpm_trivial_pair(name, impl):
    assert impl.min_weight_perfect_matching(2, np.ones((2, 2), dtype=np.int64)) == [(0, 1)]


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_mwpm_dominant_pairing(name, impl):
    w = np.full((4, 4), 10, dtype=np.int64)
    np.fill_diagonal(w, 0)
    w[0, 1] = w[1, 0] = 1
    w[2, 3] = w[3, 2] = 1
    assert impl.min_weight_perfect_matching(4, w) == [(0, 1), (2, 3)]


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_mwpm_odd_rejected(name, impl):
    with pytest.raises(ValueError):
        impl.min_weight_perfect_matching(3, np.ones((3, 3), dtype=np.int64))


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_mwpm_against_brute_force(name, impl):
    rng = np.random.default_rng(42)
    for trial in range(300):
        n = int(rng.choice([2, 4, 6, 8]))
        w = random_weights(rng, n)
        pairs = impl.min_weight_perfect_matching(n, w)
        got = sum(int(w[i][j]) for i, j in pairs)
        want, _ = brute_force_mwpm(n, w)
        assert got == want, f"trial {trial}: {got} != {want}\n{w}"
        # well-formed perfect matching
        seen = sorted(v for p in pairs for v in p)
        assert seen == list(range(n))


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_mwpm_with_ties_and_zeros(name, impl):
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.choice([4, 6, 8]))
        w = random_weights(rng, n, lo=0, hi=3)  # many ties, zero weights
        pairs = impl.min_weight_perfect_matching(n, w)
        got = sum(int(w[i][j]) for i, j in pairs)
        want, _ = brute_force_mwpm(n, w)
        assert got == want


def test_mwpm_against_networkx_medium():
    nx = pytest.importorskip("networkx")
    rng = np.random.default_rng(3)
    impls = backends()
    for trial in range(25):
        n = int(rng.choice([10, 14, 20, 26]))
        w = random_weights(rng, n, lo=1, hi=50)
        g = nx.Graph()
        wmax = int(w.max())
        big = (n + 2) * (wmax + 1)
        for i in range(n):
            for j in range(i + 1, n):
                g.add_edge(i, j, weight=big - int(w[i][j]))
        mate = nx.algorithms.matching.max_weight_matching(g, maxcardinality=True)
        want = sum(int(w[i][j]) for i, j in mate)
        for name, impl in impls.items():
            pairs = impl.min_weight_perfect_matching(n, w)
            got = sum(int(w[i][j]) for i, j in pairs)
            assert got == want, f"{name} trial {trial}"


def test_mwpm_metric_instances():
    """Torus-metric weights (the production shape: many equal weights)."""
    nx = pytest.importorskip("networkx")
    rng = np.random.default_rng(9)
    impls = backends()
    for trial in range(15):
        L = 12
        n = 2 * int(rng.integers(3, 14))
        xs = rng.integers(0, L, size=n)
        ys = rng.integers(0, L, size=n)
        w = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                if i != j:
                    dx = min((xs[i] - xs[j]) % L, (xs[j] - xs[i]) % L)
                    dy = min((ys[i] - ys[j]) % L, (ys[j] - ys[i]) % L)
                    w[i][j] = dx + dy
        w = np.maximum(w, 1)
        np.fill_diagonal(w, 0)
        g = nx.Graph()
        wmax = int(w.max())
        big = (n + 2) * (wmax + 1)
        for i in range(n):
            for j in range(i + 1, n):
                g.add_edge(i, j, weight=big - int(w[i][j]))
        mate = nx.algorithms.matching.max_weight_matching(g, maxcardinality=True)
        want = sum(int(w[i][j]) for i, j in mate)
        for name, impl in impls.items():
            pairs = impl.min_weight_perfect_matching(n, w)
            got = sum(int(w[i][j]) for i, j in pairs)
            assert got == want, f"{name} trial {trial} ({n} vertices)"


def test_backends_agree_exactly():
    """Twin implementations must return identical pairings (not just weight)."""
    impls = backends()
    if len(impls) < 2:
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(11)
    for _ in range(60):
        n = int(rng.choice([4, 6, 8, 12, 16]))
        # unique-optimum weights via large spread
        w = random_weights(rng, n, lo=1, hi=10 ** 6)
        results = {name: impl.min_weight_perfect_matching(n, w) for name, impl in impls.items()}
        vals = list(results.values())
        assert all(v == vals[0] for v in vals), results


# ---------------------------------------------------------------------------
# Dijkstra over the move lattice
# ---------------------------------------------------------------------------

TORIC_MOVES = [
    (1, 0, 0, 0, 0),
    (-1, 0, 0, 0, 0),
    (0, 1, 0, 0, 0),
    (0, -1, 0, 0, 0),
]


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_dijkstra_manhattan_no_penalty(name, impl):
    ell = m = 7
    bg = np.zeros(ell * m, dtype=np.uint8)
    dist, hops, par = impl.dijkstra_moves(ell, m, TORIC_MOVES, 1, 1, bg, 0, list(range(ell * m)))
    for c in range(ell * m):
        i, j = c % ell, c // ell
        want = min(i, ell - i) + min(j, m - j)
        assert dist[c] == want
        assert hops[c] == want


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_dijkstra_penalty_discount(name, impl):
    # One move type with an "other" check: moving right also flips the check
    # below; when that check is background-violated the move is cheap.
    ell, m = 8, 8
    moves = [(1, 0, 0, -1, 1), (-1, 0, -1, -1, 1)]
    bg = np.zeros(ell * m, dtype=np.uint8)
    # discount the first two steps to the right from (0,0): others at (0,-1),(1,-1)
    bg[0 + ell * 7] = 1
    bg[1 + ell * 7] = 1
    dist, _, _ = impl.dijkstra_moves(ell, m, moves, 1, 1, bg, 0, [2])
    # two discounted moves cost 1 each
    assert dist[2] == 2
    dist2, _, _ = impl.dijkstra_moves(ell, m, moves, 1, 1, np.zeros(ell * m, dtype=np.uint8), 0, [2])
    assert dist2[2] == 4


def test_dijkstra_backends_identical():
    impls = backends()
    if len(impls) < 2:
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(5)
    moves = [
        (3, 0, 0, 1, 1), (-3, 0, -3, 1, 1), (0, 3, 1, 0, 1), (0, -3, 1, -3, 1),
        (1, 1, 2, 0, 1), (-1, -1, -2, 0, 1),
    ]
    for _ in range(20):
        ell, m = 12, 6
        bg = (rng.random(ell * m) < 0.2).astype(np.uint8)
        src = int(rng.integers(ell * m))
        targets = sorted(rng.choice(ell * m, size=6, replace=False).tolist())
        outs = [impl.dijkstra_moves(ell, m, moves, 2, 1, bg, src, targets)
                for _, impl in sorted(impls.items())]
        for (d1, h1, p1), (d2, h2, p2) in zip(outs, outs[1:]):
            for t in targets:
                assert d1[t] == d2[t]
                assert h1[t] == h2[t]
            assert list(p1) == list(p2)


# ---------------------------------------------------------------------------
# DFS cluster search
# ---------------------------------------------------------------------------


def _csr_from_code(code):
    import numpy as np

    qc_idx, qc_ptr = [], [0]
    for q in range(code.n):
        checks = [c for c in range(code.n_checks) if code.hx.get(c, q)]
        qc_idx.extend(checks)
        qc_ptr.append(len(qc_idx))
    cq_idx, cq_ptr = [], [0]
    for c in range(code.n_checks):
        qubits = [q for q in range(code.n) if code.hx.get(c, q)]
        cq_idx.extend(qubits)
        cq_ptr.append(len(cq_idx))
    return (
        np.array(qc_idx, dtype=np.int32),
        np.array(qc_ptr, dtype=np.int32),
        np.array(cq_idx, dtype=np.int32),
        np.array(cq_ptr, dtype=np.int32),
    )


def _words(indices, n):
    w = np.zeros((n + 63) // 64, dtype=np.uint64)
    for c in indices:
        w[c >> 6] |= np.uint64(1 << (c & 63))
    return w


@pytest.fixture(scope="module")
def gross_csr():
    from ttimatch.catalog import get_code

    code = get_code("gross")
    return code, _csr_from_code(code)


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_dfs_single_qubit_cluster(name, impl, gross_csr):
    from ttimatch.code import syndrome
    from ttimatch.gf2 import BitVector

    code, (qci, qcp, cqi, cqp) = gross_csr
    e = BitVector.from_indices(code.n, [17])
    s = syndrome(code, e)
    checks = s.indices()
    got = impl.dfs_cluster_search(
        qci, qcp, cqi, cqp, _words(checks, code.n_checks), code.n_checks,
        checks[0], checks[1], 6,
    )
    assert got == (17,)


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_dfs_zero_depth_absent(name, impl, gross_csr):
    code, (qci, qcp, cqi, cqp) = gross_csr
    got = impl.dfs_cluster_search(
        qci, qcp, cqi, cqp, _words([0, 1], code.n_checks), code.n_checks, 0, 1, 0,
    )
    assert got is None


@pytest.mark.parametrize("name,impl", ALL_BACKENDS)
def test_dfs_plant_and_recover(name, impl, gross_csr):
    from ttimatch.code import syndrome
    from ttimatch.gf2 import BitVector

    code, (qci, qcp, cqi, cqp) = gross_csr
    rng = np.random.default_rng(13)
    recovered = 0
    for _ in range(30):
        # plant a connected 3-qubit error: grow from a random seed qubit
        qubits = [int(rng.integers(code.n))]
        while len(qubits) < 3:
            s = syndrome(code, BitVector.from_indices(code.n, qubits))
            cand = set()
            for c in s.indices():
                for k in range(cqp[c], cqp[c + 1]):
                    if int(cqi[k]) not in qubits:
                        cand.add(int(cqi[k]))
            qubits.append(sorted(cand)[int(rng.integers(len(cand)))])
        e = BitVector.from_indices(code.n, qubits)
        s = syndrome(code, e)
        checks = s.indices()
        if len(checks) < 2:
            continue
        got = impl.dfs_cluster_search(
            qci, qcp, cqi, cqp, _words(checks, code.n_checks), code.n_checks,
            checks[0], checks[-1], 6,
        )
        if got is None:
            continue
        ss = syndrome(code, BitVector.from_indices(code.n, got))
        assert set(ss.indices()) <= set(checks)
        assert checks[0] in ss.indices() and checks[-1] in ss.indices()
        recovered += 1
    assert recovered >= 25  # DFS should find clusters for nearly all plants


def test_dfs_backends_identical(gross_csr):
    from ttimatch.code import syndrome
    from ttimatch.gf2 import BitVector

    impls = backends()
    if len(impls) < 2:
        pytest.skip("compiled backend unavailable")
    code, (qci, qcp, cqi, cqp) = gross_csr
    rng = np.random.default_rng(21)
    for _ in range(40):
        e = BitVector.from_numpy((rng.random(code.n) < 0.03).astype(np.uint8))
        s = syndrome(code, e)
        checks = s.indices()
        if len(checks) < 2:
            continue
        c_a, c_b = checks[0], checks[1]
        outs = []
        for _, impl in sorted(impls.items()):
            outs.append(
                impl.dfs_cluster_search(
                    qci, qcp, cqi, cqp, _words(checks, code.n_checks),
                    code.n_checks, c_a, c_b, 6, 5000,
                )
            )
        assert outs[0] == outs[1], (checks, outs)
