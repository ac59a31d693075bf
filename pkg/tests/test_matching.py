import numpy as np
import pytest

from ttimatch.catalog import get_code
from ttimatch.code import syndrome
from ttimatch.gf2 import BitVector
from ttimatch.matching import (
    MoveSet,
    compute_move_set,
    edge_weights,
    move_qubit_index,
    mwpm,
    mwpm_pairs,
    path_checks,
    path_displacement,
    path_others,
)


@pytest.fixture(scope="module")
def gross_all(basis_of):
    code, data = basis_of("gross")
    return code, data, compute_move_set(code)


class TestMoveSet:
    def test_toric_four_moves_no_other(self):
        code = get_code("toric-5")
        ms = compute_move_set(code)
        assert len(ms.moves) == 4
        assert all(mv.other is None for mv in ms.moves)
        deltas = sorted(mv.delta for mv in ms.moves)
        assert deltas == [(0, 1), (0, 4), (1, 0), (4, 0)]

    def test_gross_twelve_endpoints(self, gross_all):
        _, _, ms = gross_all
        assert len(ms.moves) == 12
        assert len({mv.delta for mv in ms.moves}) == 12
        assert all(mv.other is not None for mv in ms.moves)

    def test_inversion_closure(self, gross_all):
        code, _, ms = gross_all
        deltas = {mv.delta for mv in ms.moves}
        for mv in ms.moves:
            di, dj = mv.delta
            assert ((-di) % code.ell, (-dj) % code.m) in deltas

    def test_move_qubit_realizes_move(self, gross_all):
        code, _, ms = gross_all
        for c in (0, 17, 44):
            ci, cj = code.check_site(c)
            for mv in ms.moves:
                q = move_qubit_index(code, mv, c)
                s = syndrome(code, BitVector.from_indices(code.n, [q]))
                checks = set(s.indices())
                far = code.site_check(ci + mv.delta[0], cj + mv.delta[1])
                assert c in checks and far in checks
                if mv.other is not None:
                    oc = code.site_check(ci + mv.other[0], cj + mv.other[1])
                    assert checks == {c, far, oc}

    def test_color_code_violates_uniqueness(self):
        code = get_code("color-2")
        with pytest.raises(ValueError):
            compute_move_set(code)


class TestEdgeWeights:
    def test_lambda_zero_is_hop_count(self, gross_all):
        code, data, ms = gross_all
        rng = np.random.default_rng(0)
        e = BitVector.from_numpy((rng.random(code.n) < 0.04).astype(np.uint8))
        s = syndrome(code, e)
        for i in range(data.r):
            g = edge_weights(code, data, ms, s, i, lam=0)
            for (a, b), path in g.paths.items():
                assert g.weight_of(a, b) == len(path)

    def test_weights_symmetric_and_positive(self, gross_all):
        code, data, ms = gross_all
        rng = np.random.default_rng(1)
        for _ in range(5):
            e = BitVector.from_numpy((rng.random(code.n) < 0.05).astype(np.uint8))
            s = syndrome(code, e)
            for i in range(data.r):
                g = edge_weights(code, data, ms, s, i, lam=1)
                assert np.array_equal(g.weights, g.weights.T)
                V = len(g.vertices)
                for x in range(V):
                    for y in range(x + 1, V):
                        assert g.weights[x, y] >= 1

    def test_weight_bounds_lambda_one(self, gross_all):
        # hops <= cost <= 2 * hops when lam = 1
        code, data, ms = gross_all
        rng = np.random.default_rng(2)
        e = BitVector.from_numpy((rng.random(code.n) < 0.05).astype(np.uint8))
        s = syndrome(code, e)
        for i in range(data.r):
            g0 = edge_weights(code, data, ms, s, i, lam=0)
            g1 = edge_weights(code, data, ms, s, i, lam=1)
            for (a, b) in g1.paths:
                h = g0.weight_of(a, b)
                c = g1.weight_of(a, b)
                assert h <= c <= 2 * h

    def test_adjacent_pair_with_other_violated_costs_one(self, gross_all):
        # single qubit error: its two moved checks are one move apart, and the
        # third check is violated background -> weight 1 at any lambda
        code, data, ms = gross_all
        e = BitVector.from_indices(code.n, [23])
        s = syndrome(code, e)
        checks = s.indices()
        # find a basis where exactly two of the three checks are vertices
        for i in range(data.r):
            verts = [c for c in checks if (data.check_class(c) >> i) & 1]
            if len(verts) == 2:
                other = [c for c in checks if c not in verts]
                if len(other) == 1 and not (data.check_class(other[0]) >> i) & 1:
                    g = edge_weights(code, data, ms, s, i, lam=1)
                    assert g.weight_of(verts[0], verts[1]) == 1
                    return
        pytest.skip("no basis with a 2+1 split for this error")

    def test_path_lemma_planted_clusters(self, gross_all):
        # lam = 0: path length between cluster-linked checks is bounded by
        # the cluster weight
        code, data, ms = gross_all
        rng = np.random.default_rng(3)
        from ttimatch.clusters import adjacency

        adj = adjacency(code)
        for _ in range(20):
            qubits = [int(rng.integers(code.n))]
            while len(qubits) < 4:
                s = syndrome(code, BitVector.from_indices(code.n, qubits))
                cand = set()
                for c in s.indices():
                    for k in range(adj.cq_ptr[c], adj.cq_ptr[c + 1]):
                        q = int(adj.cq_idx[k])
                        if q not in qubits:
                            cand.add(q)
                qubits.append(sorted(cand)[int(rng.integers(len(cand)))])
            e = BitVector.from_indices(code.n, qubits)
            s = syndrome(code, e)
            checks = s.indices()
            if len(checks) < 2:
                continue
            for i in range(data.r):
                verts = [c for c in checks if (data.check_class(c) >> i) & 1]
                if len(verts) >= 2:
                    g = edge_weights(code, data, ms, s, i, lam=0)
                    assert g.weight_of(verts[0], verts[1]) <= e.weight() + 2

    def test_paths_land_on_endpoint(self, gross_all):
        code, data, ms = gross_all
        rng = np.random.default_rng(4)
        e = BitVector.from_numpy((rng.random(code.n) < 0.05).astype(np.uint8))
        s = syndrome(code, e)
        for i in range(data.r):
            g = edge_weights(code, data, ms, s, i, lam=1)
            for (a, b), path in g.paths.items():
                nodes = path_checks(code, ms, a, path)
                assert nodes[0] == a and nodes[-1] == b
                dx, dy = path_displacement(ms, path)
                ai, aj = code.check_site(a)
                assert code.site_check(ai + dx, aj + dy) == b


class TestMwpm:
    def test_two_vertices(self):
        assert mwpm_pairs(np.array([[0, 5], [5, 0]])) == [(0, 1)]

    def test_deterministic_under_full_ties(self):
        w = np.ones((6, 6), dtype=np.int64)
        np.fill_diagonal(w, 0)
        first = mwpm_pairs(w)
        for _ in range(5):
            assert mwpm_pairs(w) == first
        # canonical tie-break: minimal total pair rank among optimal matchings
        assert first == [(0, 5), (1, 4), (2, 3)]

    def test_total_weight_not_perturbed(self):
        rng = np.random.default_rng(5)
        from ttimatch._kernels.pure import min_weight_perfect_matching

        for _ in range(50):
            n = int(rng.choice([4, 6, 8]))
            w = rng.integers(1, 21, size=(n, n))
            w = np.triu(w, 1)
            w = (w + w.T).astype(np.int64)
            pairs = mwpm_pairs(w)
            base = min_weight_perfect_matching(n, w)
            got = sum(int(w[i, j]) for i, j in pairs)
            want = sum(int(w[i, j]) for i, j in base)
            assert got == want

    def test_graph_wrapper(self, gross_all):
        code, data, ms = gross_all
        rng = np.random.default_rng(6)
        e = BitVector.from_numpy((rng.random(code.n) < 0.05).astype(np.uint8))
        s = syndrome(code, e)
        for i in range(data.r):
            g = edge_weights(code, data, ms, s, i, lam=1)
            if not g.vertices:
                continue
            pairs = mwpm(g)
            matched = sorted(v for p in pairs for v in p)
            assert matched == sorted(g.vertices)
