import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttimatch.gf2 import (
    BitMatrix,
    BitVector,
    RowBasis,
    in_image,
    nullspace_basis,
    rank,
    row_reduce,
    solve,
)


def random_matrix(rng, rows, cols):
    return BitMatrix.from_numpy(rng.integers(0, 2, size=(rows, cols)))


def test_row_reduce_identity():
    m = BitMatrix.identity(3)
    rref, pivots, r = row_reduce(m)
    assert r == 3
    assert pivots == [0, 1, 2]
    assert rref.data == m.data


def test_row_reduce_zero():
    m = BitMatrix.zeros(4, 4)
    _, pivots, r = row_reduce(m)
    assert r == 0 and pivots == []


def test_row_reduce_duplicate_rows():
    m = BitMatrix.from_numpy([[1, 1], [1, 1]])
    assert rank(m) == 1


def test_row_reduce_idempotent():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = random_matrix(rng, 6, 9)
        rref, _, _ = row_reduce(m)
        rref2, _, _ = row_reduce(rref)
        assert rref2.data == rref.data


def test_solve_identity():
    m = BitMatrix.identity(5)
    b = BitVector.from_indices(5, [0, 3])
    assert solve(m, b) == b


def test_solve_zero_matrix_no_solution():
    m = BitMatrix.zeros(3, 3)
    b = BitVector.from_indices(3, [1])
    assert solve(m, b) is None


def test_solve_dimension_mismatch():
    m = BitMatrix.identity(3)
    with pytest.raises(ValueError):
        solve(m, BitVector(4, 0))


def test_solve_random_full_row_rank():
    rng = np.random.default_rng(11)
    found = 0
    while found < 10:
        m = random_matrix(rng, 10, 14)
        if rank(m) < 10:
            continue
        found += 1
        x0 = BitVector.from_numpy(rng.integers(0, 2, size=14))
        b = m.matvec(x0)
        x = solve(m, b)
        assert x is not None
        assert m.matvec(x) == b


def test_solve_minimize_weight_small_nullspace():
    # kernel of [[1,1,0],[0,0,0]] is {(0,0,*), (1,1,*)}: min-weight solution of b=(1,0) is e0 or e1
    m = BitMatrix.from_numpy([[1, 1, 0], [0, 0, 0]])
    b = BitVector.from_indices(2, [0])
    x = solve(m, b, minimize_weight=True)
    assert x is not None and x.weight() == 1


def test_nullspace_identity_empty():
    assert nullspace_basis(BitMatrix.identity(4)) == []


def test_nullspace_zero_full():
    vs = nullspace_basis(BitMatrix.zeros(2, 3))
    assert len(vs) == 3


def test_nullspace_example_enumerated():
    # [[1,1,0],[0,1,1]]: enumerate all 8 vectors, kernel should be {0, (1,1,1)}
    m = BitMatrix.from_numpy([[1, 1, 0], [0, 1, 1]])
    kernel = [v for v in range(8) if all(
        (bin(row & v).count("1") % 2) == 0 for row in m.data)]
    assert sorted(kernel) == [0, 0b111]
    vs = nullspace_basis(m)
    assert len(vs) == 1 and vs[0].bits == 0b111


def test_in_image_zero_always():
    rng = np.random.default_rng(3)
    m = random_matrix(rng, 5, 8)
    assert in_image(m, BitVector(5, 0))


def test_in_image_zero_matrix():
    assert not in_image(BitMatrix.zeros(3, 3), BitVector.from_indices(3, [0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 30 - 1), st.data())
def test_rank_nullity(seed, data):
    rng = np.random.default_rng(seed)
    rows = data.draw(st.integers(1, 8))
    cols = data.draw(st.integers(1, 8))
    m = random_matrix(rng, rows, cols)
    assert rank(m) + len(nullspace_basis(m)) == cols


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 30 - 1))
def test_solve_reproduces_and_in_image(seed):
    rng = np.random.default_rng(seed)
    m = random_matrix(rng, 6, 9)
    x = BitVector.from_numpy(rng.integers(0, 2, size=9))
    b = m.matvec(x)
    got = solve(m, b)
    assert got is not None and m.matvec(got) == b
    assert in_image(m, b)


def test_nullspace_vectors_annihilate():
    rng = np.random.default_rng(5)
    for _ in range(10):
        m = random_matrix(rng, 7, 12)
        for v in nullspace_basis(m):
            assert m.matvec(v).bits == 0


def test_row_basis_membership():
    rng = np.random.default_rng(9)
    m = random_matrix(rng, 6, 10)
    basis = RowBasis(m)
    for _ in range(20):
        coeff = rng.integers(0, 2, size=6)
        v = 0
        for i in np.nonzero(coeff)[0]:
            v ^= m.data[int(i)]
        assert basis.contains(BitVector(10, v))
    # a vector outside the row space (if rank deficient in 10 dims, random vec usually outside)
    if rank(m) < 10:
        outside_found = False
        for _ in range(50):
            v = BitVector.from_numpy(rng.integers(0, 2, size=10))
            if not basis.contains(v):
                outside_found = True
                break
        assert outside_found


def test_numpy_round_trip():
    rng = np.random.default_rng(1)
    arr = rng.integers(0, 2, size=(4, 6)).astype(np.uint8)
    m = BitMatrix.from_numpy(arr)
    assert np.array_equal(m.to_numpy(), arr)
    v = rng.integers(0, 2, size=6).astype(np.uint8)
    assert np.array_equal(BitVector.from_numpy(v).to_numpy(), v)


def test_matmul_matches_numpy():
    rng = np.random.default_rng(2)
    a = rng.integers(0, 2, size=(5, 7))
    b = rng.integers(0, 2, size=(7, 4))
    got = BitMatrix.from_numpy(a).matmul(BitMatrix.from_numpy(b)).to_numpy()
    assert np.array_equal(got, (a @ b) % 2)


def test_exhaustive_small_solve():
    # all 3x3 matrices over GF(2) with all rhs: solve() agrees with brute force
    for mbits in range(512):
        rows = [(mbits >> (3 * i)) & 7 for i in range(3)]
        m = BitMatrix(3, 3, tuple(rows))
        for bbits in range(8):
            b = BitVector(3, bbits)
            brute = None
            for xbits in range(8):
                if all(((rows[i] & xbits).bit_count() & 1) == ((bbits >> i) & 1) for i in range(3)):
                    brute = xbits
                    break
            got = solve(m, b)
            assert (got is None) == (brute is None)
            if got is not None:
                assert m.matvec(got) == b
