import numpy as np
import pytest

from ttimatch.catalog import get_code, get_entry
from ttimatch.code import syndrome
from ttimatch.coker import (
    build_basis_data,
    build_decomposition_dictionary,
    cell_corner,
    coker_dimension,
    decompose_check,
    find_rewrite_operator,
    find_short_strings,
    get_basis_data,
    load_basis_data,
    pattern_to_syndrome,
    rewrite_rhs,
    save_basis_data,
    short_string_chain,
    transfer_matrix,
    translation_scale,
    verify_basis,
)
from ttimatch.gf2 import BitVector, in_image


@pytest.fixture(scope="module")
def gross():
    return get_code("gross")


@pytest.fixture(scope="module")
def gross_data(basis_of):
    return basis_of("gross")[1]


class TestCokerDimension:
    def test_toric_is_one(self):
        assert coker_dimension(get_code("toric-5")) == 1

    def test_gross_is_six(self, gross):
        assert coker_dimension(gross) == 6

    def test_two_gross_is_six(self):
        assert coker_dimension(get_code("two-gross")) == 6

    def test_gross_24_is_eight(self):
        assert coker_dimension(get_code("gross-24")) == 8


class TestVerifyBasis:
    def test_table_patterns_accepted(self, gross):
        entry = get_entry("gross")
        pats = [pattern_to_syndrome(gross, b.pattern) for b in entry.basis]
        assert verify_basis(gross, pats)

    def test_five_of_six_rejected(self, gross):
        entry = get_entry("gross")
        pats = [pattern_to_syndrome(gross, b.pattern) for b in entry.basis][:5]
        assert not verify_basis(gross, pats)

    def test_image_element_rejected(self, gross):
        entry = get_entry("gross")
        pats = [pattern_to_syndrome(gross, b.pattern) for b in entry.basis][:5]
        e = BitVector.from_indices(gross.n, [3])
        pats.append(syndrome(gross, e))
        assert not verify_basis(gross, pats)

    def test_empty_candidates_error(self, gross):
        with pytest.raises(ValueError):
            verify_basis(gross, [])


class TestTranslationScale:
    @pytest.mark.parametrize("code_name", ["gross", "two-gross", "gross-24"])
    def test_catalog_scales_reproduced(self, code_name):
        code = get_code(code_name)
        entry = get_entry(code_name)
        for b in entry.basis:
            u = pattern_to_syndrome(code, b.pattern)
            assert translation_scale(code, u) == b.scale

    def test_zero_class_rejected(self, gross):
        e = BitVector.from_indices(gross.n, [5])
        s = syndrome(gross, e)
        with pytest.raises(ValueError):
            translation_scale(gross, s)

    def test_toric_single_check_scale_one(self):
        code = get_code("toric-4")
        u = BitVector.from_indices(code.n_checks, [0])
        assert translation_scale(code, u) == 1

    def test_scales_are_torus_equivalences(self, gross):
        entry = get_entry("gross")
        det = gross.hx
        for b in entry.basis:
            u = pattern_to_syndrome(gross, b.pattern)
            assert in_image(det, u ^ gross.translate_syndrome(u, b.scale, 0))
            assert in_image(det, u ^ gross.translate_syndrome(u, 0, b.scale))


class TestDecomposition:
    def test_zero_maps_to_zero(self, gross_data):
        assert decompose_check(gross_data, BitVector(72, 0)).bits == 0

    def test_basis_self_decomposition(self, gross_data):
        for i, (pattern, _) in enumerate(gross_data.basis):
            u = decompose_check(gross_data, pattern)
            assert u.indices() == [i]

    def test_image_elements_map_to_zero(self, gross, gross_data):
        rng = np.random.default_rng(0)
        for _ in range(20):
            e = BitVector.from_numpy(rng.integers(0, 2, size=gross.n))
            s = syndrome(gross, e)
            assert decompose_check(gross_data, s).bits == 0

    def test_linearity(self, gross, gross_data):
        rng = np.random.default_rng(1)
        for _ in range(30):
            s1 = BitVector.from_numpy(rng.integers(0, 2, size=gross.n_checks))
            s2 = BitVector.from_numpy(rng.integers(0, 2, size=gross.n_checks))
            lhs = decompose_check(gross_data, s1 ^ s2)
            rhs = decompose_check(gross_data, s1) ^ decompose_check(gross_data, s2)
            assert lhs == rhs

    def test_residual_after_subtracting_basis_is_physical(self, gross, gross_data):
        rng = np.random.default_rng(2)
        for _ in range(10):
            s = BitVector.from_numpy(rng.integers(0, 2, size=gross.n_checks))
            u = decompose_check(gross_data, s)
            resid = s
            for i in u.indices():
                resid ^= gross_data.basis[i][0]
            assert in_image(gross.hx, resid)

    def test_dictionary_translation_covariance_at_b(self, gross, gross_data):
        # u_{x^12 c} = u_c (b = 12 divides the x-period)
        d = build_decomposition_dictionary(gross, gross_data)
        for c in range(gross.n_checks):
            i, j = gross.check_site(c)
            c2 = gross.site_check(i + 12, j)
            assert d[c] == d[c2]

    def test_toric_all_checks_class_one(self, basis_of):
        code, data = basis_of("toric-3")
        for c in range(code.n_checks):
            assert data.check_class(c) == 1


class TestParityLemma:
    @pytest.mark.parametrize("code_name", ["gross", "gross-24"])
    def test_even_class_counts(self, code_name, basis_of):
        code, data = basis_of(code_name)
        rng = np.random.default_rng(3)
        for _ in range(200):
            e = BitVector.from_numpy((rng.random(code.n) < 0.03).astype(np.uint8))
            s = syndrome(code, e)
            counts = [0] * data.r
            for c in s.indices():
                bits = data.check_class(c)
                for i in range(data.r):
                    if (bits >> i) & 1:
                        counts[i] += 1
            assert all(k % 2 == 0 for k in counts)


class TestRewrite:
    def test_all_gross_rewrites_verified(self, gross, gross_data):
        # re-multiplication identity for all 72 checks
        for c in range(gross.n_checks):
            e = gross_data.rewrite_ops[c]
            assert syndrome(gross, e) == rewrite_rhs(gross, gross_data, c)

    def test_cell_corner(self, gross):
        assert cell_corner(gross, gross.site_check(7, 4), 3) == (6, 3)
        assert cell_corner(gross, gross.site_check(7, 4), 6) == (6, 0)

    def test_trivial_when_check_equals_translated_pattern(self, basis_of):
        # toric: a single check is itself the basis pattern of its cell
        code, data = basis_of("toric-3")
        for c in range(code.n_checks):
            assert rewrite_rhs(code, data, c).bits == 0
            assert data.rewrite_ops[c].bits == 0


class TestTransfer:
    def test_toric_unit_cells(self):
        code = get_code("toric-4")
        res = transfer_matrix(code, "horizontal", (1, 1))
        assert res is not None
        assert res.matrix.rows == 1 and res.matrix.get(0, 0) == 1

    def test_gross_3x3_exists(self, gross):
        for direction in ("horizontal", "vertical"):
            res = transfer_matrix(gross, direction, (3, 3))
            assert res is not None
            assert res.matrix.rows == 9

    def test_gross_scale3_patterns_in_fixed_space(self, gross):
        tx = transfer_matrix(gross, "horizontal", (3, 3))
        ty = transfer_matrix(gross, "vertical", (3, 3))
        # local 3x3 coordinates q = i + 3*j for x + y + xy and x^2y + xy^2 + x^2y^2
        for terms in ([(1, 0), (0, 1), (1, 1)], [(2, 1), (1, 2), (2, 2)]):
            v = sum(1 << (i + 3 * j) for (i, j) in terms)
            assert tx.fixed(v, 1) and ty.fixed(v, 1)

    def test_gross_scale12_fixed_at_power_4(self, gross):
        tx = transfer_matrix(gross, "horizontal", (3, 3))
        ty = transfer_matrix(gross, "vertical", (3, 3))
        v = 1 << (1 + 3 * 0)  # pattern "x"
        assert tx.fixed(v, 4) and ty.fixed(v, 4)
        assert not (tx.fixed(v, 1) and ty.fixed(v, 1))

    def test_bad_cell_rejected(self, gross):
        with pytest.raises(ValueError):
            transfer_matrix(gross, "horizontal", (5, 5))


class TestShortStrings:
    @pytest.mark.parametrize("code_name", ["toric-3", "gross", "two-gross"])
    def test_all_basis_elements_have_verified_strings(self, code_name, basis_of):
        code, data = basis_of(code_name)
        strings, missing = find_short_strings(code, data)
        assert missing == []
        assert len(strings) == 2 * data.r
        for s in strings:
            pattern, scale = data.basis[s.basis_index]
            assert s.step == scale
            want = pattern ^ (
                code.translate_syndrome(pattern, scale, 0)
                if s.direction == "horizontal"
                else code.translate_syndrome(pattern, 0, scale)
            )
            assert syndrome(code, s.error) == want

    def test_toric_strings_are_single_qubit(self, basis_of):
        code, data = basis_of("toric-5")
        for s in data.short_strings.values():
            assert s.error.weight() == 1

    def test_gross_scale3_string_weight(self, gross, gross_data):
        # weight-4 transporters for the weight-3 patterns (one per direction)
        s = gross_data.short_strings[(4, "horizontal")]
        assert s.error.weight() <= 8  # local transport operator, not a wrap


class TestChains:
    def test_zero_winding_zero_error(self, gross, gross_data):
        e = short_string_chain(gross, gross_data, 4, (1, 0), (1, 0), (0, 0))
        assert e.bits == 0

    def test_single_step_equals_string(self, gross, gross_data):
        e = short_string_chain(gross, gross_data, 4, (0, 0), (1, 0), (1, 0))
        assert e == gross_data.short_strings[(4, "horizontal")].error

    def test_chain_syndrome_identity(self, gross, gross_data):
        for basis_index in range(gross_data.r):
            pattern, scale = gross_data.basis[basis_index]
            ncx, ncy = gross.ell // scale, gross.m // scale
            for winding in ((1, 0), (2, 1), (-1, 1), (0, -2), (3, 2)):
                cf = (0, 0)
                ct = ((cf[0] + winding[0]) % ncx, (cf[1] + winding[1]) % ncy)
                e = short_string_chain(gross, gross_data, basis_index, cf, ct, winding)
                want = gross.translate_syndrome(pattern, cf[0] * scale, cf[1] * scale) ^ (
                    gross.translate_syndrome(pattern, (cf[0] + winding[0]) * scale,
                                             (cf[1] + winding[1]) * scale)
                )
                assert syndrome(gross, e) == want

    def test_chain_composition(self, gross, gross_data):
        # chain over w1 then w2 equals XOR of the two chains
        b = 4
        _, scale = gross_data.basis[b]
        ncx, ncy = gross.ell // scale, gross.m // scale
        w1, w2 = (2, 1), (1, -1)
        mid = ((0 + w1[0]) % ncx, (0 + w1[1]) % ncy)
        end = ((mid[0] + w2[0]) % ncx, (mid[1] + w2[1]) % ncy)
        c1 = short_string_chain(gross, gross_data, b, (0, 0), mid, w1)
        c2 = short_string_chain(gross, gross_data, b, mid, end, w2)
        total = short_string_chain(gross, gross_data, b, (0, 0), end,
                                   (w1[0] + w2[0], w1[1] + w2[1]))
        assert syndrome(gross, c1 ^ c2) == syndrome(gross, total)

    def test_inconsistent_winding_rejected(self, gross, gross_data):
        with pytest.raises(ValueError):
            short_string_chain(gross, gross_data, 4, (0, 0), (1, 0), (2, 0))

    def test_gross24_basis7_chain_weight3_copies(self, basis_of):
        # chain of 3 horizontal + 2 vertical steps of the weight-3 scale-3
        # pattern leaves two translated copies of it
        code, data = basis_of("gross-24")
        basis_index = 7  # x^2 y + x y^2 + x^2 y^2
        pattern, scale = data.basis[basis_index]
        assert scale == 3
        e = short_string_chain(code, data, basis_index, (0, 0), (3, 2), (3, 2))
        s = syndrome(code, e)
        want = pattern ^ code.translate_syndrome(pattern, 9, 6)
        assert s == want
        assert pattern.weight() == 3


class TestCache:
    def test_round_trip(self, gross, gross_data, tmp_path):
        save_basis_data(gross_data, gross, cache_dir=tmp_path)
        loaded = load_basis_data(gross, cache_dir=tmp_path)
        assert loaded is not None
        assert loaded.r == gross_data.r
        assert loaded.decomposition.data == gross_data.decomposition.data
        assert [p.bits for p, _ in loaded.basis] == [p.bits for p, _ in gross_data.basis]
        assert [e.bits for e in loaded.rewrite_ops] == [e.bits for e in gross_data.rewrite_ops]
        assert set(loaded.short_strings) == set(gross_data.short_strings)

    def test_missing_cache_returns_none(self, gross, tmp_path):
        assert load_basis_data(gross, cache_dir=tmp_path / "empty") is None
