"""Affine characters, string functions, decomposition identities."""

from fractions import Fraction

import pytest

from paraferm.characters import (
    affine_sl2_char,
    affine_top_weight,
    all_string_functions,
    decomposition_check_lk0,
    decomposition_check_lki,
    string_dual_route_check,
    string_function,
    w_minimal_central_charge,
)
from oracles import colored_partitions_table as colored_partitions
from paraferm.errors import BadLabel, RouteDisagreement
from paraferm.fusion_identify import topweight_para
from paraferm.lattice_fock import affine_module_basis
from paraferm.qseries import QSeries

Q = Fraction


class TestAffineChar:
    def test_vacuum_module_low_dims(self):
        ch = affine_sl2_char(3, 0, 4).specialize_z1()
        assert {int(e): int(c) for e, c in ch.terms.items()} == {0: 1, 1: 3, 2: 9, 3: 22}

    def test_pbw_oracle_below_the_ideal(self):
        # graded dimension equals 3-colored partitions strictly below k+1
        for k in (3, 4, 5):
            ch = affine_sl2_char(k, 0, k + 1).specialize_z1()
            for w in range(k + 1):
                assert ch.coefficient(w) == colored_partitions(w, 3)

    def test_top_levels(self):
        # (i+1)-dimensional top at weight i(i+2)/4(k+2)
        for k in (3, 4):
            for i in range(k + 1):
                h = affine_top_weight(k, i)
                ch = affine_sl2_char(k, i, h + 1)
                top = ch.q_slice(h)
                assert sum(top.values()) == i + 1
                assert set(top) == {i - 2 * t for t in range(i + 1)}

    def test_no_weights_below_top(self):
        for k, i in ((3, 1), (4, 3)):
            h = affine_top_weight(k, i)
            ch = affine_sl2_char(k, i, h + 2)
            assert min(e for _, e in ch.terms) == h

    def test_bad_label(self):
        with pytest.raises(BadLabel):
            affine_sl2_char(3, 4, 3)
        with pytest.raises(BadLabel):
            affine_sl2_char(3, -1, 3)

    def test_matches_fock_realization_by_charge(self):
        # cross-module oracle: two-variable coefficients against the graded,
        # charge-resolved dimensions of the realized module
        for k, i, wmax in ((3, 0, 3), (3, 1, Q(9, 4) - Q(1, 10)), (4, 2, 2)):
            basis = affine_module_basis(k, i, wmax + Q(i * (k - i), 4 * (k + 2)))
            ch = affine_sl2_char(k, i, wmax + Q(1, 2))
            realized = basis.charge_dims()
            for (w, lam), d in realized.items():
                assert ch.coefficient(int(lam), w) == d, (k, i, w, lam)
            total_char = sum(
                c for (_, e), c in ch.terms.items() if e <= max(w for w, _ in realized)
            )
            assert total_char == sum(realized.values())


class TestStringFunctions:
    def test_vacuum_string_k3(self):
        st = string_function(3, 0, 0, 7)
        assert {int(e): int(c) for e, c in st.series.terms.items()} == {
            0: 1,
            2: 1,
            3: 2,
            4: 3,
            5: 4,
            6: 7,
        }

    def test_leading_terms(self):
        assert string_function(3, 0, 1, 5).top_weight == Q(2, 3)
        assert string_function(3, 1, 0, 5).top_weight == Q(1, 15)

    def test_top_weights_match_label_formula(self):
        for k in (3, 4):
            for i in range(k + 1):
                for st in all_string_functions(k, i, 4):
                    assert st.top_weight == topweight_para(k, i, st.j), (k, i, st.j)
                    assert st.series.leading()[1] == 1

    def test_equivalent_labels_have_equal_strings(self):
        # (i, j) and (k-i, j-i) label isomorphic modules
        for k in (3, 4):
            for i in range(k + 1):
                for j in range(k):
                    a = string_function(k, i, j, 5).series
                    b = string_function(k, k - i, j - i, 5).series
                    assert a.agrees_with(b), (k, i, j)

    def test_top_row_equals_vacuum_row(self):
        for j in range(3):
            a = string_function(3, 3, j, 5).series
            b = string_function(3, 0, j, 5).series
            assert a.agrees_with(b)

    def test_serialization_table(self):
        obj = string_function(3, 1, 0, 4).to_obj()
        assert obj["k"] == 3 and obj["i"] == 1 and obj["j"] == 0
        assert obj["top_weight"] == [1, 15]
        assert all(isinstance(c, int) for c in obj["coefficients"])


class TestDecomposition:
    def test_vacuum_decomposition(self):
        for k in (3, 4):
            assert decomposition_check_lk0(k, 6).status == "pass"

    def test_all_modules_decompose(self):
        for k in (3, 4):
            for i in range(k + 1):
                r = decomposition_check_lki(k, i, 6)
                assert r.status == "pass", (k, i)

    def test_dropping_one_string_fails_at_its_total_weight(self):
        # removing the j=1 summand leaves a defect at coset-top + string-top
        # = 1/k + (k-1)/k = 1
        k = 3
        strings = [st for st in all_string_functions(k, 0, 7) if st.j != 1]
        r = decomposition_check_lk0(k, 6, strings=strings)
        assert r.status == "fail"
        witness = r.details[0]["witness"]
        assert witness["first_failing_exponent"] == Q(1)

    def test_mutated_coefficient_fails(self):
        k = 3
        strings = all_string_functions(k, 0, 7)
        bad = QSeries(dict(strings[0].series.terms), strings[0].series.truncation)
        bad = bad + QSeries.monomial(2, 1, bad.truncation)
        strings[0].series = bad
        r = decomposition_check_lk0(k, 6, strings=strings)
        assert r.status == "fail"
        assert r.details[0]["witness"]["first_failing_exponent"] == Q(2)


class TestDualRoute:
    def test_k3_all_sectors(self):
        for i in range(4):
            r = string_dual_route_check(3, i, 4)
            assert r.status == "pass", (3, i)

    def test_k4_all_sectors(self):
        for i in range(5):
            r = string_dual_route_check(4, i, 3)
            assert r.status == "pass", (4, i)

    def test_single_string_variant(self):
        r = string_dual_route_check(3, 1, 4, j=1)
        assert r.status == "pass"

    def test_disagreement_raises(self):
        # sabotage: compare the (3,1) sector strings against the (3,2) kernel
        # dimensions by asking for an impossible label mix through the
        # non-strict path, then check the strict path raises on a real
        # mismatch built from a mutated series
        from paraferm import characters as chars

        orig = chars.string_function

        def broken(k, i, j, T, _char=None):
            st = orig(k, i, j, T, _char=_char)
            st.series = st.series + QSeries.monomial(st.top_weight + 1, 1, st.series.truncation)
            return st

        chars.string_function = broken
        try:
            with pytest.raises(RouteDisagreement):
                chars.string_dual_route_check(3, 0, 3, j=0)
            r = chars.string_dual_route_check(3, 0, 3, j=0, strict=False)
            assert r.status == "fail"
        finally:
            chars.string_function = orig


class TestWCentralCharge:
    def test_minimal_series_value(self):
        for k in range(3, 21):
            assert w_minimal_central_charge(k) == Q(2 * (k - 1), k + 2)

    def test_explicit_small_case(self):
        assert w_minimal_central_charge(3) == Q(4, 5)
        assert w_minimal_central_charge(3, 4, 5) == Q(4, 5)

    def test_symmetry_p_q(self):
        for k in (3, 4, 5):
            assert w_minimal_central_charge(k, k + 1, k + 2) == w_minimal_central_charge(
                k, k + 2, k + 1
            )
