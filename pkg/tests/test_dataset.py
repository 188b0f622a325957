import io

import numpy as np
import pytest

import cmdist
from cmdist import BinaryDataset, ItemsetFamily
from cmdist.dataset import (
    conjunction_values,
    empirical_distribution,
    load_transactions,
    parse_fimi,
    parity_values,
)
from cmdist.exceptions import (
    CapacityError,
    EmptyDatasetError,
    FimiParseError,
    ItemRangeError,
)
from conftest import random_dataset


class TestFimiParsing:
    def test_basic_lines(self):
        d = parse_fimi(["0 1", "0", "0 1"])
        assert d.k == 2
        assert d.rows.tolist() == [[1, 1], [1, 0], [1, 1]]

    def test_comment_and_inferred_k(self):
        d = parse_fimi(["# header", "2"])
        assert d.k == 3
        assert d.rows.tolist() == [[0, 0, 1]]

    def test_non_integer_token(self):
        with pytest.raises(FimiParseError, match="line 1"):
            parse_fimi(["0 x"])

    def test_error_reports_later_line(self):
        with pytest.raises(FimiParseError, match="line 3"):
            parse_fimi(["0", "# ok", "1 bad"])

    def test_item_beyond_declared_k(self):
        with pytest.raises(ItemRangeError):
            parse_fimi(["0 5"], k=3)

    def test_no_data_lines(self):
        with pytest.raises(EmptyDatasetError):
            parse_fimi(["# only", "   "])

    def test_load_from_file_object(self):
        d = load_transactions(io.StringIO("0 1\n2\n"))
        assert d.k == 3 and len(d) == 2

    def test_load_from_path_names_by_stem(self, tmp_path):
        path = tmp_path / "retail.dat"
        path.write_text("0 1\n1 2\n")
        d = load_transactions(path)
        assert d.name == "retail"
        assert len(d) == 2

    def test_duplicates_keep_multiplicity(self):
        d = parse_fimi(["0", "0", "0"])
        assert len(d) == 3


class TestFrequencies:
    def test_conjunction_by_hand(self):
        d = BinaryDataset.from_bitstrings(["11", "10", "11"])
        family = ItemsetFamily([(0,), (1,), (0, 1)])
        values = conjunction_values(d, family)
        assert values == pytest.approx([1.0, 2 / 3, 2 / 3])

    def test_conjunction_empty_support(self):
        d = BinaryDataset.from_bitstrings(["01", "00"])
        assert conjunction_values(d, ItemsetFamily([(0,)]))[0] == 0.0

    def test_conjunction_full_row(self):
        d = BinaryDataset.from_bitstrings(["111"])
        assert conjunction_values(d, ItemsetFamily([(0, 1, 2)]))[0] == 1.0

    def test_parity_by_hand(self):
        d = BinaryDataset.from_bitstrings(["11", "10", "11"])
        assert parity_values(d, ItemsetFamily([(0, 1)]))[0] == pytest.approx(
            1 / 3)

    def test_parity_zero_row(self):
        d = BinaryDataset.from_bitstrings(["00"])
        assert parity_values(d, ItemsetFamily([(0, 1)]))[0] == 0.0

    def test_singletons_agree_across_bases(self, rng):
        for _ in range(20):
            d = random_dataset(rng, k=6)
            family = ItemsetFamily.singletons(6)
            assert conjunction_values(d, family) == pytest.approx(
                parity_values(d, family))

    def test_pair_parity_identity(self, rng):
        # parity of {j, l} = theta_j + theta_l - 2 theta_jl
        for _ in range(20):
            d = random_dataset(rng, k=5)
            conj = conjunction_values(d, ItemsetFamily([(0,), (1,), (0, 1)]))
            parity = parity_values(d, ItemsetFamily([(0, 1)]))[0]
            expected = conj[0] + conj[1] - 2 * conj[2]
            assert abs(parity - expected) < 1e-12

    def test_family_out_of_range(self):
        d = BinaryDataset.from_bitstrings(["10"])
        with pytest.raises(ItemRangeError):
            conjunction_values(d, ItemsetFamily([(5,)]))


class TestEmpiricalDistribution:
    def test_counting(self):
        d = BinaryDataset.from_bitstrings(["11", "10", "11"])
        p = empirical_distribution(d)
        assert p == pytest.approx([0, 0, 1 / 3, 2 / 3])

    def test_point_mass(self):
        d = BinaryDataset.from_bitstrings(["101"] * 4)
        p = empirical_distribution(d)
        assert p[0b101] == 1.0 and p.sum() == 1.0

    def test_sums_to_one(self, rng):
        for _ in range(20):
            d = random_dataset(rng, k=7)
            p = empirical_distribution(d)
            assert (p >= 0).all()
            assert abs(p.sum() - 1.0) < 1e-12

    def test_capacity(self, rng):
        d = random_dataset(rng, k=17)
        with pytest.raises(CapacityError):
            empirical_distribution(d)


def test_rows_are_immutable():
    d = BinaryDataset.from_bitstrings(["10"])
    with pytest.raises(ValueError):
        d.rows[0, 0] = 0


def test_concat_is_multiset_union():
    d1 = BinaryDataset.from_bitstrings(["10", "11"])
    d2 = BinaryDataset.from_bitstrings(["10"])
    merged = d1.concat(d2)
    assert len(merged) == 3
    assert merged.rows.tolist()[2] == [1, 0]
