import numpy as np
import pytest

from cmdist import (
    EventSequence,
    ItemsetFamily,
    build_alphabet,
    make_sequences,
    sequence_cm_distance,
    windows_to_dataset,
)
from cmdist.dataset import conjunction_values
from cmdist.sequences import tokenize
from cmdist.exceptions import ValidationError


def seq(text):
    (s,) = make_sequences([text.split()])
    return s


class TestAlphabet:
    def test_sorted_union(self):
        assert build_alphabet([["b", "a"], ["c", "a"]]) == ("a", "b", "c")

    def test_single_stream(self):
        assert build_alphabet([["a", "a", "a"]]) == ("a",)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            build_alphabet([[]])

    def test_symbol_outside_alphabet_rejected(self):
        with pytest.raises(ValidationError):
            EventSequence(("a", "z"), ("a", "b"))

    def test_tokenize_skips_comments(self):
        assert tokenize("# note\na b\n\nc") == ["a", "b", "c"]


class TestWindows:
    def test_hand_example(self):
        d = windows_to_dataset(seq("a b c a"), 2)
        assert d.rows.tolist() == [[1, 1, 0], [0, 1, 1], [1, 0, 1]]

    def test_window_one(self):
        d = windows_to_dataset(seq("a b a"), 1)
        assert d.rows.tolist() == [[1, 0], [0, 1], [1, 0]]
        assert all(row.sum() == 1 for row in d.rows)

    def test_whole_sequence_window(self):
        s = seq("a b a b c")
        d = windows_to_dataset(s, len(s))
        assert len(d) == 1
        assert d.rows[0].tolist() == [1, 1, 1]

    def test_row_count(self, rng):
        for _ in range(20):
            length = int(rng.integers(2, 50))
            k = int(rng.integers(1, length + 1))
            symbols = rng.choice(list("abcd"), size=length).tolist()
            d = windows_to_dataset(seq(" ".join(symbols)), k)
            assert len(d) == length - k + 1
            assert (d.rows.sum(axis=1) <= min(k, d.k)).all()

    def test_window_too_long(self):
        with pytest.raises(ValidationError):
            windows_to_dataset(seq("a b"), 3)

    def test_window_too_short(self):
        with pytest.raises(ValidationError):
            windows_to_dataset(seq("a b"), 0)

    def test_parallel_episode_frequency(self):
        # episode {a, b} within windows of length 2 of "a b c a b"
        d = windows_to_dataset(seq("a b c a b"), 2)
        support = conjunction_values(d, ItemsetFamily([(0, 1)]))[0]
        # windows: ab, bc, ca, ab -> {a,b} satisfied in 2 of 4
        assert support == pytest.approx(0.5)


class TestSequenceDistance:
    def test_self_distance_zero(self):
        s = seq("a b c a b c a")
        family = ItemsetFamily.singletons(3)
        assert sequence_cm_distance(s, s, 3, family) == 0.0

    def test_periodic_disjoint_alphabets(self):
        s1, s2 = make_sequences([list("abababab"), list("cdcdcdcd")])
        family = ItemsetFamily.singletons(4)
        d = sequence_cm_distance(s1, s2, 2, family)
        # every window marks exactly its own two symbols, so all four
        # singleton frequencies differ by 1
        assert d == pytest.approx(2.0 * np.sqrt(4.0))

    def test_same_process_closer_than_skewed(self, rng):
        symbols = list("abcd")
        uniform1 = rng.choice(symbols, size=4000).tolist()
        uniform2 = rng.choice(symbols, size=4000).tolist()
        skewed = rng.choice(symbols, size=4000,
                            p=[0.85, 0.05, 0.05, 0.05]).tolist()
        s1, s2, s3 = make_sequences([uniform1, uniform2, skewed])
        family = ItemsetFamily.singletons(4)
        same = sequence_cm_distance(s1, s2, 6, family)
        different = sequence_cm_distance(s1, s3, 6, family)
        assert same < different

    def test_alphabet_mismatch_rejected(self):
        s1 = EventSequence(("a",), ("a",))
        s2 = EventSequence(("b",), ("b",))
        with pytest.raises(ValidationError):
            sequence_cm_distance(s1, s2, 1, ItemsetFamily.singletons(1))
