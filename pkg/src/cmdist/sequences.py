"""Event sequences and their sliding-window binarization.

A sequence over a finite alphabet becomes a binary dataset with one row
per length-k window (stride 1, full windows only); bit j is set when
symbol j occurs anywhere in the window. Parallel-episode frequencies of
the sequence are then ordinary itemset frequencies of the windowed
dataset, so the CM distance applies unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import BinaryDataset
from .distance import cm_distance_fast
from .exceptions import ValidationError
from .features import ItemsetFamily


@dataclass(frozen=True)
class EventSequence:
    symbols: tuple[str, ...]
    alphabet: tuple[str, ...]

    def __post_init__(self):
        known = set(self.alphabet)
        missing = [s for s in self.symbols if s not in known]
        if missing:
            raise ValidationError(
                f"symbols not in alphabet: {sorted(set(missing))}")

    def __len__(self):
        return len(self.symbols)


def tokenize(text: str) -> list[str]:
    """Whitespace-separated tokens; '#' lines are comments."""
    tokens = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tokens.extend(line.split())
    return tokens


def build_alphabet(token_streams) -> tuple[str, ...]:
    """Shared alphabet: sorted union of distinct tokens across streams,
    so bit positions align between compared sequences."""
    symbols = set()
    for stream in token_streams:
        symbols.update(stream)
    if not symbols:
        raise ValidationError("no tokens to build an alphabet from")
    return tuple(sorted(symbols))


def make_sequences(token_streams) -> list[EventSequence]:
    """Wrap raw token streams as EventSequences over a shared alphabet."""
    streams = [list(s) for s in token_streams]
    alphabet = build_alphabet(streams)
    return [EventSequence(tuple(s), alphabet) for s in streams]


def windows_to_dataset(s: EventSequence, k: int,
                       name="windows") -> BinaryDataset:
    """One row per contiguous window of length k (|s| - k + 1 rows)."""
    if k < 1:
        raise ValidationError("window length must be at least 1")
    if k > len(s):
        raise ValidationError(
            f"window length {k} exceeds sequence length {len(s)}")
    index = {symbol: j for j, symbol in enumerate(s.alphabet)}
    encoded = np.array([index[symbol] for symbol in s.symbols])
    rows = np.zeros((len(s) - k + 1, len(s.alphabet)), dtype=np.uint8)
    for start in range(rows.shape[0]):
        rows[start, encoded[start:start + k]] = 1
    return BinaryDataset(rows, name=name)


def sequence_cm_distance(s1: EventSequence, s2: EventSequence, k: int,
                         family: ItemsetFamily) -> float:
    """CM distance between two sequences via their windowed datasets."""
    if s1.alphabet != s2.alphabet:
        raise ValidationError(
            "sequences must share an alphabet; use make_sequences")
    d1 = windows_to_dataset(s1, k, name="s1")
    d2 = windows_to_dataset(s2, k, name="s2")
    return cm_distance_fast(d1, d2, family)
