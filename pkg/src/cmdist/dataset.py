"""Binary transaction data sets: FIMI ingestion and frequency statistics.

Rows are stored as a dense 0/1 matrix and never modified after load;
frequency counting streams over rows and never enumerates the 2^k sample
space. Counts stay exact integers until the final division.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    CapacityError,
    DimensionMismatchError,
    EmptyDatasetError,
    FimiParseError,
    ItemRangeError,
    ValidationError,
)
from .features import FrequencyVector, ItemsetFamily

# Largest attribute count for which the empirical distribution over all
# 2^k outcomes may be materialized.
DEFAULT_EMPIRICAL_CAP = 16


@dataclass(frozen=True)
class BinaryDataset:
    """Multiset of k-dimensional bit vectors. Immutable after construction."""

    rows: np.ndarray
    name: str = "dataset"

    def __post_init__(self):
        rows = np.ascontiguousarray(self.rows, dtype=np.uint8)
        if rows.ndim != 2:
            raise ValidationError("rows must be a 2-d array of bits")
        if rows.shape[1] < 1:
            raise ValidationError("attribute count k must be at least 1")
        if rows.shape[0] < 1:
            raise EmptyDatasetError(f"dataset {self.name!r} has no rows")
        if rows.max(initial=0) > 1:
            raise ValidationError("rows must contain only 0/1 values")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def k(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return self.rows.shape[0]

    @classmethod
    def from_bitstrings(cls, strings, name="dataset") -> "BinaryDataset":
        """Build from strings like "101"; convenient for tests and docs."""
        rows = [[int(c) for c in s] for s in strings]
        return cls(np.array(rows, dtype=np.uint8), name=name)

    def concat(self, other: "BinaryDataset", name=None) -> "BinaryDataset":
        """Multiset union: rows of self followed by rows of other."""
        if self.k != other.k:
            raise DimensionMismatchError(
                f"cannot concatenate k={self.k} with k={other.k}")
        return BinaryDataset(
            np.vstack([self.rows, other.rows]),
            name=name or f"{self.name}+{other.name}")


def parse_fimi(lines, k: int | None = None, name="dataset") -> BinaryDataset:
    """Parse FIMI text: one transaction per line of whitespace-separated
    item IDs; '#' lines and blank lines are skipped.

    k is inferred as 1 + max item ID unless supplied; with a supplied k any
    item ID >= k is rejected.
    """
    transactions = []
    max_item = -1
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        items = []
        for token in line.split():
            try:
                item = int(token)
            except ValueError:
                raise FimiParseError(f"non-integer item {token!r}", number)
            if item < 0:
                raise FimiParseError(f"negative item {item}", number)
            if k is not None and item >= k:
                raise ItemRangeError(
                    f"line {number}: item {item} outside declared range "
                    f"[0, {k})")
            max_item = max(max_item, item)
            items.append(item)
        transactions.append(items)
    if not transactions:
        raise EmptyDatasetError(f"no transactions in {name!r}")
    width = k if k is not None else max(max_item + 1, 1)
    rows = np.zeros((len(transactions), width), dtype=np.uint8)
    for i, items in enumerate(transactions):
        rows[i, items] = 1
    return BinaryDataset(rows, name=name)


def load_transactions(source, k: int | None = None,
                      name: str | None = None) -> BinaryDataset:
    """Load a FIMI file from a path, a file object, or a text blob.

    The dataset name defaults to the file stem when a path is given.
    """
    if hasattr(source, "read"):
        return parse_fimi(source, k=k, name=name or "dataset")
    source = os.fspath(source)
    if "\n" in source:
        return parse_fimi(source.splitlines(), k=k, name=name or "dataset")
    stem = os.path.splitext(os.path.basename(source))[0]
    with open(source, "r", encoding="utf-8") as handle:
        return parse_fimi(handle, k=k, name=name or stem)


def _check_family(d: BinaryDataset, family: ItemsetFamily):
    if family.max_item >= d.k:
        raise ItemRangeError(
            f"family references attribute {family.max_item} but dataset "
            f"{d.name!r} has k={d.k}")


def conjunction_values(d: BinaryDataset, family: ItemsetFamily) -> np.ndarray:
    """Raw conjunction frequencies as an array (itemset supports)."""
    _check_family(d, family)
    n = len(d)
    counts = np.array(
        [int(d.rows[:, b].all(axis=1).sum()) for b in family], dtype=float)
    return counts / n


def parity_values(d: BinaryDataset, family: ItemsetFamily) -> np.ndarray:
    """Raw parity frequencies: fraction of rows with odd popcount on B."""
    _check_family(d, family)
    n = len(d)
    counts = np.array(
        [int((d.rows[:, b].sum(axis=1) & 1).sum()) for b in family],
        dtype=float)
    return counts / n


def conjunction_frequency(d: BinaryDataset,
                          family: ItemsetFamily) -> FrequencyVector:
    return FrequencyVector(conjunction_values(d, family), "conjunction",
                           family)


def parity_frequency(d: BinaryDataset,
                     family: ItemsetFamily) -> FrequencyVector:
    return FrequencyVector(parity_values(d, family), "parity", family)


def omega_indices(d: BinaryDataset) -> np.ndarray:
    """Map each row to its index in the enumeration of {0,1}^k, with bit 0
    as the most significant position."""
    weights = 1 << np.arange(d.k - 1, -1, -1, dtype=np.int64)
    return d.rows.astype(np.int64) @ weights


def empirical_distribution(d: BinaryDataset,
                           cap: int = DEFAULT_EMPIRICAL_CAP) -> np.ndarray:
    """Vector of length 2^k with the fraction of rows equal to each
    outcome; rejects k beyond the enumeration cap."""
    if d.k > cap:
        raise CapacityError(
            f"k={d.k} exceeds the enumeration cap of {cap} bits")
    counts = np.bincount(omega_indices(d), minlength=1 << d.k)
    return counts / len(d)
