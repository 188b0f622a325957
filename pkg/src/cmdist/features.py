"""Itemset families, the conjunction/parity basis change, and closed-form
covariance matrices over the uniform distribution on binary vectors.

An itemset is a nonempty tuple of strictly increasing attribute indices.
An :class:`ItemsetFamily` fixes a coordinate order: every frequency vector
and covariance matrix produced for a family inherits that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import chain, combinations

import numpy as np

from .exceptions import BasisError, ValidationError

# Subset enumeration in the basis change is 2^|B| terms per itemset; above
# this size the direct parity scan over the raw data is always cheaper.
MAX_TRANSFORM_ITEMSET_SIZE = 20


def as_itemset(items) -> tuple[int, ...]:
    """Normalize and validate an itemset given as any iterable of indices."""
    itemset = tuple(int(i) for i in items)
    if not itemset:
        raise ValidationError("itemset must be nonempty")
    if any(i < 0 for i in itemset):
        raise ValidationError(f"negative attribute index in itemset {itemset}")
    if any(a >= b for a, b in zip(itemset, itemset[1:])):
        raise ValidationError(
            f"itemset indices must be strictly increasing, got {itemset}")
    return itemset


def _nonempty_subsets(itemset):
    return chain.from_iterable(
        combinations(itemset, r) for r in range(1, len(itemset) + 1))


class ItemsetFamily:
    """Ordered, duplicate-free list of itemsets."""

    def __init__(self, itemsets):
        members = tuple(as_itemset(b) for b in itemsets)
        if len(set(members)) != len(members):
            raise ValidationError("duplicate itemsets in family")
        self.itemsets = members
        self._member_set = frozenset(members)

    def __len__(self):
        return len(self.itemsets)

    def __iter__(self):
        return iter(self.itemsets)

    def __getitem__(self, i):
        return self.itemsets[i]

    def __contains__(self, itemset):
        return tuple(itemset) in self._member_set

    def __eq__(self, other):
        return (isinstance(other, ItemsetFamily)
                and self.itemsets == other.itemsets)

    def __hash__(self):
        return hash(self.itemsets)

    def __repr__(self):
        return f"ItemsetFamily({list(self.itemsets)!r})"

    @property
    def max_item(self) -> int:
        return max(max(b) for b in self.itemsets)

    @cached_property
    def antimonotonic(self) -> bool:
        """True iff every nonempty proper subset of each member is a member."""
        return all(
            subset in self._member_set
            for b in self.itemsets
            for subset in _nonempty_subsets(b)
            if subset != b)

    def closure(self) -> "ItemsetFamily":
        """Smallest downward-closed superset of this family.

        Original members keep their positions; missing subsets are appended
        in (size, lexicographic) order.
        """
        if self.antimonotonic:
            return self
        missing = set()
        for b in self.itemsets:
            for subset in _nonempty_subsets(b):
                if subset not in self._member_set:
                    missing.add(subset)
        added = sorted(missing, key=lambda s: (len(s), s))
        return ItemsetFamily(self.itemsets + tuple(added))

    @classmethod
    def singletons(cls, k: int) -> "ItemsetFamily":
        """The family of all one-item itemsets over k attributes."""
        return cls((i,) for i in range(k))

    @classmethod
    def pairs(cls, k: int) -> "ItemsetFamily":
        """All itemsets of size at most two: singletons then pairs."""
        return cls(chain(((i,) for i in range(k)),
                         combinations(range(k), 2)))

    @classmethod
    def all_itemsets(cls, k: int) -> "ItemsetFamily":
        """All 2^k - 1 nonempty itemsets, in (size, lexicographic) order."""
        return cls(chain.from_iterable(
            combinations(range(k), r) for r in range(1, k + 1)))

    def to_text(self) -> str:
        """Serialize as one itemset per line, item IDs space-separated."""
        return "".join(" ".join(map(str, b)) + "\n" for b in self.itemsets)

    @classmethod
    def from_text(cls, text: str) -> "ItemsetFamily":
        itemsets = []
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                itemsets.append([int(tok) for tok in line.split()])
            except ValueError as exc:
                raise ValidationError(
                    f"family file line {number}: {exc}") from exc
        return cls(itemsets)


@dataclass(frozen=True)
class FrequencyVector:
    """Per-feature means over a data set, tagged by basis and family."""

    values: np.ndarray
    basis: str  # "conjunction" or "parity"
    family: ItemsetFamily

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.family),):
            raise ValidationError(
                f"frequency vector length {values.shape} does not match "
                f"family size {len(self.family)}")
        if self.basis not in ("conjunction", "parity"):
            raise ValidationError(f"unknown basis {self.basis!r}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


def conjunction_to_parity(theta, family: ItemsetFamily) -> np.ndarray:
    """Map conjunction frequencies to parity frequencies for an
    antimonotonic family.

    The parity frequency of B is the inclusion-exclusion sum
    sum_{nonempty C subset of B} (-2)^(|C|-1) * theta_C, which for a pair
    {j, l} reduces to theta_j + theta_l - 2 * theta_jl.
    """
    if not family.antimonotonic:
        raise BasisError(
            "family is not antimonotonic; apply closure() before the "
            "conjunction/parity transform")
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (len(family),):
        raise ValidationError("theta length does not match family size")
    index = {b: i for i, b in enumerate(family)}
    out = np.empty(len(family))
    for i, b in enumerate(family):
        if len(b) > MAX_TRANSFORM_ITEMSET_SIZE:
            raise ValidationError(
                f"itemset of size {len(b)} exceeds the transform cap "
                f"({MAX_TRANSFORM_ITEMSET_SIZE}); compute parity "
                "frequencies from the raw data instead")
        acc = 0.0
        for c in _nonempty_subsets(b):
            acc += (-2.0) ** (len(c) - 1) * theta[index[c]]
        out[i] = acc
    return out


def parity_to_conjunction(tau, family: ItemsetFamily) -> np.ndarray:
    """Inverse of :func:`conjunction_to_parity`.

    Solves the triangular system in subset (size) order: the coefficient of
    theta_B in the parity frequency of B is (-2)^(|B|-1).
    """
    if not family.antimonotonic:
        raise BasisError(
            "family is not antimonotonic; apply closure() before the "
            "conjunction/parity transform")
    tau = np.asarray(tau, dtype=float)
    if tau.shape != (len(family),):
        raise ValidationError("tau length does not match family size")
    index = {b: i for i, b in enumerate(family)}
    theta = np.empty(len(family))
    for b in sorted(family, key=len):
        i = index[b]
        acc = tau[i]
        for c in _nonempty_subsets(b):
            if c != b:
                acc -= (-2.0) ** (len(c) - 1) * theta[index[c]]
        theta[i] = acc / (-2.0) ** (len(b) - 1)
    return theta


def uniform_covariance_conjunction(family: ItemsetFamily) -> np.ndarray:
    """Covariance matrix of the conjunction features under the uniform
    distribution on all binary vectors.

    Entry (i, j) is 2^(-|Bi u Bj|) - 2^(-|Bi|-|Bj|); no enumeration of the
    sample space is needed.
    """
    sizes = np.array([len(b) for b in family], dtype=float)
    n = len(family)
    union = np.empty((n, n))
    sets = [frozenset(b) for b in family]
    for i in range(n):
        union[i, i] = sizes[i]
        for j in range(i + 1, n):
            union[i, j] = union[j, i] = len(sets[i] | sets[j])
    return 2.0 ** (-union) - 2.0 ** (-(sizes[:, None] + sizes[None, :]))


def parity_covariance(family: ItemsetFamily) -> np.ndarray:
    """Covariance of the 0/1 parity features under the uniform
    distribution: exactly 0.25 * I for any family of distinct itemsets.

    Each parity is a balanced indicator (mean 1/2, second moment 1/2,
    variance 1/4) and distinct parities are pairwise uncorrelated
    (E[T_A T_B] = 1/4 = E[T_A] E[T_B]).
    """
    return 0.25 * np.eye(len(family))
