"""Apriori frequent-itemset mining and feature selection.

Feature selection keeps every singleton and adds any itemset that is
sigma-frequent in at least one of the input datasets; when a target family
size is given, the threshold is found from the candidate support multiset
so that the family is the largest one not exceeding the target (all
itemsets tied at the boundary support are kept, so equal supports may push
the family past the target).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dataset import BinaryDataset
from .exceptions import DimensionMismatchError, ValidationError
from .features import ItemsetFamily


@dataclass(frozen=True)
class MiningConfig:
    min_support: float = 0.5
    max_size: int | None = None
    target_count: int | None = None

    def __post_init__(self):
        if not 0.0 < self.min_support <= 1.0:
            raise ValidationError("min_support must lie in (0, 1]")
        if self.max_size is not None and self.max_size < 1:
            raise ValidationError("max_size must be at least 1")
        if self.target_count is not None and self.target_count < 1:
            raise ValidationError("target_count must be positive")


def apriori(d: BinaryDataset, sigma: float,
            max_size: int | None = None) -> list[tuple[tuple[int, ...], float]]:
    """All itemsets with support >= sigma, with their exact supports.

    Level-wise generation: candidates at level l are prefix-joins of
    frequent (l-1)-itemsets, pruned by the subset check; support is
    antimonotone, so the output is downward closed by construction.
    Results are ordered by (size, lexicographic).
    """
    if not 0.0 < sigma <= 1.0:
        raise ValidationError("sigma must lie in (0, 1]")
    n = len(d)
    rows = d.rows
    result = []
    current = []
    for j in range(d.k):
        support = int(rows[:, j].sum()) / n
        if support >= sigma:
            current.append(((j,), support))
    size = 2
    while current and (max_size is None or size <= max_size):
        result.extend(current)
        frequent = {itemset for itemset, _ in current}
        candidates = _join_level(sorted(frequent), size)
        current = []
        for candidate in candidates:
            if any(candidate[:i] + candidate[i + 1:] not in frequent
                   for i in range(size)):
                continue
            support = int(rows[:, candidate].all(axis=1).sum()) / n
            if support >= sigma:
                current.append((candidate, support))
        size += 1
    result.extend(current)
    result.sort(key=lambda pair: (len(pair[0]), pair[0]))
    return result


def _join_level(frequent_sorted, size):
    # Classic prefix join: two (size-1)-itemsets sharing their first
    # size-2 items produce one size-itemset candidate.
    candidates = []
    for a, b in combinations(frequent_sorted, 2):
        if a[:-1] == b[:-1]:
            candidates.append(a + (b[-1],) if a[-1] < b[-1]
                              else b + (a[-1],))
    return candidates


def _candidate_supports(datasets, sigma, max_size):
    """Max support over the datasets for every itemset sigma-frequent in
    at least one of them."""
    supports: dict[tuple[int, ...], float] = {}
    for d in datasets:
        for itemset, support in apriori(d, sigma, max_size):
            if support > supports.get(itemset, -1.0):
                supports[itemset] = support
    return supports


def select_features(datasets, cfg: MiningConfig) -> ItemsetFamily:
    """Singletons plus the union of sigma-frequent itemsets of the inputs.

    With cfg.target_count set, sigma is tuned on the candidate supports so
    the family is the largest of size <= target_count (boundary ties all
    included). The result is always antimonotonic.
    """
    datasets = list(datasets)
    if not datasets:
        raise ValidationError("select_features needs at least one dataset")
    k = datasets[0].k
    if any(d.k != k for d in datasets):
        raise DimensionMismatchError("datasets do not share k")
    if cfg.target_count is not None and cfg.target_count < k:
        raise ValidationError(
            f"target_count {cfg.target_count} is below the {k} mandatory "
            "singletons")

    if cfg.target_count is None:
        supports = _candidate_supports(datasets, cfg.min_support,
                                       cfg.max_size)
        selected = set(supports)
    else:
        selected = _tune_to_target(datasets, cfg, k)

    singletons = [(j,) for j in range(k)]
    extras = sorted((b for b in selected if len(b) > 1),
                    key=lambda b: (len(b), b))
    return ItemsetFamily(singletons + extras)


def _tune_to_target(datasets, cfg, k):
    budget = cfg.target_count - k  # non-singleton slots
    if budget <= 0:
        return set()
    # Lower sigma geometrically until enough candidates exist (or sigma
    # bottoms out at one row's worth of support).
    floor = 1.0 / max(len(d) for d in datasets)
    sigma = cfg.min_support
    while True:
        supports = _candidate_supports(datasets, sigma, cfg.max_size)
        extras = [(support, b) for b, support in supports.items()
                  if len(b) > 1]
        if len(extras) >= budget or sigma <= floor:
            break
        sigma = max(sigma / 2.0, floor)
    if len(extras) <= budget:
        return {b for _, b in extras}
    extras.sort(key=lambda pair: (-pair[0], len(pair[1]), pair[1]))
    boundary = extras[budget - 1][0]
    return {b for support, b in extras if support >= boundary}
