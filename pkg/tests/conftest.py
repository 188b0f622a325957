import numpy as np
import pytest

from cmdist import BinaryDataset, ItemsetFamily


def random_dataset(rng, k, n_rows=None, name="d"):
    if n_rows is None:
        n_rows = int(rng.integers(1, 40))
    probabilities = rng.uniform(0.1, 0.9, size=k)
    rows = (rng.uniform(size=(n_rows, k)) < probabilities).astype(np.uint8)
    return BinaryDataset(rows, name=name)


def random_antimonotonic_family(rng, k, generators=2, max_size=3):
    itemsets = []
    for _ in range(generators):
        size = int(rng.integers(1, min(max_size, k) + 1))
        itemsets.append(tuple(sorted(
            rng.choice(k, size=size, replace=False).tolist())))
    return ItemsetFamily(dict.fromkeys(itemsets)).closure()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
