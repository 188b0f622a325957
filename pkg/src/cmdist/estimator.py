"""Scikit-learn compatible wrappers.

CMDistance is a pairwise-distance transformer: fit on a collection of
BinaryDatasets (resolving the feature family once), then transform any
collection into its distance matrix against the fitted collection. The
square fit_transform output plugs directly into sklearn clustering with
metric="precomputed". WindowBinarizer turns token sequences into windowed
binary datasets over a shared alphabet learned at fit time.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .dataset import BinaryDataset, conjunction_values, parity_values
from .distance import DistanceSpec, empirical_covariance, mahalanobis_squared
from .exceptions import DimensionMismatchError, ValidationError
from .analysis import resolve_family
from .sequences import EventSequence, build_alphabet, windows_to_dataset


def _check_datasets(X):
    X = list(X)
    if not X:
        raise ValidationError("need at least one dataset")
    if not all(isinstance(d, BinaryDataset) for d in X):
        raise ValidationError("inputs must be BinaryDataset instances")
    k = X[0].k
    if any(d.k != k for d in X):
        raise DimensionMismatchError("datasets do not share k")
    return X


class CMDistance(BaseEstimator, TransformerMixin):
    """Pairwise dataset-distance transformer.

    Parameters mirror DistanceSpec: kind selects the distance (cm, base,
    or fisher), features selects the itemset family (ind, cov, freq, or
    an explicit family).
    """

    def __init__(self, kind="cm", features="ind", family=None,
                 min_support=None, target_count=None, solver="strict",
                 ridge=0.0):
        self.kind = kind
        self.features = features
        self.family = family
        self.min_support = min_support
        self.target_count = target_count
        self.solver = solver
        self.ridge = ridge

    def _spec(self):
        return DistanceSpec(kind=self.kind, features=self.features,
                            family=self.family,
                            min_support=self.min_support,
                            target_count=self.target_count,
                            solver=self.solver, ridge=self.ridge)

    def fit(self, X, y=None):
        X = _check_datasets(X)
        spec = self._spec()
        family = resolve_family(X, spec)
        if spec.kind == "cm" and not family.antimonotonic:
            family = family.closure()
        self.family_ = family
        self.k_ = X[0].k
        self.datasets_ = X
        self._fit_stats = self._statistics(X)
        return self

    def _statistics(self, datasets):
        if self.kind == "cm":
            return [parity_values(d, self.family_) for d in datasets]
        return [conjunction_values(d, self.family_) for d in datasets]

    def transform(self, X):
        """Distance matrix of X (rows) against the fitted datasets
        (columns)."""
        if not hasattr(self, "family_"):
            raise ValidationError("CMDistance is not fitted")
        X = _check_datasets(X)
        if X[0].k != self.k_:
            raise DimensionMismatchError(
                f"fitted on k={self.k_}, got k={X[0].k}")
        rows = self._statistics(X)
        out = np.zeros((len(rows), len(self._fit_stats)))
        if self.kind in ("cm", "base"):
            for i, left in enumerate(rows):
                for j, right in enumerate(self._fit_stats):
                    out[i, j] = 2.0 * np.linalg.norm(left - right)
            return out
        for j, fitted in enumerate(self.datasets_):
            cov = empirical_covariance(fitted, self.family_)
            for i, left in enumerate(rows):
                squared = 0.5 * mahalanobis_squared(
                    left - self._fit_stats[j], cov, self.solver, self.ridge)
                out[i, j] = np.sqrt(max(squared, 0.0))
        return out


class WindowBinarizer(BaseEstimator, TransformerMixin):
    """Turn token sequences into windowed binary datasets.

    The alphabet is the sorted union of tokens seen at fit time, so every
    transformed dataset shares attribute positions.
    """

    def __init__(self, window=6):
        self.window = window

    def fit(self, X, y=None):
        self.alphabet_ = build_alphabet([list(s) for s in X])
        return self

    def transform(self, X):
        if not hasattr(self, "alphabet_"):
            raise ValidationError("WindowBinarizer is not fitted")
        out = []
        for i, tokens in enumerate(X):
            sequence = EventSequence(tuple(tokens), self.alphabet_)
            out.append(windows_to_dataset(sequence, self.window,
                                          name=f"seq{i}"))
        return out
