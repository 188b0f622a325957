"""Brute-force reference implementations over an explicitly enumerated
sample space.

Everything here exists to verify the fast paths: the geometric distance
between constraint spaces, minimum-norm points via Lagrange multipliers on
the feature Gram matrix, enumeration-based covariance, and the identity
relating the all-itemsets family to empirical distributions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .dataset import BinaryDataset, empirical_distribution, omega_indices
from .exceptions import (
    CapacityError,
    DimensionMismatchError,
    InconsistentConstraintsError,
    ValidationError,
)
from .features import ItemsetFamily

DEFAULT_OMEGA_CAP = 1 << 16
CONSISTENCY_TOL = 1e-8
PINV_RCOND = 1e-10


def omega_cap() -> int:
    """Enumeration cap on |Omega|, overridable via CMDIST_ORACLE_CAP."""
    override = os.environ.get("CMDIST_ORACLE_CAP")
    return int(override) if override else DEFAULT_OMEGA_CAP


@dataclass(frozen=True)
class TabulatedFeature:
    """Explicit feature table: row omega holds the feature vector S(omega)."""

    table: np.ndarray

    def __post_init__(self):
        table = np.atleast_2d(np.asarray(self.table, dtype=float))
        if table.shape[0] < 2:
            raise ValidationError("sample space must have at least 2 points")
        if table.shape[0] > omega_cap():
            raise CapacityError(
                f"|Omega|={table.shape[0]} exceeds the oracle cap "
                f"{omega_cap()}")
        if not np.isfinite(table).all():
            raise ValidationError("feature table contains NaN/Inf")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @property
    def omega_size(self) -> int:
        return self.table.shape[0]

    @property
    def n(self) -> int:
        return self.table.shape[1]

    @classmethod
    def conjunctions(cls, family: ItemsetFamily, k: int) -> "TabulatedFeature":
        """Tabulate the conjunction features of a family over {0,1}^k."""
        return cls(_binary_table(family, k, parity=False))

    @classmethod
    def parities(cls, family: ItemsetFamily, k: int) -> "TabulatedFeature":
        """Tabulate the parity features of a family over {0,1}^k."""
        return cls(_binary_table(family, k, parity=True))


def enumerate_binary_omega(k: int) -> np.ndarray:
    """All binary vectors of length k, indexed with bit 0 most significant
    (matching omega_indices)."""
    if (1 << k) > omega_cap():
        raise CapacityError(f"2^{k} exceeds the oracle cap {omega_cap()}")
    omega = np.arange(1 << k, dtype=np.int64)
    return ((omega[:, None] >> np.arange(k - 1, -1, -1)) & 1).astype(np.uint8)


def _binary_table(family, k, parity):
    bits = enumerate_binary_omega(k)
    columns = []
    for b in family:
        sub = bits[:, list(b)]
        columns.append((sub.sum(axis=1) & 1) if parity
                       else sub.all(axis=1).astype(np.int64))
    return np.column_stack(columns).astype(float)


@dataclass(frozen=True)
class ConstraintSystem:
    """Affine constraints: vectors summing to one whose feature moment
    equals theta. Consistency is checked by min_norm_point."""

    feature: TabulatedFeature
    theta: np.ndarray

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float).reshape(-1)
        if theta.shape[0] != self.feature.n:
            raise ValidationError(
                f"theta has length {theta.shape[0]}, feature has "
                f"{self.feature.n} components")
        if not np.isfinite(theta).all():
            raise ValidationError("theta contains NaN/Inf")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)


def _pinv(matrix, rcond=PINV_RCOND):
    # Symmetric pseudoinverse; small eigenvalues are treated as exact zeros
    # so redundant features do not break verification.
    eigenvalues, vectors = np.linalg.eigh(matrix)
    cutoff = rcond * max(eigenvalues.max(initial=0.0), 0.0)
    inverse = np.zeros_like(eigenvalues)
    keep = eigenvalues > cutoff
    inverse[keep] = 1.0 / eigenvalues[keep]
    return (vectors * inverse) @ vectors.T


def min_norm_point(cs: ConstraintSystem) -> np.ndarray:
    """Shortest vector u with sum(u) = 1 and feature moment theta.

    Augments the table with the constant feature, solves the normal
    equations of the Gram matrix for the Lagrange multipliers, and reads
    u off as the multiplier combination of the feature columns. The
    result may have negative entries; it is a constraint-space point, not
    a distribution.
    """
    augmented = np.column_stack(
        [np.ones(cs.feature.omega_size), cs.feature.table])
    target = np.concatenate([[1.0], cs.theta])
    gram = augmented.T @ augmented
    multipliers = _pinv(gram) @ target
    u = augmented @ multipliers
    residual = np.linalg.norm(augmented.T @ u - target)
    if residual > CONSISTENCY_TOL * (1.0 + np.linalg.norm(target)):
        raise InconsistentConstraintsError(
            f"constraint residual {residual:.3e} exceeds tolerance "
            f"{CONSISTENCY_TOL:.0e}; theta is not attainable")
    return u


def _feature_frequency(d, feature: TabulatedFeature) -> np.ndarray:
    """Average feature vector over a dataset given as omega indices or as
    a BinaryDataset whose rows index the enumerated sample space."""
    if isinstance(d, BinaryDataset):
        indices = omega_indices(d)
    else:
        indices = np.asarray(d, dtype=np.int64).reshape(-1)
    if indices.size == 0:
        raise ValidationError("dataset has no points")
    if indices.min() < 0 or indices.max() >= feature.omega_size:
        raise ValidationError("dataset point outside the enumerated space")
    return feature.table[indices].mean(axis=0)


def cm_distance_geometric_from_frequencies(
        feature: TabulatedFeature, theta1, theta2) -> float:
    """Geometric distance sqrt(|Omega|) * ||u1 - u2|| between the
    minimum-norm points of the two constraint spaces."""
    u1 = min_norm_point(ConstraintSystem(feature, theta1))
    u2 = min_norm_point(ConstraintSystem(feature, theta2))
    return float(np.sqrt(feature.omega_size) * np.linalg.norm(u1 - u2))


def cm_distance_geometric(d1, d2, feature: TabulatedFeature) -> float:
    """Geometric distance between two datasets (omega-index arrays or
    BinaryDatasets over the enumerated space)."""
    theta1 = _feature_frequency(d1, feature)
    theta2 = _feature_frequency(d2, feature)
    return cm_distance_geometric_from_frequencies(feature, theta1, theta2)


def enumeration_covariance(feature: TabulatedFeature) -> np.ndarray:
    """Covariance of the tabulated features under the uniform distribution
    on the enumerated sample space."""
    table = feature.table
    mean = table.mean(axis=0)
    second = table.T @ table / feature.omega_size
    return second - np.outer(mean, mean)


def full_itemset_distance(d1: BinaryDataset, d2: BinaryDataset,
                          cap: int = 16) -> float:
    """sqrt(2^k) times the L2 distance between the empirical
    distributions; the distance induced by the family of all itemsets."""
    if d1.k != d2.k:
        raise DimensionMismatchError(
            f"k mismatch: {d1.k} vs {d2.k}")
    p1 = empirical_distribution(d1, cap=cap)
    p2 = empirical_distribution(d2, cap=cap)
    return float(np.sqrt(1 << d1.k) * np.linalg.norm(p1 - p2))
