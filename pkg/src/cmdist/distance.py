"""Data-set distances.

The CM distance comes in two equivalent routes: the general Mahalanobis
form (difference of frequency vectors through the inverse uniform
covariance) and the linear-time fast path 2 * ||delta parity
frequencies|| valid for antimonotonic itemset families (the parity
covariance is 0.25 * I, so the Mahalanobis form collapses to a scaled
L2 norm). The base distance is the same scaled L2 form on raw itemset
frequencies, and the Fisher distance approximates a KL divergence with a
covariance estimated from the second dataset (asymmetric, not a metric).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import BinaryDataset, conjunction_values, parity_values
from .exceptions import (
    BasisError,
    DimensionMismatchError,
    SingularCovarianceError,
    ValidationError,
)
from .features import FrequencyVector, ItemsetFamily

# Relative eigenvalue cutoff in pseudoinverse mode.
PINV_RCOND = 1e-10
# Negative squared distances above this magnitude are logic bugs, below it
# they are roundoff and clamp to zero.
RADICAND_TOL = 1e-12


@dataclass(frozen=True)
class DistanceSpec:
    """Configuration of a distance computation for drivers and the CLI."""

    kind: str = "cm"               # cm | base | fisher
    features: str = "ind"          # ind | cov | freq | family
    family: ItemsetFamily | None = None
    min_support: float | None = None
    target_count: int | None = None
    solver: str = "strict"         # strict | pinv
    ridge: float = 0.0

    def __post_init__(self):
        if self.kind not in ("cm", "base", "fisher"):
            raise ValidationError(f"unknown distance kind {self.kind!r}")
        if self.features not in ("ind", "cov", "freq", "family"):
            raise ValidationError(f"unknown feature set {self.features!r}")
        if self.solver not in ("strict", "pinv"):
            raise ValidationError(f"unknown solver {self.solver!r}")
        if self.ridge < 0:
            raise ValidationError("ridge must be nonnegative")
        if self.features == "family" and self.family is None:
            raise ValidationError("feature set 'family' requires a family")
        if self.features == "freq" and (self.min_support is None
                                        and self.target_count is None):
            raise ValidationError(
                "feature set 'freq' requires min_support or target_count")


def _as_values(theta):
    if isinstance(theta, FrequencyVector):
        return theta.values
    return np.asarray(theta, dtype=float).reshape(-1)


def _finalize(squared: float) -> float:
    if squared < -RADICAND_TOL:
        raise ValidationError(
            f"squared distance {squared:.3e} is negative beyond roundoff")
    return float(np.sqrt(max(squared, 0.0)))


def mahalanobis_squared(diff, cov, solver="strict", ridge=0.0) -> float:
    """diff^T cov^-1 diff with the configured inversion strategy.

    strict: Cholesky factorization, raising on numerically non-PD input.
    pinv: eigendecomposition with eigenvalues below a relative cutoff
    treated as exact zeros (the geometric semantics for redundant
    features).
    """
    diff = np.asarray(diff, dtype=float).reshape(-1)
    cov = np.asarray(cov, dtype=float)
    if not np.isfinite(diff).all() or not np.isfinite(cov).all():
        raise ValidationError("NaN/Inf in distance inputs")
    if cov.shape != (diff.size, diff.size):
        raise DimensionMismatchError(
            f"covariance shape {cov.shape} does not match vector length "
            f"{diff.size}")
    cov = 0.5 * (cov + cov.T)
    if ridge:
        cov = cov + ridge * np.eye(diff.size)
    if solver == "strict":
        try:
            factor = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            smallest = float(np.linalg.eigvalsh(cov)[0])
            raise SingularCovarianceError(
                f"covariance is not positive definite (smallest "
                f"eigenvalue {smallest:.3e}); use pseudoinverse mode for "
                "redundant features") from None
        y = np.linalg.solve(factor, diff)
        return float(y @ y)
    if solver != "pinv":
        raise ValidationError(f"unknown solver {solver!r}")
    eigenvalues, vectors = np.linalg.eigh(cov)
    cutoff = PINV_RCOND * max(eigenvalues.max(initial=0.0), 0.0)
    projected = vectors.T @ diff
    keep = eigenvalues > cutoff
    return float(np.sum(projected[keep] ** 2 / eigenvalues[keep]))


def cm_distance_general(theta1, theta2, cov, solver="strict",
                        ridge=0.0) -> float:
    """CM distance from frequency vectors and the uniform covariance:
    sqrt((t1 - t2)^T cov^-1 (t1 - t2))."""
    values1, values2 = _as_values(theta1), _as_values(theta2)
    if values1.size != values2.size:
        raise DimensionMismatchError(
            f"frequency lengths differ: {values1.size} vs {values2.size}")
    if (isinstance(theta1, FrequencyVector)
            and isinstance(theta2, FrequencyVector)
            and theta1.basis != theta2.basis):
        raise BasisError(
            f"mixed bases: {theta1.basis} vs {theta2.basis}")
    return _finalize(
        mahalanobis_squared(values1 - values2, cov, solver, ridge))


def _check_pair(d1: BinaryDataset, d2: BinaryDataset):
    if d1.k != d2.k:
        raise DimensionMismatchError(
            f"attribute counts differ: {d1.name!r} has k={d1.k}, "
            f"{d2.name!r} has k={d2.k}")


def cm_distance_fast(d1: BinaryDataset, d2: BinaryDataset,
                     family: ItemsetFamily, strict: bool = True) -> float:
    """Linear-time CM distance 2 * ||parity(d1) - parity(d2)|| for an
    antimonotonic family; one pass over each dataset."""
    _check_pair(d1, d2)
    if strict and not family.antimonotonic:
        raise BasisError(
            "fast path requires an antimonotonic family; apply closure() "
            "or pass strict=False after doing so deliberately")
    delta = parity_values(d1, family) - parity_values(d2, family)
    return _finalize(4.0 * float(delta @ delta))


def base_distance(d1: BinaryDataset, d2: BinaryDataset,
                  family: ItemsetFamily) -> float:
    """Comparison baseline: scaled L2 distance between itemset
    (conjunction) frequencies, with the scale chosen so that it coincides
    with the CM distance on the singleton family."""
    _check_pair(d1, d2)
    delta = conjunction_values(d1, family) - conjunction_values(d2, family)
    return _finalize(4.0 * float(delta @ delta))


def cm_distance_cov_formula(d1: BinaryDataset, d2: BinaryDataset) -> float:
    """Closed form of the CM distance for the family of all itemsets of
    size at most two, written in conjunction-frequency differences:

        d^2 = 4 * sum_{j<l} (g_j + g_l - 2 g_jl)^2 + 4 * sum_j g_j^2

    (g_j + g_l - 2 g_jl is the parity-frequency difference of the pair.)
    """
    _check_pair(d1, d2)
    k = d1.k
    family = ItemsetFamily.pairs(k)
    gamma = conjunction_values(d1, family) - conjunction_values(d2, family)
    singles = gamma[:k]
    squared = 4.0 * float(singles @ singles)
    position = k
    for j in range(k):
        for l in range(j + 1, k):
            term = singles[j] + singles[l] - 2.0 * gamma[position]
            squared += 4.0 * term * term
            position += 1
    return _finalize(squared)


def empirical_covariance(d: BinaryDataset, family: ItemsetFamily) -> np.ndarray:
    """Covariance of the conjunction features estimated from the rows of a
    dataset (not the uniform distribution)."""
    columns = np.column_stack(
        [d.rows[:, b].all(axis=1) for b in family]).astype(float)
    mean = columns.mean(axis=0)
    return columns.T @ columns / len(d) - np.outer(mean, mean)


def fisher_distance(d1: BinaryDataset, d2: BinaryDataset,
                    family: ItemsetFamily, solver="strict",
                    ridge: float = 0.0) -> float:
    """KL-divergence approximation sqrt(0.5 * g^T Cov(D2)^-1 g) with g the
    conjunction-frequency difference and the covariance estimated from d2.

    Asymmetric in its arguments and not a metric; the empirical covariance
    is frequently rank-deficient, so pseudoinverse mode and a ridge are
    available.
    """
    _check_pair(d1, d2)
    if len(d2) < 2:
        raise ValidationError(
            "covariance estimation needs at least 2 rows in the second "
            "dataset")
    diff = conjunction_values(d1, family) - conjunction_values(d2, family)
    cov = empirical_covariance(d2, family)
    return _finalize(
        0.5 * mahalanobis_squared(diff, cov, solver, ridge))
