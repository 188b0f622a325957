"""Distance matrices over dataset collections, distance-only clustering,
validity indices, and the exact sign test used to summarize wins.

Clustering operates purely on a distance matrix (no coordinates), so the
Davies-Bouldin and Calinski-Harabasz indices are computed in medoid form:
cluster scatter is the mean distance to the cluster medoid, separation is
the medoid-to-medoid distance, and CH uses the all-point medoid as the
global center.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .dataset import BinaryDataset, conjunction_values, parity_values
from .distance import DistanceSpec, empirical_covariance, mahalanobis_squared
from .exceptions import DimensionMismatchError, ValidationError
from .features import ItemsetFamily
from .mining import MiningConfig, select_features


@dataclass(frozen=True)
class DistanceMatrix:
    labels: tuple[str, ...]
    values: np.ndarray
    symmetric: bool = True

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        n = len(self.labels)
        if values.shape != (n, n):
            raise ValidationError(
                f"matrix shape {values.shape} does not match {n} labels")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self):
        return len(self.labels)

    def to_tsv(self, digits: int = 9) -> str:
        """TSV with labels on the first row and column."""
        lines = []
        if not self.symmetric:
            lines.append("# asymmetric distance (fisher kind)")
        lines.append("\t".join(("",) + self.labels))
        for label, row in zip(self.labels, self.values):
            lines.append(label + "\t" + "\t".join(
                f"{v:.{digits}f}" for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "DistanceMatrix":
        lines = [l for l in text.splitlines() if l.strip()]
        symmetric = True
        if lines and lines[0].startswith("#"):
            symmetric = False
            lines = lines[1:]
        if not lines:
            raise ValidationError("empty distance matrix file")
        labels = tuple(lines[0].split("\t")[1:])
        rows = []
        for line in lines[1:]:
            cells = line.split("\t")
            rows.append([float(c) for c in cells[1:]])
        return cls(labels, np.array(rows), symmetric=symmetric)


def resolve_family(datasets, spec: DistanceSpec) -> ItemsetFamily:
    """Turn a feature-set choice into a concrete itemset family."""
    k = datasets[0].k
    if spec.features == "ind":
        return ItemsetFamily.singletons(k)
    if spec.features == "cov":
        return ItemsetFamily.pairs(k)
    if spec.features == "family":
        return spec.family
    cfg = MiningConfig(min_support=spec.min_support or 0.5,
                       target_count=spec.target_count)
    return select_features(datasets, cfg)


def distance_matrix(datasets, spec: DistanceSpec,
                    family: ItemsetFamily | None = None) -> DistanceMatrix:
    """All pairwise distances, computing each dataset's statistics once.

    cm/base kinds produce symmetric matrices; the fisher kind is
    asymmetric (entry (i, j) estimates its covariance from dataset j) and
    is flagged as such.
    """
    datasets = list(datasets)
    if len(datasets) < 2:
        raise ValidationError("distance_matrix needs at least 2 datasets")
    k = datasets[0].k
    if any(d.k != k for d in datasets):
        raise DimensionMismatchError("datasets do not share k")
    if family is None:
        family = resolve_family(datasets, spec)
    labels = tuple(d.name for d in datasets)
    n = len(datasets)
    out = np.zeros((n, n))

    if spec.kind in ("cm", "base"):
        freq = parity_values if spec.kind == "cm" else conjunction_values
        if spec.kind == "cm" and not family.antimonotonic:
            family = family.closure()
        vectors = np.array([freq(d, family) for d in datasets])
        for i in range(n):
            for j in range(i + 1, n):
                delta = vectors[i] - vectors[j]
                out[i, j] = out[j, i] = 2.0 * np.linalg.norm(delta)
        return DistanceMatrix(labels, out, symmetric=True)

    # fisher: conjunction frequencies once, covariance once per column.
    vectors = np.array([conjunction_values(d, family) for d in datasets])
    for j, d in enumerate(datasets):
        cov = empirical_covariance(d, family)
        for i in range(n):
            if i == j:
                continue
            squared = 0.5 * mahalanobis_squared(
                vectors[i] - vectors[j], cov, spec.solver, spec.ridge)
            out[i, j] = np.sqrt(max(squared, 0.0))
    return DistanceMatrix(labels, out, symmetric=False)


@dataclass(frozen=True)
class Clustering:
    assignment: tuple[int, ...]
    c: int

    def __post_init__(self):
        present = set(self.assignment)
        if present != set(range(self.c)):
            raise ValidationError(
                f"cluster ids must cover 0..{self.c - 1} with no empties")

    def members(self, cluster: int):
        return [i for i, a in enumerate(self.assignment) if a == cluster]


def _relabel(groups, n) -> Clustering:
    # Deterministic ids: clusters ordered by their smallest member.
    ordered = sorted(groups, key=min)
    assignment = [0] * n
    for cid, group in enumerate(ordered):
        for i in group:
            assignment[i] = cid
    return Clustering(tuple(assignment), len(ordered))


def complete_linkage(m: DistanceMatrix, c: int) -> Clustering:
    """Agglomerative clustering merging the pair of clusters with the
    smallest maximum inter-point distance; ties break on the label-order
    (smallest-member) pair. Stops at c clusters."""
    n = m.n
    if not 1 <= c <= n:
        raise ValidationError(f"cluster count {c} out of range [1, {n}]")
    clusters = [[i] for i in range(n)]
    values = m.values
    while len(clusters) > c:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                linkage = max(values[i, j]
                              for i in clusters[a] for j in clusters[b])
                key = (linkage, min(clusters[a]), min(clusters[b]))
                if best is None or key < best[0]:
                    best = (key, a, b)
        _, a, b = best
        clusters[a] = sorted(clusters[a] + clusters[b])
        del clusters[b]
        clusters.sort(key=min)
    return _relabel(clusters, n)


def k_medoids(m: DistanceMatrix, c: int, seed: int = 0) -> Clustering:
    """PAM-style k-medoids on a distance matrix.

    Medoid initialization is drawn deterministically from the seed; the
    assignment/update loop strictly decreases the objective (sum of
    distances to assigned medoids) until a fixed point.
    """
    n = m.n
    if not 2 <= c <= n:
        raise ValidationError(f"cluster count {c} out of range [2, {n}]")
    values = m.values
    rng = np.random.default_rng(seed)
    medoids = sorted(rng.choice(n, size=c, replace=False).tolist())

    def assign(medoids):
        # Nearest medoid, ties to the smallest medoid index.
        cost = values[:, medoids]
        choice = cost.argmin(axis=1)
        return choice, float(cost[np.arange(n), choice].sum())

    choice, objective = assign(medoids)
    while True:
        new_medoids = []
        for cid in range(c):
            members = np.flatnonzero(choice == cid)
            if members.size == 0:
                # Re-seed an empty cluster with the point farthest from
                # its current medoid.
                loads = values[np.arange(n), np.array(medoids)[choice]]
                new_medoids.append(int(loads.argmax()))
                continue
            within = values[np.ix_(members, members)].sum(axis=0)
            new_medoids.append(int(members[within.argmin()]))
        new_medoids = sorted(set(new_medoids))
        if len(new_medoids) < c:
            break
        new_choice, new_objective = assign(new_medoids)
        if new_objective < objective - 1e-15:
            medoids, choice, objective = new_medoids, new_choice, new_objective
        else:
            break
    groups = [np.flatnonzero(choice == cid).tolist() for cid in range(c)]
    groups = [g for g in groups if g]
    if len(groups) < c:
        raise ValidationError(
            "k_medoids collapsed clusters; the distance matrix has "
            "duplicate points for this seed")
    return _relabel(groups, n)


def _medoid(values, members):
    members = list(members)
    within = values[np.ix_(members, members)].sum(axis=0)
    return members[int(within.argmin())]


def cluster_indices(m: DistanceMatrix, cl: Clustering) -> tuple[float, float, float]:
    """Return (r, DB, CH) for a clustering of a distance matrix.

    r is mean intra-cluster pairwise distance over mean inter-cluster
    pairwise distance (size-1 clusters contribute no intra pairs); DB and
    CH are the medoid-form adaptations. Smaller r and DB are better,
    larger CH is better.
    """
    if cl.c < 2:
        raise ValidationError("indices need at least 2 clusters")
    values = m.values
    n = m.n
    groups = [cl.members(cid) for cid in range(cl.c)]

    intra, inter = [], []
    for i in range(n):
        for j in range(i + 1, n):
            (intra if cl.assignment[i] == cl.assignment[j]
             else inter).append(values[i, j])
    if not intra:
        raise ValidationError(
            "all clusters are singletons; the intra/inter ratio is "
            "undefined")
    if not inter:
        raise ValidationError("no inter-cluster pairs")
    inter_mean = float(np.mean(inter))
    if inter_mean == 0.0:
        raise ValidationError(
            "zero inter-cluster separation; the intra/inter ratio is "
            "undefined")
    r = float(np.mean(intra)) / inter_mean

    medoids = [_medoid(values, g) for g in groups]
    scatter = [float(np.mean([values[i, medoid] for i in group]))
               for group, medoid in zip(groups, medoids)]
    db_terms = []
    for a in range(cl.c):
        ratios = []
        for b in range(cl.c):
            if a == b:
                continue
            separation = values[medoids[a], medoids[b]]
            if separation == 0.0:
                raise ValidationError(
                    "coincident cluster medoids; DB index is undefined")
            ratios.append((scatter[a] + scatter[b]) / separation)
        db_terms.append(max(ratios))
    db = float(np.mean(db_terms))

    center = _medoid(values, range(n))
    between = sum(len(g) * values[medoid, center] ** 2
                  for g, medoid in zip(groups, medoids))
    within = sum(values[i, medoid] ** 2
                 for g, medoid in zip(groups, medoids) for i in g)
    if within == 0.0:
        ch = float("inf") if between > 0 else 0.0
    else:
        ch = float((between / (cl.c - 1)) / (within / (n - cl.c)))
    return r, db, ch


def sign_test(wins: int, n: int) -> float:
    """Two-sided exact binomial test at p = 1/2:
    2 * min(P(X <= wins), P(X >= wins)), capped at 1."""
    if n < 1 or not 0 <= wins <= n:
        raise ValidationError(f"invalid sign-test counts wins={wins} n={n}")
    scale = 0.5 ** n
    lower = sum(comb(n, i) for i in range(0, wins + 1)) * scale
    upper = sum(comb(n, i) for i in range(wins, n + 1)) * scale
    return min(1.0, 2.0 * min(lower, upper))
