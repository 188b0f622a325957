"""Constrained-minimum distances between data sets.

Binary transaction databases (and windowed event sequences) are compared
through summary statistics: the CM distance is the Mahalanobis distance of
itemset frequency vectors under the uniform-distribution covariance, which
for antimonotonic itemset families reduces to twice the L2 distance
between parity frequencies and evaluates in linear time.
"""

from .analysis import (
    Clustering,
    DistanceMatrix,
    cluster_indices,
    complete_linkage,
    distance_matrix,
    k_medoids,
    resolve_family,
    sign_test,
)
from .dataset import (
    BinaryDataset,
    conjunction_frequency,
    empirical_distribution,
    load_transactions,
    parity_frequency,
)
from .distance import (
    DistanceSpec,
    base_distance,
    cm_distance_cov_formula,
    cm_distance_fast,
    cm_distance_general,
    fisher_distance,
)
from .estimator import CMDistance, WindowBinarizer
from .exceptions import CMDistError, InputError, NumericalError
from .features import (
    FrequencyVector,
    ItemsetFamily,
    conjunction_to_parity,
    parity_covariance,
    parity_to_conjunction,
    uniform_covariance_conjunction,
)
from .mining import MiningConfig, apriori, select_features
from .oracle import (
    ConstraintSystem,
    TabulatedFeature,
    cm_distance_geometric,
    cm_distance_geometric_from_frequencies,
    enumeration_covariance,
    full_itemset_distance,
    min_norm_point,
)
from .sequences import (
    EventSequence,
    build_alphabet,
    make_sequences,
    sequence_cm_distance,
    windows_to_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryDataset", "CMDistError", "CMDistance", "Clustering",
    "ConstraintSystem", "DistanceMatrix", "DistanceSpec", "EventSequence",
    "FrequencyVector", "InputError", "ItemsetFamily", "MiningConfig",
    "NumericalError", "TabulatedFeature", "WindowBinarizer", "apriori",
    "base_distance", "build_alphabet", "cluster_indices",
    "cm_distance_cov_formula", "cm_distance_fast", "cm_distance_general",
    "cm_distance_geometric", "cm_distance_geometric_from_frequencies",
    "complete_linkage", "conjunction_frequency", "conjunction_to_parity",
    "distance_matrix", "empirical_distribution", "enumeration_covariance",
    "fisher_distance", "full_itemset_distance", "k_medoids",
    "load_transactions", "make_sequences", "min_norm_point",
    "parity_covariance", "parity_frequency", "parity_to_conjunction",
    "resolve_family", "select_features", "sequence_cm_distance",
    "sign_test", "uniform_covariance_conjunction", "windows_to_dataset",
]
