"""Semi-supervised and active-query K-means clustering.

Subpackages:

- ``vecspace``: dense vectors, Euclidean metric, labeled datasets
- ``preprocess``: TF-IDF, modulus feature hashing, PCA
- ``kmeans``: Lloyd iteration engine and trained cluster models
- ``seeding``: random and penalized min-max seed selection
- ``oracle``: simulated and interactive label-query oracles
- ``evaluation``: accuracy/Gini/confusion metrics, synthetic data,
  experiment harness
- ``cli``: the ``aqkmeans`` command
"""

from .kmeans import ClusterModel, FitConfig, fit, fit_unsupervised, predict
from .seeding import (
    DEFAULT_PENALTY,
    PENALTY_KINDS,
    SeedSet,
    build_seed_set,
    random_seed_subset,
)
from .vecspace import Dataset, euclidean_distance, mean_vector

__version__ = "0.1.0"

__all__ = [
    "ClusterModel",
    "FitConfig",
    "Dataset",
    "SeedSet",
    "PENALTY_KINDS",
    "DEFAULT_PENALTY",
    "fit",
    "fit_unsupervised",
    "predict",
    "build_seed_set",
    "random_seed_subset",
    "euclidean_distance",
    "mean_vector",
    "__version__",
]
