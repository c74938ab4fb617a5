"""Lloyd iteration engine shared by the unsupervised, semi and active variants.

A fit alternates nearest-centroid assignment with centroid-mean updates
until the maximum centroid shift drops below the tolerance or the
assignment stops changing. Empty clusters keep their previous centroid so
that a centroid's class binding survives the whole run.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .vecspace import Dataset, DimensionMismatch, EmptyInput

__all__ = [
    "FitConfig",
    "ClusterModel",
    "assign",
    "update_centroids",
    "fit",
    "fit_unsupervised",
    "predict",
    "predict_many",
    "model_to_json",
    "model_from_json",
]


@dataclass(frozen=True)
class FitConfig:
    k: int
    max_iterations: int = 300
    tolerance: float = 1e-6
    rng_seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")


@dataclass(frozen=True)
class ClusterModel:
    """k centroids, each optionally bound to a class label."""

    centroids: np.ndarray
    cluster_labels: tuple | None
    inertia: float
    iterations_run: int
    inertia_history: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "centroids", np.asarray(self.centroids, dtype=np.float64)
        )
        if self.inertia < 0:
            raise ValueError("inertia must be nonnegative")

    @property
    def k(self) -> int:
        return self.centroids.shape[0]


def _points_matrix(points) -> np.ndarray:
    if isinstance(points, Dataset):
        return points.points
    return np.asarray(points, dtype=np.float64)


def assign(points, centroids) -> np.ndarray:
    """Nearest-centroid index per point; ties go to the lowest centroid index."""
    x = _points_matrix(points)
    c = np.asarray(centroids, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] < 1:
        raise EmptyInput("need at least one centroid")
    if x.shape[1] != c.shape[1]:
        raise DimensionMismatch(
            f"point dim {x.shape[1]} != centroid dim {c.shape[1]}"
        )
    # squared distances suffice for the argmin; argmin takes the first minimum.
    # Differencing per centroid (not the expanded x^2 - 2xc + c^2 form) keeps
    # the floats identical to pairwise euclidean_distance, so tie-breaks agree.
    sq = np.empty((x.shape[0], c.shape[0]), dtype=np.float64)
    for j in range(c.shape[0]):
        sq[:, j] = np.sum((x - c[j]) ** 2, axis=1)
    return np.argmin(sq, axis=1)


def update_centroids(points, assignments, k: int, previous_centroids) -> np.ndarray:
    """Per-cluster means; a cluster with no members keeps its previous centroid."""
    x = _points_matrix(points)
    assignments = np.asarray(assignments)
    if assignments.size and (assignments.min() < 0 or assignments.max() >= k):
        raise ValueError("assignments must lie in [0, k)")
    new = np.array(previous_centroids, dtype=np.float64, copy=True)
    for j in range(k):
        members = x[assignments == j]
        if len(members):
            new[j] = members.mean(axis=0)
    return new


def _inertia(x: np.ndarray, centroids: np.ndarray, assignments: np.ndarray) -> float:
    diffs = x - centroids[assignments]
    return float(np.sum(diffs ** 2))


def fit(data, initial_centroids, config: FitConfig, initial_labels=None) -> ClusterModel:
    """Run Lloyd iterations from the given centroids until convergence.

    ``initial_labels``, when given, are carried to the returned model
    unchanged (the semi/active variants bind one class per centroid).
    """
    x = _points_matrix(data)
    if x.shape[0] == 0:
        raise EmptyInput("cannot fit on an empty dataset")
    centroids = np.array(initial_centroids, dtype=np.float64, copy=True)
    if centroids.shape[0] != config.k:
        raise ValueError(
            f"expected {config.k} initial centroids, got {centroids.shape[0]}"
        )

    assignments = assign(x, centroids)
    history = [_inertia(x, centroids, assignments)]
    iterations = 0
    for _ in range(config.max_iterations):
        iterations += 1
        new_centroids = update_centroids(x, assignments, config.k, centroids)
        shift = float(np.max(np.sqrt(np.sum((new_centroids - centroids) ** 2, axis=1))))
        centroids = new_centroids
        new_assignments = assign(x, centroids)
        history.append(_inertia(x, centroids, new_assignments))
        unchanged = bool(np.array_equal(new_assignments, assignments))
        assignments = new_assignments
        if unchanged or shift < config.tolerance:
            break

    return ClusterModel(
        centroids=centroids,
        cluster_labels=tuple(initial_labels) if initial_labels is not None else None,
        inertia=history[-1],
        iterations_run=iterations,
        inertia_history=tuple(history),
    )


def fit_unsupervised(data: Dataset, config: FitConfig) -> ClusterModel:
    """Classic k-means: k distinct points drawn as initial centroids.

    When the dataset carries ground-truth labels, each cluster is labeled
    post hoc by the majority vote of its members.
    """
    if len(data) < config.k:
        raise EmptyInput(f"need at least k={config.k} points, got {len(data)}")
    rng = np.random.default_rng(config.rng_seed)
    chosen = rng.choice(len(data), size=config.k, replace=False)
    model = fit(data, data.points[chosen], config)

    if any(y is not None for y in data.labels):
        assignments = assign(data, model.centroids)
        labels = []
        for j in range(config.k):
            votes = Counter(
                data.labels[i]
                for i in np.flatnonzero(assignments == j)
                if data.labels[i] is not None
            )
            labels.append(votes.most_common(1)[0][0] if votes else None)
        model = ClusterModel(
            centroids=model.centroids,
            cluster_labels=tuple(labels),
            inertia=model.inertia,
            iterations_run=model.iterations_run,
            inertia_history=model.inertia_history,
        )
    return model


def predict(model: ClusterModel, point):
    """Return (cluster index, class label or None) for one point."""
    point = np.asarray(point, dtype=np.float64)
    if point.shape[0] != model.centroids.shape[1]:
        raise DimensionMismatch(
            f"point dim {point.shape[0]} != centroid dim {model.centroids.shape[1]}"
        )
    idx = int(assign(point[None, :], model.centroids)[0])
    label = model.cluster_labels[idx] if model.cluster_labels is not None else None
    return idx, label


def predict_many(model: ClusterModel, points):
    """Vectorized predict: (cluster indices, label list)."""
    indices = assign(points, model.centroids)
    if model.cluster_labels is not None:
        labels = [model.cluster_labels[i] for i in indices]
    else:
        labels = [None] * len(indices)
    return indices, labels


def model_to_json(model: ClusterModel, config: FitConfig | None = None) -> str:
    payload = {
        "centroids": model.centroids.tolist(),
        "cluster_labels": list(model.cluster_labels)
        if model.cluster_labels is not None
        else None,
        "inertia": model.inertia,
        "iterations_run": model.iterations_run,
    }
    if config is not None:
        payload["config"] = {
            "k": config.k,
            "max_iterations": config.max_iterations,
            "tolerance": config.tolerance,
            "rng_seed": config.rng_seed,
        }
    return json.dumps(payload, sort_keys=True)


def model_from_json(text: str) -> ClusterModel:
    payload = json.loads(text)
    return ClusterModel(
        centroids=np.asarray(payload["centroids"], dtype=np.float64),
        cluster_labels=tuple(payload["cluster_labels"])
        if payload["cluster_labels"] is not None
        else None,
        inertia=payload["inertia"],
        iterations_run=payload["iterations_run"],
    )
