"""Dense vectors, the Euclidean metric, and labeled point datasets.

Points are plain float64 numpy arrays; ``as_vector`` is the validating
constructor. A ``Dataset`` bundles a point matrix with per-point ids and
optional class labels and is immutable after construction.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DimensionMismatch",
    "EmptyInput",
    "Dataset",
    "as_vector",
    "euclidean_distance",
    "mean_vector",
    "load_dataset_csv",
    "save_dataset_csv",
]


class DimensionMismatch(ValueError):
    """Operands have incompatible dimensions."""


class EmptyInput(ValueError):
    """An operation received an empty collection it cannot handle."""


def as_vector(components) -> np.ndarray:
    """Validate and convert a sequence of reals into a float64 vector."""
    v = np.asarray(components, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if v.size < 1:
        raise EmptyInput("vector must have at least one component")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    return v


def euclidean_distance(p, q) -> float:
    """d(p, q) = sqrt(sum_i (p_i - q_i)^2)."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DimensionMismatch(f"dimension mismatch: {p.shape} vs {q.shape}")
    return float(np.sqrt(np.sum((p - q) ** 2)))


def mean_vector(points) -> np.ndarray:
    """Componentwise arithmetic mean of a nonempty collection of vectors."""
    points = list(points)
    if not points:
        raise EmptyInput("mean of empty point set is undefined")
    dim = len(points[0])
    for p in points:
        if len(p) != dim:
            raise DimensionMismatch("points have mixed dimensions")
    return np.mean(np.asarray(points, dtype=np.float64), axis=0)


@dataclass(frozen=True)
class Dataset:
    """Ordered collection of points with unique ids and optional labels.

    ``labels[i]`` is None for unlabeled points. ``label_universe`` is the
    ordered set of class labels when known; it defaults to the sorted set
    of labels present.
    """

    points: np.ndarray
    ids: tuple
    labels: tuple
    label_universe: tuple = field(default=())

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError("points must form an (n, dim) matrix")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.ids) != len(pts) or len(self.labels) != len(pts):
            raise ValueError("ids, labels and points must have equal length")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("point ids must be unique")
        universe = tuple(self.label_universe)
        if not universe:
            universe = tuple(sorted({y for y in self.labels if y is not None}, key=str))
        present = {y for y in self.labels if y is not None}
        if not present.issubset(set(universe)):
            raise ValueError("labels outside the declared label universe")
        object.__setattr__(self, "label_universe", universe)
        object.__setattr__(
            self, "_index_of", {pid: i for i, pid in enumerate(self.ids)}
        )

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def index_of(self, point_id) -> int:
        try:
            return self._index_of[point_id]
        except KeyError:
            raise KeyError(f"unknown point id: {point_id!r}") from None

    def point(self, point_id) -> np.ndarray:
        return self.points[self.index_of(point_id)]

    def label_of(self, point_id):
        return self.labels[self.index_of(point_id)]

    def subset(self, indices) -> "Dataset":
        indices = list(indices)
        return Dataset(
            points=self.points[indices],
            ids=tuple(self.ids[i] for i in indices),
            labels=tuple(self.labels[i] for i in indices),
            label_universe=self.label_universe,
        )


def save_dataset_csv(data: Dataset, path) -> None:
    """Write one row per point: ``id,label,c0,c1,...`` (empty label = unlabeled)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for pid, label, row in zip(data.ids, data.labels, data.points):
            writer.writerow(
                [pid, "" if label is None else label] + [repr(float(x)) for x in row]
            )


def load_dataset_csv(path, label_universe=()) -> Dataset:
    """Read a point dataset in the ``id,label,c0,c1,...`` layout."""
    ids, labels, rows = [], [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if len(row) < 3:
                raise ValueError(f"{path}:{lineno}: expected id,label,c0,... row")
            ids.append(row[0])
            labels.append(row[1] if row[1] != "" else None)
            try:
                rows.append([float(x) for x in row[2:]])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad component ({exc})") from None
    if not rows:
        raise EmptyInput(f"{path}: no points")
    return Dataset(
        points=np.asarray(rows, dtype=np.float64),
        ids=tuple(ids),
        labels=tuple(labels),
        label_universe=tuple(label_universe),
    )
