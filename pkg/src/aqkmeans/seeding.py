"""Seed-set construction for the semi and active variants.

The active variant picks seeds by penalized min-max selection: the next
seed is the point maximizing its minimum penalty-scaled distance to the
seeds already chosen. The penalty factor phi(count) discounts distances
to seeds of labels that are already well represented, steering selection
toward under-covered classes. The semi variant simply samples a labeled
fraction uniformly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .vecspace import Dataset, EmptyInput, euclidean_distance

__all__ = [
    "PENALTY_KINDS",
    "DEFAULT_PENALTY",
    "SeedEntry",
    "SeedSet",
    "phi",
    "penalized_distance",
    "min_penalized_distance",
    "select_next",
    "build_seed_set",
    "random_seed_subset",
    "centroids_from_seeds",
    "seed_set_to_jsonl",
    "seed_set_from_jsonl",
]

# penalty factor per current count of same-labeled seeds; all positive and
# non-increasing for count >= 1. 1/log(x) is undefined at x=1, so the log
# kind is shifted to 1/ln(x+1).
_PHI = {
    "inverse_exp": lambda c: math.exp(-c),
    "inverse_log": lambda c: 1.0 / math.log(c + 1.0),
    "inverse": lambda c: 1.0 / c,
    "inverse_square": lambda c: 1.0 / (c * c),
    "inverse_sqrt": lambda c: 1.0 / math.sqrt(c),
}

PENALTY_KINDS = tuple(_PHI)
DEFAULT_PENALTY = "inverse_sqrt"


def phi(kind: str, count: int) -> float:
    """Penalty factor for a label that already has ``count`` selected seeds."""
    if kind not in _PHI:
        raise ValueError(f"unknown penalty kind: {kind!r} (choose from {PENALTY_KINDS})")
    if count < 1:
        raise ValueError("count must be >= 1")
    return _PHI[kind](count)


@dataclass(frozen=True)
class SeedEntry:
    id: object
    vector: np.ndarray
    label: object


@dataclass(frozen=True)
class SeedSet:
    """Labeled points in selection order."""

    entries: tuple

    def __post_init__(self):
        ids = [e.id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate point ids in seed set")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def label_counts(self) -> dict:
        counts: dict = {}
        for e in self.entries:
            counts[e.label] = counts.get(e.label, 0) + 1
        return counts

    @property
    def ids(self) -> set:
        return {e.id for e in self.entries}

    @property
    def labels(self) -> list:
        return [e.label for e in self.entries]

    def extended(self, entry: SeedEntry) -> "SeedSet":
        return SeedSet(entries=self.entries + (entry,))


def penalized_distance(seed: SeedEntry, candidate, counts: dict, kind: str) -> float:
    """phi(count of seed's label) times the raw Euclidean distance."""
    return phi(kind, counts[seed.label]) * euclidean_distance(seed.vector, candidate)


def min_penalized_distance(candidate, seeds: SeedSet, kind: str) -> float:
    if not len(seeds):
        raise EmptyInput("seed set is empty")
    counts = seeds.label_counts
    return min(penalized_distance(e, candidate, counts, kind) for e in seeds.entries)


def select_next(seeds: SeedSet, unselected: Dataset, kind: str):
    """Id of the unselected point maximizing its min penalized seed distance.

    Ties break toward the smallest point id.
    """
    if not len(seeds):
        raise EmptyInput("seed set is empty")
    taken = seeds.ids
    best_id = None
    best_value = -math.inf
    for pid, vec in zip(unselected.ids, unselected.points):
        if pid in taken:
            continue
        value = min_penalized_distance(vec, seeds, kind)
        if value > best_value or (value == best_value and (best_id is None or pid < best_id)):
            best_value = value
            best_id = pid
    if best_id is None:
        raise EmptyInput("no unselected points remain")
    return best_id


def build_seed_set(data: Dataset, budget: int, oracle, kind: str = DEFAULT_PENALTY,
                   rng_seed: int = 0) -> SeedSet:
    """Active seed selection: one random start, then penalized min-max picks.

    Makes exactly ``budget`` oracle queries. ``oracle`` is any object with
    a ``query(point_id) -> label`` method.
    """
    n = len(data)
    if not 1 <= budget <= n:
        raise ValueError(f"budget must be in [1, {n}], got {budget}")
    phi(kind, 1)  # validate kind up front

    rng = np.random.default_rng(rng_seed)
    first = int(rng.integers(n))
    entries = [SeedEntry(data.ids[first], data.points[first], oracle.query(data.ids[first]))]

    selected = np.zeros(n, dtype=bool)
    selected[first] = True
    # raw distance cache: row s holds distances from seed s to every point;
    # phi factors change as counts grow, so rows are recombined each round
    raw = np.empty((budget, n), dtype=np.float64)
    raw[0] = np.sqrt(np.sum((data.points - data.points[first]) ** 2, axis=1))

    counts: dict = {entries[0].label: 1}
    while len(entries) < budget:
        m = len(entries)
        factors = np.array([phi(kind, counts[e.label]) for e in entries])
        min_pen = np.min(raw[:m] * factors[:, None], axis=0)
        min_pen[selected] = -np.inf
        best = np.max(min_pen)
        tied = np.flatnonzero(min_pen == best)
        idx = min(tied, key=lambda i: data.ids[i])
        label = oracle.query(data.ids[idx])
        raw[m] = np.sqrt(np.sum((data.points - data.points[idx]) ** 2, axis=1))
        entries.append(SeedEntry(data.ids[idx], data.points[idx], label))
        selected[idx] = True
        counts[label] = counts.get(label, 0) + 1

    return SeedSet(entries=tuple(entries))


def random_seed_subset(data: Dataset, fraction: float, rng_seed: int = 0) -> SeedSet:
    """Uniform labeled sample of max(1, round(fraction * n)) points."""
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1]")
    n = len(data)
    count = max(1, round(fraction * n))
    rng = np.random.default_rng(rng_seed)
    chosen = rng.choice(n, size=count, replace=False)
    entries = []
    for i in chosen:
        label = data.labels[i]
        if label is None:
            raise ValueError(f"point {data.ids[i]!r} has no ground-truth label")
        entries.append(SeedEntry(data.ids[i], data.points[i], label))
    return SeedSet(entries=tuple(entries))


def centroids_from_seeds(seeds: SeedSet, data: Dataset, k: int, rng_seed: int = 0):
    """One initial centroid per class: the mean of that class's seeds.

    A class with no seeds falls back to a uniform-random data point but
    keeps its class label. Returns (centroids array, per-centroid labels).
    """
    universe = data.label_universe
    if k != len(universe):
        raise ValueError(
            f"k={k} must equal the number of classes ({len(universe)})"
        )
    rng = np.random.default_rng(rng_seed)
    centroids = np.empty((k, data.dim), dtype=np.float64)
    for j, label in enumerate(universe):
        members = [e.vector for e in seeds.entries if e.label == label]
        if members:
            centroids[j] = np.mean(np.asarray(members), axis=0)
        else:
            centroids[j] = data.points[int(rng.integers(len(data)))]
    return centroids, tuple(universe)


def seed_set_to_jsonl(seeds: SeedSet, path) -> None:
    """Selection-order audit log: one `{"order", "id", "label"}` line per seed."""
    with open(path, "w") as fh:
        for order, e in enumerate(seeds.entries):
            fh.write(json.dumps({"order": order, "id": e.id, "label": e.label},
                                sort_keys=True))
            fh.write("\n")


def seed_set_from_jsonl(path, data: Dataset) -> SeedSet:
    entries = []
    with open(path) as fh:
        records = [json.loads(line) for line in fh if line.strip()]
    for record in sorted(records, key=lambda r: r["order"]):
        entries.append(
            SeedEntry(record["id"], data.point(record["id"]), record["label"])
        )
    return SeedSet(entries=tuple(entries))
