"""Measurement and experiments: accuracy, Gini-Index, confusion statistics,
the synthetic Gaussian mixture generator, and the repeated-trial harness
comparing the semi and active seeding variants across query ratios.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import kmeans, seeding
from .oracle import GroundTruthOracle
from .vecspace import Dataset, DimensionMismatch, EmptyInput

__all__ = [
    "ConfusionMatrix",
    "EvalReport",
    "ExperimentResult",
    "accuracy",
    "gini_index",
    "max_gini",
    "confusion_matrix",
    "classification_report",
    "make_gaussian_mixture",
    "split_dataset",
    "derive_seed",
    "run_experiment",
    "results_to_csv",
    "results_summary",
    "report_to_dict",
    "format_report_table",
]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows are true classes, columns predicted classes."""

    labels: tuple
    counts: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "counts", np.asarray(self.counts, dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    per_class: dict  # label -> (precision, recall, f1)
    macro_average: tuple
    confusion: ConfusionMatrix


@dataclass(frozen=True)
class ExperimentResult:
    ratio: float
    mean_accuracy: float
    mean_gini: float
    trials: tuple  # (rng_seed, accuracy, gini) per trial


def accuracy(predicted, truth) -> float:
    predicted = list(predicted)
    truth = list(truth)
    if not predicted:
        raise EmptyInput("cannot score empty predictions")
    if len(predicted) != len(truth):
        raise DimensionMismatch(
            f"{len(predicted)} predictions vs {len(truth)} truths"
        )
    return sum(p == t for p, t in zip(predicted, truth)) / len(predicted)


def gini_index(labels) -> float:
    """1 - sum(p_i^2) over empirical class frequencies; 0 for a single class."""
    labels = list(labels)
    if not labels:
        raise EmptyInput("Gini of an empty label sequence is undefined")
    n = len(labels)
    counts: dict = {}
    for y in labels:
        counts[y] = counts.get(y, 0) + 1
    return 1.0 - sum((c / n) ** 2 for c in counts.values())


def max_gini(k: int) -> float:
    """Upper bound (k-1)/k, attained at perfectly uniform frequencies."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return (k - 1) / k


def confusion_matrix(predicted, truth, labels) -> ConfusionMatrix:
    labels = tuple(labels)
    index = {y: i for i, y in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for p, t in zip(predicted, truth):
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(labels=labels, counts=counts)


def classification_report(predicted, truth, label_universe) -> EvalReport:
    """Accuracy plus per-class precision/recall/F1 and their macro means.

    Zero-denominator cases (class never predicted, class absent from the
    truth, precision+recall = 0) score 0 by convention.
    """
    predicted = list(predicted)
    truth = list(truth)
    acc = accuracy(predicted, truth)
    cm = confusion_matrix(predicted, truth, label_universe)
    per_class: dict = {}
    for i, label in enumerate(cm.labels):
        tp = int(cm.counts[i, i])
        fp = int(cm.counts[:, i].sum()) - tp
        fn = int(cm.counts[i, :].sum()) - tp
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = (
            2 * precision * recall / (precision + recall)
            if precision + recall
            else 0.0
        )
        per_class[label] = (precision, recall, f1)
    triples = list(per_class.values())
    macro = tuple(float(np.mean([t[i] for t in triples])) for i in range(3))
    return EvalReport(accuracy=acc, per_class=per_class, macro_average=macro,
                      confusion=cm)


def make_gaussian_mixture(cluster_means, cluster_stddevs, points_per_cluster,
                          rng_seed: int = 0) -> Dataset:
    """Isotropic Gaussian blobs labeled by cluster, deterministic per seed."""
    means = np.asarray(cluster_means, dtype=np.float64)
    stddevs = np.asarray(cluster_stddevs, dtype=np.float64)
    if means.ndim != 2:
        raise ValueError("cluster_means must be a (k, dim) array")
    if np.any(stddevs < 0):
        raise ValueError("stddevs must be nonnegative")
    counts = (
        [int(points_per_cluster)] * len(means)
        if np.isscalar(points_per_cluster)
        else [int(c) for c in points_per_cluster]
    )
    if len(counts) != len(means) or len(stddevs) != len(means):
        raise ValueError("means, stddevs and counts must align")
    if any(c < 1 for c in counts):
        raise ValueError("every cluster needs at least 1 point")

    rng = np.random.default_rng(rng_seed)
    points, ids, labels = [], [], []
    i = 0
    for j, (mu, sigma, n) in enumerate(zip(means, stddevs, counts)):
        sample = mu + sigma * rng.standard_normal((n, means.shape[1]))
        points.append(sample)
        for _ in range(n):
            ids.append(f"p{i:05d}")
            labels.append(str(j))
            i += 1
    return Dataset(
        points=np.vstack(points),
        ids=tuple(ids),
        labels=tuple(labels),
        label_universe=tuple(str(j) for j in range(len(means))),
    )


def split_dataset(data: Dataset, train_fraction: float, rng_seed: int = 0):
    """Deterministic seeded shuffle split into (train, test)."""
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must be in (0, 1)")
    rng = np.random.default_rng(rng_seed)
    order = rng.permutation(len(data))
    cut = round(train_fraction * len(data))
    return data.subset(order[:cut]), data.subset(order[cut:])


def derive_seed(root_seed: int, *stream) -> int:
    """Named-stream seed derivation; extending one stream never shifts another."""
    parts = [int(root_seed)]
    for item in stream:
        if isinstance(item, str):
            parts.extend(item.encode("utf-8"))
        else:
            parts.append(int(item))
    return int(np.random.SeedSequence(parts).generate_state(1)[0])


def _run_trial(train: Dataset, test: Dataset, variant: str, ratio: float,
               penalty: str, config: kmeans.FitConfig, trial_seed: int):
    budget = max(1, round(ratio * len(train)))
    if budget > len(train):
        raise ValueError(f"ratio {ratio} yields budget {budget} > {len(train)} points")
    if variant == "semi":
        seeds = seeding.random_seed_subset(train, ratio, rng_seed=trial_seed)
    elif variant == "active":
        oracle = GroundTruthOracle(train, limit=budget)
        seeds = seeding.build_seed_set(train, budget, oracle, kind=penalty,
                                       rng_seed=trial_seed)
    else:
        raise ValueError(f"unknown variant: {variant!r}")
    centroids, labels = seeding.centroids_from_seeds(
        seeds, train, k=config.k, rng_seed=trial_seed
    )
    model = kmeans.fit(train, centroids, config, initial_labels=labels)
    _, predicted = kmeans.predict_many(model, test.points)
    return accuracy(predicted, test.labels), gini_index(seeds.labels), model


def run_experiment(data: Dataset, variant: str, ratios, trials: int,
                   penalty: str = seeding.DEFAULT_PENALTY,
                   config: kmeans.FitConfig | None = None,
                   test_data: Dataset | None = None) -> list:
    """Repeated seeded trials per query/label ratio.

    Each trial draws seeds (random subset for semi, penalized min-max
    queries for active), builds per-class centroids, runs Lloyd to
    convergence, and scores on the held-out test split. When ``test_data``
    is not given, ``data`` is split 80/20 deterministically.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not any(y is not None for y in data.labels):
        raise ValueError("run_experiment needs ground-truth labels")
    if config is None:
        config = kmeans.FitConfig(k=len(data.label_universe))
    if test_data is None:
        train, test = split_dataset(data, 0.8,
                                    rng_seed=derive_seed(config.rng_seed, "split"))
    else:
        train, test = data, test_data

    results = []
    for ratio in ratios:
        records = []
        for trial in range(trials):
            trial_seed = derive_seed(
                config.rng_seed, variant, round(ratio * 1_000_000), trial
            )
            acc, gini, _ = _run_trial(train, test, variant, ratio, penalty,
                                      config, trial_seed)
            records.append((trial_seed, acc, gini))
        results.append(ExperimentResult(
            ratio=float(ratio),
            mean_accuracy=float(np.mean([r[1] for r in records])),
            mean_gini=float(np.mean([r[2] for r in records])),
            trials=tuple(records),
        ))
    return results


def results_to_csv(results, path) -> None:
    """One row per trial: ``ratio,trial,rng_seed,accuracy,gini``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ratio", "trial", "rng_seed", "accuracy", "gini"])
        for result in results:
            for trial, (seed, acc, gini) in enumerate(result.trials):
                writer.writerow([repr(result.ratio), trial, seed, repr(acc), repr(gini)])


def results_summary(results_by_variant: dict, k: int) -> dict:
    """Side-by-side means per ratio plus the theoretical Gini ceiling."""
    ratios = sorted({r.ratio for results in results_by_variant.values() for r in results})
    rows = []
    for ratio in ratios:
        row = {"ratio": ratio}
        for variant, results in results_by_variant.items():
            match = [r for r in results if r.ratio == ratio]
            if match:
                row[f"{variant}_accuracy"] = match[0].mean_accuracy
                row[f"{variant}_gini"] = match[0].mean_gini
        if "active_accuracy" in row and "semi_accuracy" in row:
            row["active_beats_semi"] = row["active_accuracy"] >= row["semi_accuracy"]
        rows.append(row)
    return {"k": k, "max_gini": max_gini(k), "ratios": rows}


def report_to_dict(report: EvalReport) -> dict:
    return {
        "accuracy": report.accuracy,
        "per_class": {
            str(label): {"precision": p, "recall": r, "f1": f}
            for label, (p, r, f) in report.per_class.items()
        },
        "macro_average": {
            "precision": report.macro_average[0],
            "recall": report.macro_average[1],
            "f1": report.macro_average[2],
        },
        "confusion": {
            "labels": [str(y) for y in report.confusion.labels],
            "counts": report.confusion.counts.tolist(),
        },
    }


def format_report_table(report: EvalReport) -> str:
    """Per-class precision/recall/F1 table with a trailing macro-average column."""
    labels = [str(y) for y in report.per_class] + ["Average"]
    rows = {
        "Precision": [p for p, _, _ in report.per_class.values()]
        + [report.macro_average[0]],
        "Recall": [r for _, r, _ in report.per_class.values()]
        + [report.macro_average[1]],
        "F1": [f for _, _, f in report.per_class.values()]
        + [report.macro_average[2]],
    }
    width = max(9, max(len(y) for y in labels) + 2)
    lines = ["".join(["Class".ljust(11)] + [y.rjust(width) for y in labels])]
    for name, values in rows.items():
        lines.append(
            "".join([name.ljust(11)] + [f"{100 * v:.2f}".rjust(width) for v in values])
        )
    lines.append(f"Accuracy   {report.accuracy:.4f}")
    return "\n".join(lines)
