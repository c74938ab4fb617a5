"""Command-line surface: vectorize, train, evaluate, experiment, demo.

A JSON config file can supply any option; command-line flags win. Every
command is deterministic given its config, all randomness flowing from a
single root seed through named derivation streams.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import evaluation, kmeans, preprocess, seeding
from .oracle import GroundTruthOracle, InteractiveOracle, OracleError, write_query_log
from .vecspace import Dataset, EmptyInput, load_dataset_csv, save_dataset_csv


class UsageError(Exception):
    pass


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(config, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return config


def _resolve(args: argparse.Namespace, config_keys) -> argparse.Namespace:
    """Overlay config-file values under explicit flags (flags win)."""
    if getattr(args, "config", None):
        file_values = _load_config(args.config)
        for key, value in file_values.items():
            if key not in config_keys:
                raise UsageError(f"unknown config key: {key!r}")
            if getattr(args, key, None) is None:
                setattr(args, key, value)
    return args


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"missing required option --{name.replace('_', '-')}")


def _fit_config(args, k: int) -> kmeans.FitConfig:
    return kmeans.FitConfig(
        k=k,
        max_iterations=args.max_iterations if args.max_iterations is not None else 300,
        tolerance=args.tolerance if args.tolerance is not None else 1e-6,
        rng_seed=args.rng_seed if args.rng_seed is not None else 0,
    )


def cmd_vectorize(args) -> int:
    _require(args, "corpus", "output_dir")
    level = args.pca_level if args.pca_level is not None else 1.0
    if not 0 < level <= 1:
        raise UsageError("--pca-level must be in (0, 1]")
    docs = preprocess.read_corpus_jsonl(args.corpus)
    if not docs:
        raise EmptyInput(f"{args.corpus}: empty corpus")

    tfidf = preprocess.fit_tfidf(docs)
    matrix = np.array([preprocess.transform_tfidf(tfidf, d) for d in docs])
    pca = preprocess.fit_pca(matrix, level=level)
    reduced = preprocess.transform_pca(pca, matrix)

    os.makedirs(args.output_dir, exist_ok=True)
    data = Dataset(
        points=reduced,
        ids=tuple(d.id for d in docs),
        labels=tuple(d.label for d in docs),
    )
    save_dataset_csv(data, os.path.join(args.output_dir, "vectors.csv"))
    preprocess.save_models_json(
        os.path.join(args.output_dir, "models.json"), tfidf=tfidf, pca=pca
    )
    variation = preprocess.explained_variation(pca)
    print(f"vocabulary size: {tfidf.dim}")
    print(f"reduced dimension: {pca.n_components} (level {level:g})")
    print(f"explained variation: {variation:.4f}")
    return 0


def _load_labeled_vectors(path) -> Dataset:
    data = load_dataset_csv(path)
    if not any(y is not None for y in data.labels):
        raise ValueError(f"{path}: no labeled points")
    return data


def cmd_train(args) -> int:
    _require(args, "vectors", "output_dir")
    data = load_dataset_csv(args.vectors)
    variant = args.variant
    os.makedirs(args.output_dir, exist_ok=True)
    rng_seed = args.rng_seed if args.rng_seed is not None else 0

    if variant == "unsupervised":
        if args.k is None and not data.label_universe:
            raise UsageError("unsupervised training on unlabeled data needs --k")
        k = args.k if args.k is not None else len(data.label_universe)
        config = _fit_config(args, k)
        model = kmeans.fit_unsupervised(data, config)
        seeds = None
        query_budget = None
    else:
        if not data.label_universe:
            raise ValueError(f"{args.vectors}: semi/active training needs labels")
        k = len(data.label_universe)
        config = _fit_config(args, k)
        ratio = args.ratio if args.ratio is not None else 0.1
        if not 0 < ratio <= 1:
            raise UsageError("--ratio must be in (0, 1]")
        budget = max(1, round(ratio * len(data)))
        if variant == "semi":
            seeds = seeding.random_seed_subset(data, ratio, rng_seed=rng_seed)
            query_budget = None
        else:
            penalty = args.penalty if args.penalty is not None else seeding.DEFAULT_PENALTY
            if args.oracle == "interactive":
                documents = {}
                if args.corpus:
                    documents = {
                        d.id: " ".join(d.tokens)
                        for d in preprocess.read_corpus_jsonl(args.corpus)
                    }
                oracle = InteractiveOracle(
                    data, data.label_universe, limit=budget, documents=documents
                )
            else:
                oracle = GroundTruthOracle(data, limit=budget)
            seeds = seeding.build_seed_set(
                data, budget, oracle, kind=penalty, rng_seed=rng_seed
            )
            query_budget = oracle.budget
        centroids, labels = seeding.centroids_from_seeds(
            seeds, data, k=k, rng_seed=rng_seed
        )
        model = kmeans.fit(data, centroids, config, initial_labels=labels)

    with open(os.path.join(args.output_dir, "model.json"), "w") as fh:
        fh.write(kmeans.model_to_json(model, config))
        fh.write("\n")
    if seeds is not None:
        seeding.seed_set_to_jsonl(seeds, os.path.join(args.output_dir, "seeds.jsonl"))
    if query_budget is not None:
        write_query_log(query_budget, os.path.join(args.output_dir, "queries.jsonl"))
    print(f"trained {variant} model: k={model.k}, "
          f"inertia={model.inertia:.6g}, iterations={model.iterations_run}")
    return 0


def cmd_evaluate(args) -> int:
    _require(args, "model", "vectors")
    with open(args.model) as fh:
        model = kmeans.model_from_json(fh.read())
    if model.cluster_labels is None:
        raise ValueError(f"{args.model}: model has no cluster labels to predict with")
    data = _load_labeled_vectors(args.vectors)
    _, predicted = kmeans.predict_many(model, data.points)
    report = evaluation.classification_report(predicted, data.labels,
                                              data.label_universe)
    table = evaluation.format_report_table(report)
    print(table)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(evaluation.report_to_dict(report), fh, sort_keys=True)
            fh.write("\n")
    return 0


def cmd_experiment(args) -> int:
    _require(args, "vectors", "output_dir")
    data = _load_labeled_vectors(args.vectors)
    k = len(data.label_universe)
    config = _fit_config(args, k)
    ratios = args.ratios if args.ratios is not None else [
        0.01, 0.02, 0.03, 0.04, 0.05, 0.075, 0.10,
    ]
    trials = args.trials if args.trials is not None else 10
    penalty = args.penalty if args.penalty is not None else seeding.DEFAULT_PENALTY

    os.makedirs(args.output_dir, exist_ok=True)
    results = {}
    for variant in ("semi", "active"):
        results[variant] = evaluation.run_experiment(
            data, variant, ratios, trials, penalty=penalty, config=config
        )
        evaluation.results_to_csv(
            results[variant], os.path.join(args.output_dir, f"{variant}.csv")
        )
    summary = evaluation.results_summary(results, k)
    with open(os.path.join(args.output_dir, "summary.json"), "w") as fh:
        json.dump(summary, fh, sort_keys=True)
        fh.write("\n")

    print(f"k={k}  max_gini={summary['max_gini']:.4f}  penalty={penalty}")
    header = f"{'ratio':>7} {'semi_acc':>9} {'act_acc':>9} {'semi_gini':>10} {'act_gini':>9}"
    print(header)
    for row in summary["ratios"]:
        marker = " *" if row.get("active_beats_semi") else ""
        print(f"{row['ratio']:>7.3f} {row['semi_accuracy']:>9.4f} "
              f"{row['active_accuracy']:>9.4f} {row['semi_gini']:>10.4f} "
              f"{row['active_gini']:>9.4f}{marker}")
    print("(* = active accuracy >= semi accuracy)")
    return 0


def _demo_mixture(rng_seed: int) -> Dataset:
    means = [[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]]
    return evaluation.make_gaussian_mixture(
        means, [1.0, 1.0, 1.0], 67, rng_seed=rng_seed
    )


def cmd_demo(args) -> int:
    _require(args, "output_dir")
    rng_seed = args.rng_seed if args.rng_seed is not None else 0
    os.makedirs(args.output_dir, exist_ok=True)
    out = lambda name: os.path.join(args.output_dir, name)

    if args.kind == "fig1":
        # 3 unlabeled blobs clustered from scratch, converged centroids saved
        data = _demo_mixture(rng_seed)
        config = kmeans.FitConfig(k=3, rng_seed=rng_seed)
        model = kmeans.fit_unsupervised(data, config)
        save_dataset_csv(data, out("points.csv"))
        _write_centroids(model.centroids, model.cluster_labels, out("centroids.csv"))
        print(f"fig1: inertia {model.inertia_history[0]:.4g} -> {model.inertia:.4g} "
              f"in {model.iterations_run} iterations")
    elif args.kind == "fig2":
        # 8 labeled points (2/4/2 across 3 classes); centroids are class means
        data = _demo_mixture(rng_seed)
        per_class = {"0": 2, "1": 4, "2": 2}
        entries = []
        for label, want in per_class.items():
            indices = [i for i, y in enumerate(data.labels) if y == label][:want]
            entries.extend(
                seeding.SeedEntry(data.ids[i], data.points[i], label) for i in indices
            )
        seeds = seeding.SeedSet(entries=tuple(entries))
        centroids, labels = seeding.centroids_from_seeds(seeds, data, k=3,
                                                         rng_seed=rng_seed)
        save_dataset_csv(data, out("points.csv"))
        seeding.seed_set_to_jsonl(seeds, out("seeds.jsonl"))
        _write_centroids(centroids, labels, out("centroids.csv"))
        print(f"fig2: {len(seeds)} labeled points -> {len(labels)} initial centroids")
    elif args.kind == "fig3":
        # 200 points, 10 penalized min-max queries
        means = [[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]]
        data = evaluation.make_gaussian_mixture(
            means, [1.0, 1.0, 1.0], [67, 67, 66], rng_seed=rng_seed
        )
        oracle = GroundTruthOracle(data, limit=10)
        seeds = seeding.build_seed_set(data, 10, oracle, kind="inverse_sqrt",
                                       rng_seed=rng_seed)
        save_dataset_csv(data, out("points.csv"))
        seeding.seed_set_to_jsonl(seeds, out("seeds.jsonl"))
        print(f"fig3: 10 queries over {len(data)} points, "
              f"seed Gini {evaluation.gini_index(seeds.labels):.4f}")
    else:
        raise UsageError(f"unknown demo kind: {args.kind!r}")
    return 0


def _write_centroids(centroids, labels, path) -> None:
    data = Dataset(
        points=np.asarray(centroids),
        ids=tuple(f"c{j}" for j in range(len(centroids))),
        labels=tuple(labels) if labels is not None else (None,) * len(centroids),
    )
    save_dataset_csv(data, path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aqkmeans",
        description="Semi-supervised and active-query K-means experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags override it")
        p.add_argument("--rng-seed", dest="rng_seed", type=int)
        p.add_argument("--threads", type=int, default=None,
                       help="bound internal parallelism (results never change)")

    p = sub.add_parser("vectorize", help="TF-IDF + PCA a tokenized JSONL corpus")
    common(p)
    p.add_argument("--corpus")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--pca-level", dest="pca_level", type=float)
    p.set_defaults(func=cmd_vectorize,
                   config_keys={"corpus", "output_dir", "pca_level", "rng_seed"})

    p = sub.add_parser("train", help="fit an unsupervised/semi/active model")
    common(p)
    p.add_argument("--vectors")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--variant", choices=["unsupervised", "semi", "active"],
                   default="unsupervised")
    p.add_argument("--k", type=int)
    p.add_argument("--ratio", type=float)
    p.add_argument("--penalty", choices=list(seeding.PENALTY_KINDS))
    p.add_argument("--oracle", choices=["simulated", "interactive"],
                   default="simulated")
    p.add_argument("--corpus", help="JSONL corpus shown by the interactive oracle")
    p.add_argument("--max-iterations", dest="max_iterations", type=int)
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_train, config_keys={
        "vectors", "output_dir", "variant", "k", "ratio", "penalty", "oracle",
        "corpus", "max_iterations", "tolerance", "rng_seed",
    })

    p = sub.add_parser("evaluate", help="score a trained model on labeled vectors")
    common(p)
    p.add_argument("--model")
    p.add_argument("--vectors")
    p.add_argument("--output", help="write the report as JSON here")
    p.set_defaults(func=cmd_evaluate,
                   config_keys={"model", "vectors", "output", "rng_seed"})

    p = sub.add_parser("experiment", help="ratio sweep comparing semi vs active")
    common(p)
    p.add_argument("--vectors")
    p.add_argument("--output-dir", dest="output_dir")
    p.add_argument("--ratios", type=float, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--penalty", choices=list(seeding.PENALTY_KINDS))
    p.add_argument("--max-iterations", dest="max_iterations", type=int)
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_experiment, config_keys={
        "vectors", "output_dir", "ratios", "trials", "penalty",
        "max_iterations", "tolerance", "rng_seed",
    })

    p = sub.add_parser("demo", help="regenerate the synthetic illustration data")
    common(p)
    p.add_argument("--kind", choices=["fig1", "fig2", "fig3"], required=True)
    p.add_argument("--output-dir", dest="output_dir")
    p.set_defaults(func=cmd_demo, config_keys={"kind", "output_dir", "rng_seed"})

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _resolve(args, args.config_keys)
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError, EmptyInput) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OracleError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
