"""Penalized min-max seed selection, step by step.

200 points from 3 clusters, 10 label queries. After a random first pick,
each round chooses the point maximizing its minimum penalty-scaled
distance to the seeds already chosen; the 1/sqrt(count) factor discounts
distances to over-represented labels so selection drifts toward classes
that are still missing. Compare the label histogram and Gini-Index of the
queried seeds against a same-sized random sample.

Run: python3 demos/02_penalized_minmax_seeding.py
"""

from collections import Counter

from aqkmeans.evaluation import gini_index, make_gaussian_mixture, max_gini
from aqkmeans.oracle import GroundTruthOracle
from aqkmeans.seeding import build_seed_set, random_seed_subset

data = make_gaussian_mixture(
    cluster_means=[[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]],
    cluster_stddevs=[1.0, 1.0, 1.0],
    points_per_cluster=[67, 67, 66],
    rng_seed=6,
)

oracle = GroundTruthOracle(data, limit=10)
seeds = build_seed_set(data, budget=10, oracle=oracle, kind="inverse_sqrt",
                       rng_seed=6)

print("query order (id, revealed label, running counts):")
counts = Counter()
for entry in seeds.entries:
    counts[entry.label] += 1
    running = ", ".join(f"{y}:{c}" for y, c in sorted(counts.items()))
    print(f"  {entry.id}  ->  class {entry.label}   [{running}]")

random_seeds = random_seed_subset(data, 10 / len(data), rng_seed=6)

print(f"\nGini-Index of the 10 queried seeds: {gini_index(seeds.labels):.4f}")
print(f"Gini-Index of 10 random seeds:      {gini_index(random_seeds.labels):.4f}")
print(f"theoretical ceiling for 3 classes:  {max_gini(3):.4f}")
