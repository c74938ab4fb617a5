"""Semi-supervised vs active-query K-means across label budgets.

A balanced 5-class Gaussian mixture is clustered twice per query ratio:
once seeding from a random labeled subset (semi), once from penalized
min-max queries (active). Each cell averages 10 seeded trials. The active
column's seed Gini climbs steadily toward the (k-1)/k ceiling while the
random column fluctuates.

Run: python3 demos/03_semi_vs_active_sweep.py   (about half a minute)
"""

import numpy as np

from aqkmeans.evaluation import make_gaussian_mixture, max_gini, run_experiment
from aqkmeans.kmeans import FitConfig

angles = 2 * np.pi * np.arange(5) / 5
means = 4.0 * np.stack([np.cos(angles), np.sin(angles)], axis=1)
train = make_gaussian_mixture(means, [1.6] * 5, 400, rng_seed=1)
test = make_gaussian_mixture(means, [1.6] * 5, 100, rng_seed=2)

ratios = [0.01, 0.02, 0.03, 0.05, 0.10]
config = FitConfig(k=5, rng_seed=0)
results = {
    variant: run_experiment(train, variant, ratios, trials=10,
                            config=config, test_data=test)
    for variant in ("semi", "active")
}

print(f"5 balanced classes, {len(train)} train / {len(test)} test points")
print(f"Gini ceiling max_gini(5) = {max_gini(5):.4f}\n")
print(f"{'ratio':>6} {'semi acc':>9} {'active acc':>11} "
      f"{'semi gini':>10} {'active gini':>12}")
for semi, active in zip(results["semi"], results["active"]):
    print(f"{semi.ratio:>6.2%} {semi.mean_accuracy:>9.4f} "
          f"{active.mean_accuracy:>11.4f} {semi.mean_gini:>10.4f} "
          f"{active.mean_gini:>12.4f}")
