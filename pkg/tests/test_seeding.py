import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aqkmeans.evaluation import gini_index, make_gaussian_mixture
from aqkmeans.oracle import GroundTruthOracle
from aqkmeans.seeding import (
    DEFAULT_PENALTY,
    PENALTY_KINDS,
    SeedEntry,
    SeedSet,
    build_seed_set,
    centroids_from_seeds,
    min_penalized_distance,
    penalized_distance,
    phi,
    random_seed_subset,
    seed_set_from_jsonl,
    seed_set_to_jsonl,
    select_next,
)
from aqkmeans.vecspace import Dataset, EmptyInput, euclidean_distance


def line_dataset(values, labels=None):
    values = list(values)
    if labels is None:
        labels = ["u"] * len(values)
    return Dataset(
        points=np.array([[float(v)] for v in values]),
        ids=tuple(f"p{i}" for i in range(len(values))),
        labels=tuple(labels),
    )


def seed_set(*triples):
    return SeedSet(entries=tuple(
        SeedEntry(pid, np.asarray(vec, dtype=float), label)
        for pid, vec, label in triples
    ))


class TestPhi:
    def test_inverse_sqrt_of_4(self):
        assert phi("inverse_sqrt", 4) == 0.5

    def test_inverse_at_one(self):
        assert phi("inverse", 1) == 1.0

    def test_inverse_exp(self):
        assert phi("inverse_exp", 2) == pytest.approx(math.exp(-2), abs=1e-4)

    def test_shifted_log(self):
        # 1/log(x) is undefined at 1; the log kind is 1/ln(x+1)
        assert phi("inverse_log", 1) == pytest.approx(1 / math.log(2))

    def test_count_below_one(self):
        with pytest.raises(ValueError):
            phi("inverse", 0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            phi("bogus", 1)

    @given(st.sampled_from(PENALTY_KINDS), st.integers(min_value=1, max_value=100))
    def test_positive_and_non_increasing(self, kind, count):
        assert phi(kind, count) > 0
        assert phi(kind, count + 1) <= phi(kind, count)


class TestPenalizedDistance:
    def test_unpenalized_base_case(self):
        entry = SeedEntry("s", np.array([0.0]), "a")
        raw = euclidean_distance([0.0], [3.0])
        assert penalized_distance(entry, [3.0], {"a": 1}, "inverse") == raw

    def test_inverse_sqrt_count_4(self):
        entry = SeedEntry("s", np.array([0.0]), "a")
        assert penalized_distance(entry, [2.0], {"a": 4}, "inverse_sqrt") == 1.0

    @given(
        st.sampled_from(PENALTY_KINDS),
        st.integers(min_value=1, max_value=9),
        st.floats(min_value=-50, max_value=50),
        st.floats(min_value=-50, max_value=50),
    )
    def test_compositional(self, kind, count, a, b):
        entry = SeedEntry("s", np.array([a]), "y")
        expected = phi(kind, count) * euclidean_distance([a], [b])
        got = penalized_distance(entry, [b], {"y": count}, kind)
        assert got == pytest.approx(expected, abs=1e-12)


class TestMinPenalizedDistance:
    def test_single_seed(self):
        seeds = seed_set(("s0", [0.0], "a"))
        assert min_penalized_distance([3.0], seeds, "inverse") == 3.0

    def test_candidate_on_seed(self):
        seeds = seed_set(("s0", [1.0], "a"), ("s1", [5.0], "b"))
        assert min_penalized_distance([5.0], seeds, "inverse_sqrt") == 0.0

    def test_matches_exhaustive_scan(self):
        rng = np.random.default_rng(0)
        seeds = seed_set(*[
            (f"s{i}", rng.normal(size=3), f"y{i % 3}") for i in range(20)
        ])
        candidate = rng.normal(size=3)
        counts = seeds.label_counts
        expected = min(
            phi("inverse", counts[e.label]) * euclidean_distance(e.vector, candidate)
            for e in seeds.entries
        )
        assert min_penalized_distance(candidate, seeds, "inverse") == expected

    def test_empty_seeds(self):
        with pytest.raises(EmptyInput):
            min_penalized_distance([0.0], SeedSet(entries=()), "inverse")


def brute_force_select(seeds, unselected, kind):
    """Oracle: exhaustive double loop with smallest-id tie-breaking."""
    counts = seeds.label_counts
    best_id, best_value = None, -math.inf
    taken = {e.id for e in seeds.entries}
    for pid, vec in zip(unselected.ids, unselected.points):
        if pid in taken:
            continue
        value = min(
            phi(kind, counts[e.label]) * euclidean_distance(e.vector, vec)
            for e in seeds.entries
        )
        if value > best_value or (value == best_value and pid < best_id):
            best_id, best_value = pid, value
    return best_id


class TestSelectNext:
    def test_farthest_point(self):
        data = line_dataset([0, 1, 10])
        seeds = seed_set(("p0", [0.0], "u"))
        assert select_next(seeds, data, "inverse_sqrt") == "p2"

    def test_hand_evaluated_two_seeds(self):
        # seeds at -1 and +1, distinct labels with count 1 each;
        # candidate 0 has min distance 1, candidate 0.5 has min distance 0.5
        data = Dataset(
            points=np.array([[0.0], [0.5]]),
            ids=("a", "b"),
            labels=("u", "u"),
        )
        seeds = seed_set(("s-", [-1.0], "neg"), ("s+", [1.0], "pos"))
        assert select_next(seeds, data, "inverse") == "a"

    def test_never_returns_selected(self):
        data = line_dataset([0, 1, 2])
        seeds = seed_set(("p0", [0.0], "u"), ("p2", [2.0], "u"))
        assert select_next(seeds, data, "inverse") == "p1"

    def test_empty_unselected(self):
        data = line_dataset([0])
        seeds = seed_set(("p0", [0.0], "u"))
        with pytest.raises(EmptyInput):
            select_next(seeds, data, "inverse")

    def test_matches_brute_force_all_kinds(self):
        rng = np.random.default_rng(1)
        for trial in range(20):
            n = int(rng.integers(6, 30))
            data = Dataset(
                points=rng.normal(size=(n, 2)),
                ids=tuple(f"p{i:03d}" for i in range(n)),
                labels=tuple(str(rng.integers(0, 3)) for _ in range(n)),
            )
            n_seeds = int(rng.integers(1, 5))
            indices = rng.choice(n, size=n_seeds, replace=False)
            seeds = seed_set(*[
                (data.ids[i], data.points[i], data.labels[i]) for i in indices
            ])
            for kind in PENALTY_KINDS:
                assert select_next(seeds, data, kind) == brute_force_select(
                    seeds, data, kind
                )


class TestBuildSeedSet:
    def blob_data(self, rng_seed=0):
        return make_gaussian_mixture(
            [[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]], [1.0] * 3, [67, 67, 66],
            rng_seed=rng_seed,
        )

    def test_budget_one_is_single_query(self):
        data = self.blob_data()
        oracle = GroundTruthOracle(data, limit=5)
        seeds = build_seed_set(data, 1, oracle, rng_seed=3)
        assert len(seeds) == 1
        assert oracle.budget.used == 1

    def test_consumes_exactly_budget_queries(self):
        data = self.blob_data()
        oracle = GroundTruthOracle(data, limit=10)
        seeds = build_seed_set(data, 10, oracle, rng_seed=3)
        assert len(seeds) == 10
        assert oracle.budget.used == 10

    def test_deterministic_replay(self):
        data = self.blob_data()
        a = build_seed_set(data, 8, GroundTruthOracle(data, 8), rng_seed=5)
        b = build_seed_set(data, 8, GroundTruthOracle(data, 8), rng_seed=5)
        assert [e.id for e in a.entries] == [e.id for e in b.entries]
        assert a.labels == b.labels

    def test_agrees_with_select_next_step_by_step(self):
        data = self.blob_data(rng_seed=2)
        oracle = GroundTruthOracle(data, limit=6)
        seeds = build_seed_set(data, 6, oracle, kind="inverse_sqrt", rng_seed=7)
        partial = SeedSet(entries=seeds.entries[:1])
        for expected in seeds.entries[1:]:
            picked = select_next(partial, data, "inverse_sqrt")
            assert picked == expected.id
            partial = partial.extended(expected)

    def test_three_cluster_coverage(self):
        # 200 points, 3 clusters, 10 queries: all classes covered nearly always
        covered = 0
        for seed in range(100):
            data = self.blob_data(rng_seed=seed)
            seeds = build_seed_set(
                data, 10, GroundTruthOracle(data, 10), kind="inverse_sqrt",
                rng_seed=seed,
            )
            if len(set(seeds.labels)) == 3:
                covered += 1
        assert covered >= 95

    def test_budget_exceeds_dataset(self):
        data = line_dataset([0, 1])
        with pytest.raises(ValueError):
            build_seed_set(data, 3, GroundTruthOracle(data, 3))

    def test_single_class_degenerates_to_farthest_first(self):
        # uniform labels: the phi factor scales all distances equally, so the
        # selection order matches plain min-max for every penalty kind
        rng = np.random.default_rng(9)
        data = Dataset(
            points=rng.normal(size=(30, 2)),
            ids=tuple(f"p{i:02d}" for i in range(30)),
            labels=("only",) * 30,
        )
        orders = []
        for kind in PENALTY_KINDS:
            seeds = build_seed_set(data, 6, GroundTruthOracle(data, 6),
                                   kind=kind, rng_seed=11)
            orders.append([e.id for e in seeds.entries])
        assert all(order == orders[0] for order in orders)


class TestRandomSeedSubset:
    def blob_data(self):
        return make_gaussian_mixture([[0.0], [10.0]], [1.0, 1.0], 50, rng_seed=1)

    def test_full_fraction_is_whole_dataset(self):
        data = self.blob_data()
        seeds = random_seed_subset(data, 1.0, rng_seed=0)
        assert len(seeds) == len(data)
        assert seeds.ids == set(data.ids)

    def test_tiny_fraction_rounds_up_to_one(self):
        data = self.blob_data()
        seeds = random_seed_subset(data, 0.001, rng_seed=0)
        assert len(seeds) == 1

    def test_fraction_out_of_range(self):
        with pytest.raises(ValueError):
            random_seed_subset(self.blob_data(), 0.0)

    def test_sampling_matches_class_priors(self):
        # mean sampled class-0 share over many seeds stays within 3 sigma
        data = self.blob_data()
        count = round(0.1 * len(data))
        shares = []
        for seed in range(200):
            seeds = random_seed_subset(data, 0.1, rng_seed=seed)
            shares.append(seeds.labels.count("0") / count)
        sigma = math.sqrt(0.5 * 0.5 / count) / math.sqrt(len(shares))
        assert abs(np.mean(shares) - 0.5) < 3 * sigma

    def test_unlabeled_point_rejected(self):
        data = Dataset(points=np.zeros((2, 1)), ids=("a", "b"),
                       labels=(None, None))
        with pytest.raises(ValueError):
            random_seed_subset(data, 1.0)


class TestCentroidsFromSeeds:
    def demo_data(self):
        return make_gaussian_mixture(
            [[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]], [1.0] * 3, 20, rng_seed=4
        )

    def test_two_four_two_initialization(self):
        # 8 labeled points: 2 of class 0, 4 of class 1, 2 of class 2
        data = self.demo_data()
        picks = {"0": 2, "1": 4, "2": 2}
        entries = []
        for label, want in picks.items():
            idx = [i for i, y in enumerate(data.labels) if y == label][:want]
            entries.extend(
                SeedEntry(data.ids[i], data.points[i], label) for i in idx
            )
        seeds = SeedSet(entries=tuple(entries))
        centroids, labels = centroids_from_seeds(seeds, data, k=3)
        assert labels == ("0", "1", "2")
        for j, label in enumerate(labels):
            members = [e.vector for e in entries if e.label == label]
            assert centroids[j] == pytest.approx(np.mean(members, axis=0))

    def test_one_seed_per_class(self):
        data = self.demo_data()
        entries = []
        for label in data.label_universe:
            i = data.labels.index(label)
            entries.append(SeedEntry(data.ids[i], data.points[i], label))
        seeds = SeedSet(entries=tuple(entries))
        centroids, _ = centroids_from_seeds(seeds, data, k=3)
        for j, e in enumerate(entries):
            assert np.array_equal(centroids[j], e.vector)

    def test_missing_class_gets_random_point_deterministically(self):
        data = self.demo_data()
        i = data.labels.index("0")
        seeds = SeedSet(entries=(SeedEntry(data.ids[i], data.points[i], "0"),))
        a, labels = centroids_from_seeds(seeds, data, k=3, rng_seed=6)
        b, _ = centroids_from_seeds(seeds, data, k=3, rng_seed=6)
        assert np.array_equal(a, b)
        assert labels == ("0", "1", "2")
        for j in (1, 2):
            assert any(np.array_equal(a[j], p) for p in data.points)

    def test_k_must_match_universe(self):
        data = self.demo_data()
        seeds = SeedSet(entries=(SeedEntry("x", np.zeros(2), "0"),))
        with pytest.raises(ValueError):
            centroids_from_seeds(seeds, data, k=2)


class TestSeedSetInvariants:
    @given(st.lists(st.sampled_from("abc"), min_size=1, max_size=15))
    def test_label_counts_is_histogram(self, labels):
        entries = tuple(
            SeedEntry(i, np.zeros(1), y) for i, y in enumerate(labels)
        )
        seeds = SeedSet(entries=entries)
        counts = seeds.label_counts
        assert sum(counts.values()) == len(seeds)
        assert all(c >= 1 for c in counts.values())
        assert counts == {y: labels.count(y) for y in set(labels)}

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValueError):
            SeedSet(entries=(
                SeedEntry("a", np.zeros(1), "x"),
                SeedEntry("a", np.zeros(1), "y"),
            ))

    def test_active_gini_beats_random_on_average(self):
        data = make_gaussian_mixture(
            [[0.0, 0.0], [8.0, 0.0], [4.0, 7.0]], [1.0] * 3, [67, 67, 66],
            rng_seed=0,
        )
        active, random_ = [], []
        for seed in range(30):
            s = build_seed_set(data, 10, GroundTruthOracle(data, 10),
                               kind=DEFAULT_PENALTY, rng_seed=seed)
            active.append(gini_index(s.labels))
            r = random_seed_subset(data, 10 / len(data), rng_seed=seed)
            random_.append(gini_index(r.labels))
        assert np.mean(active) >= np.mean(random_)


class TestSerialization:
    def test_jsonl_round_trip_preserves_order(self, tmp_path):
        data = line_dataset([0, 1, 2, 3], labels=list("abab"))
        seeds = seed_set(
            ("p2", [2.0], "a"), ("p0", [0.0], "b"), ("p3", [3.0], "a")
        )
        path = tmp_path / "seeds.jsonl"
        seed_set_to_jsonl(seeds, path)
        loaded = seed_set_from_jsonl(path, data)
        assert [e.id for e in loaded.entries] == ["p2", "p0", "p3"]
        assert loaded.labels == ["a", "b", "a"]
