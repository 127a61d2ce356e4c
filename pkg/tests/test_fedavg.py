import numpy as np
import pytest

from agifl.data import partition, synth_blobs
from agifl.fedavg import (FlConfig, FlState, aggregate, cohort_size,
                          run_round, select_clients)
from agifl.models import Hyperparams, ModelSpec, init_model, local_train
from agifl.oracles import weighted_mean_direct
from agifl.seeding import child_seed, rng


class TestSelectClients:
    def test_paper_cohort_two_of_hundred(self):
        selected = select_clients(100, 0.02, rng(0, "sel"))
        assert len(selected) == 2
        assert len(set(selected.tolist())) == 2

    def test_full_participation(self):
        selected = select_clients(7, 1.0, rng(1, "sel"))
        assert np.array_equal(np.sort(selected), np.arange(7))

    def test_minimum_one_client(self):
        assert cohort_size(10, 0.05) == 1
        assert len(select_clients(10, 0.05, rng(2, "sel"))) == 1

    def test_deterministic_per_stream(self):
        a = select_clients(50, 0.1, rng(3, "sel"))
        b = select_clients(50, 0.1, rng(3, "sel"))
        assert np.array_equal(a, b)

    def test_selection_is_uniform(self):
        # frequency sanity: every user selected about m/U of the time
        users, fraction, draws = 20, 0.25, 4000
        counts = np.zeros(users)
        for i in range(draws):
            counts[select_clients(users, fraction, rng(9, i, "sel"))] += 1
        freqs = counts / draws
        assert np.all(np.abs(freqs - 0.25) < 0.03)
        expected = draws * 0.25
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        assert chi2 < 43.82  # chi-square 0.999 quantile at 19 dof


class TestAggregate:
    def test_singleton_returns_input_exactly(self):
        w = np.random.default_rng(0).normal(size=11)
        assert np.array_equal(aggregate([(w, 17)]), w)

    def test_equal_weights_arithmetic_mean(self):
        out = aggregate([(np.array([0.0]), 5), (np.array([4.0]), 5)])
        assert out[0] == 2.0

    def test_hand_weighted_mean(self):
        out = aggregate([(np.array([0.0]), 1), (np.array([4.0]), 3)])
        assert out[0] == 3.0  # (0*1 + 4*3) / 4

    def test_matches_hand_rule_oracle(self):
        gen = np.random.default_rng(4)
        updates = [(gen.normal(size=6), int(n)) for n in gen.integers(1, 50, size=5)]
        expected = weighted_mean_direct([(list(w), n) for w, n in updates])
        np.testing.assert_allclose(aggregate(updates), expected, rtol=1e-12)

    def test_convex_hull_containment(self):
        gen = np.random.default_rng(5)
        for _ in range(200):
            k = int(gen.integers(2, 8))
            updates = [(gen.normal(size=4), int(gen.integers(1, 100)))
                       for _ in range(k)]
            stacked = np.stack([w for w, _ in updates])
            out = aggregate(updates)
            assert np.all(out >= stacked.min(axis=0))
            assert np.all(out <= stacked.max(axis=0))

    def test_count_scale_invariance(self):
        gen = np.random.default_rng(6)
        updates = [(gen.normal(size=5), int(n)) for n in (1, 2, 5)]
        scaled = [(w, 7 * n) for w, n in updates]
        assert np.array_equal(aggregate(updates), aggregate(scaled))

    def test_errors(self):
        with pytest.raises(ValueError):
            aggregate([])
        with pytest.raises(ValueError):
            aggregate([(np.zeros(3), 1), (np.zeros(4), 1)])
        with pytest.raises(ValueError):
            aggregate([(np.zeros(3), 0)])


def make_corpus(seed=0):
    return synth_blobs(num_classes=3, samples_per_class=40, input_dim=4,
                       spread=0.1, seed=seed)


class TestRunRound:
    def test_one_client_equals_sequential_sgd(self):
        data = make_corpus()
        spec = ModelSpec("logistic", input_dim=4, num_classes=3)
        config = FlConfig(num_users=1, fraction=1.0,
                          hyper=Hyperparams(local_epochs=2, batch_size=8),
                          max_rounds=5)
        shards = partition(data, 1, scheme="iid", seed=0)
        state = FlState(init_model(spec), 0, master_seed=123)
        for _ in range(5):
            state, _, _ = run_round(state, config, shards, spec, data)

        w = init_model(spec)
        idx = shards[0].sample_indices
        for rnd in range(5):
            w = local_train(w, data.features[idx], data.labels[idx], spec,
                            config.hyper, child_seed(123, rnd, 0, "train"))
        np.testing.assert_allclose(state.global_params, w, rtol=0, atol=1e-12)

    def test_identical_shards_and_seeds_aggregate_to_single_update(self):
        data = make_corpus()
        spec = ModelSpec("logistic", input_dim=4, num_classes=3)
        hyper = Hyperparams(local_epochs=1, batch_size=10)
        start = init_model(spec) + 0.1
        one = local_train(start, data.features, data.labels, spec, hyper, rng_seed=5)
        two = local_train(start, data.features, data.labels, spec, hyper, rng_seed=5)
        agg = aggregate([(one, data.num_samples), (two, data.num_samples)])
        assert np.array_equal(agg, one)

    def test_two_clients_match_manual_weighted_mean(self):
        data = make_corpus(seed=2)
        spec = ModelSpec("logistic", input_dim=4, num_classes=3)
        config = FlConfig(num_users=2, fraction=1.0,
                          hyper=Hyperparams(local_epochs=1, batch_size=7),
                          max_rounds=1)
        shards = partition(data, 2, scheme="iid", seed=1)
        state = FlState(init_model(spec), 0, master_seed=77)
        new_state, selected, updates = run_round(state, config, shards, spec, data)

        manual = []
        for user in selected:
            idx = shards[user].sample_indices
            w = local_train(state.global_params, data.features[idx],
                            data.labels[idx], spec, config.hyper,
                            child_seed(77, 0, int(user), "train"))
            manual.append((list(w), len(idx)))
        expected = weighted_mean_direct(manual)
        np.testing.assert_allclose(new_state.global_params, expected, rtol=1e-12)
        assert new_state.round_index == 1
        assert [n for _, n in updates] == [len(shards[u]) for u in selected]

    def test_round_is_deterministic(self):
        data = make_corpus(seed=3)
        spec = ModelSpec("logistic", input_dim=4, num_classes=3)
        config = FlConfig(num_users=5, fraction=0.4, max_rounds=1)
        shards = partition(data, 5, scheme="iid", seed=2)
        state = FlState(init_model(spec), 0, master_seed=9)
        a, sel_a, _ = run_round(state, config, shards, spec, data)
        b, sel_b, _ = run_round(state, config, shards, spec, data)
        assert np.array_equal(sel_a, sel_b)
        assert np.array_equal(a.global_params, b.global_params)

    def test_shard_count_must_match_users(self):
        data = make_corpus()
        spec = ModelSpec("logistic", input_dim=4, num_classes=3)
        config = FlConfig(num_users=3, fraction=1.0)
        shards = partition(data, 2, scheme="iid", seed=0)
        with pytest.raises(ValueError):
            run_round(FlState(init_model(spec), 0, 0), config, shards, spec, data)


class TestConfigValidation:
    def test_invalid_fraction(self):
        with pytest.raises(ValueError):
            FlConfig(num_users=10, fraction=0.0)
        with pytest.raises(ValueError):
            FlConfig(num_users=10, fraction=1.5)

    def test_invalid_users(self):
        with pytest.raises(ValueError):
            FlConfig(num_users=0)
