import numpy as np
import pytest
from scipy import stats

from src.circuit.parser import load_circuit, parse_circuit
from src.contraction.cost import find_order
from src.contraction.graph import ComputeGraph
from src.sampling.analysis import (
    empirical_mse,
    essential_error,
    expected_error,
    optimal_error,
    uniform_error,
)
from src.sampling.estimator import SamplingPlan, estimate, run_trials, sample_terms
from src.sampling.weights import (
    compute_weights,
    default_narrow,
    essential_probabilities,
    narrow_norms,
    optimal_probabilities,
    sampling_probabilities,
    uniform_probabilities,
)
from src.utils.errors import SamplingError
from src.utils.rng import make_rng
from tests.conftest import SAMPLE_DATA, CutInstance, random_entries

# qubit 1 carries |1> across the cut, so only the I and Z terms survive
CLASSICAL_WIRE = "qubits 3; x 0; cx 0 1; cx 1 2"


@pytest.fixture(scope="module")
def concentrated():
    return CutInstance(parse_circuit(CLASSICAL_WIRE), (0, 1), 2)


@pytest.fixture(scope="module")
def bv8():
    return CutInstance(load_circuit(f"{SAMPLE_DATA}/bv8.circuit"), (0, 0, 1, 1), 2)


def assert_unbiased(estimates, truth, z=5.0):
    stacked = np.stack(estimates)
    gap = np.abs(stacked.mean(axis=0) - truth)
    spread = stats.sem(stacked, axis=0)
    noisy = spread > 1e-14
    assert np.all(gap[noisy] <= z * spread[noisy])
    assert np.all(gap[~noisy] <= 1e-9)


class TestWeights:
    def test_uncut_circuit_has_one_term(self):
        instance = CutInstance(parse_circuit("qubits 2; h 0; cx 0 1"), (0,), 1)
        weights = compute_weights(instance.graph, instance.entries)
        assert weights.n_terms == 1
        assert weights.products[0] == pytest.approx(np.linalg.norm(instance.truth))

    def test_term_norm_is_product_of_entry_norms(self, toy_instance):
        weights = compute_weights(toy_instance.graph, toy_instance.entries)
        assert weights.n_terms == 16
        # first cut is the most significant digit
        k = 4 * 2 + 3
        expected = np.linalg.norm(toy_instance.entries[0][2, 3]) * np.linalg.norm(toy_instance.entries[1][2, 3])
        assert weights.products[k] == pytest.approx(expected)

    def test_self_edge_takes_the_diagonal(self, rng):
        graph = ComputeGraph.from_spec({"nodes": [{"output_dim": 2}, {"output_dim": 4}], "edges": [[0, 0], [0, 1]]})
        entries = random_entries(graph, rng)
        weights = compute_weights(graph, entries)
        assert weights.n_terms == 16
        k = 4 * 1 + 2
        expected = np.linalg.norm(entries[0][1, 1, 2]) * np.linalg.norm(entries[1][2])
        assert weights.products[k] == pytest.approx(expected)

    def test_concentrated_weights(self, concentrated):
        weights = compute_weights(concentrated.graph, concentrated.entries)
        np.testing.assert_allclose(weights.products, [2 ** -0.5, 0, 0, 2 ** -0.5], atol=1e-12)
        np.testing.assert_allclose(optimal_probabilities(weights), [0.5, 0, 0, 0.5], atol=1e-12)

    def test_optimal_probabilities(self):
        np.testing.assert_allclose(optimal_probabilities(np.array([3.0, 1.0])), [0.75, 0.25])
        with pytest.raises(SamplingError):
            optimal_probabilities(np.zeros(4))

    def test_uniform_probabilities(self):
        np.testing.assert_allclose(uniform_probabilities(16), np.full(16, 1 / 16))

    def test_essential_uses_one_subcircuit(self, toy_instance):
        weights = compute_weights(toy_instance.graph, toy_instance.entries)
        narrow = default_narrow(toy_instance.graph)
        q = essential_probabilities(toy_instance.graph, weights, narrow)
        norms = narrow_norms(toy_instance.graph, weights, narrow)
        np.testing.assert_allclose(q, norms / norms.sum())

    def test_unknown_sampler(self, toy_instance):
        weights = compute_weights(toy_instance.graph, toy_instance.entries)
        with pytest.raises(SamplingError):
            sampling_probabilities("stratified", toy_instance.graph, weights)


class TestSampler:
    def test_single_term_takes_every_sample(self):
        plan = SamplingPlan(samples=37, q=np.array([1.0]))
        assert sample_terms(plan, make_rng(0)).tolist() == [37]

    def test_seeded(self):
        q = np.array([0.1, 0.2, 0.3, 0.4])
        first = sample_terms(SamplingPlan(samples=500, q=q), make_rng(9))
        second = sample_terms(SamplingPlan(samples=500, q=q), make_rng(9))
        np.testing.assert_array_equal(first, second)

    def test_frequencies_concentrate(self):
        counts = sample_terms(SamplingPlan(samples=100_000, q=np.array([0.75, 0.25])), make_rng(3))
        assert counts.sum() == 100_000
        assert counts[0] / 100_000 == pytest.approx(0.75, abs=0.01)


class TestEstimator:
    def test_terms_add_up_to_the_distribution(self, toy_instance):
        plan = find_order(toy_instance.graph)
        total = 0.0
        for k in range(16):
            one_hot = np.eye(16)[k]
            single = SamplingPlan(samples=1, q=one_hot, counts=one_hot.astype(int))
            total = total + estimate(toy_instance.graph, toy_instance.entries, single, plan)
        np.testing.assert_allclose(total, toy_instance.truth, rtol=0, atol=1e-12)

    def test_full_enumeration_is_exact(self, toy_instance):
        plan = SamplingPlan(samples=16, q=uniform_probabilities(16), counts=np.ones(16, dtype=int))
        values = estimate(toy_instance.graph, toy_instance.entries, plan, find_order(toy_instance.graph))
        np.testing.assert_allclose(values, toy_instance.truth, rtol=0, atol=1e-12)

    def test_needs_samples(self, toy_instance):
        with pytest.raises(SamplingError):
            estimate(
                toy_instance.graph, toy_instance.entries,
                SamplingPlan(samples=4, q=uniform_probabilities(16)), find_order(toy_instance.graph),
            )

    def test_bv_optimal_is_unbiased(self, bv8):
        weights = compute_weights(bv8.graph, bv8.entries)
        report, estimates = run_trials(
            bv8.graph, bv8.entries, find_order(bv8.graph), weights, optimal_probabilities(weights),
            samples=64, trials=200, seed=21, sampler="optimal", truth=bv8.truth,
        )
        assert report.trials == 200
        assert_unbiased(estimates, bv8.truth)

    @pytest.mark.parametrize("sampler", ["uniform", "essential", "optimal"])
    def test_mse_matches_closed_form(self, toy_instance, sampler):
        graph, entries, truth = toy_instance.graph, toy_instance.entries, toy_instance.truth
        weights = compute_weights(graph, entries)
        q = sampling_probabilities(sampler, graph, weights)
        report, estimates = run_trials(
            graph, entries, find_order(graph), weights, q,
            samples=16, trials=500, seed=1234, sampler=sampler, truth=truth,
        )
        closed = expected_error(q, weights, 16, float(np.sum(truth ** 2)))
        assert report.expected_error == pytest.approx(closed)
        assert abs(report.empirical_mse - closed) <= 3 * report.mse_standard_error
        assert_unbiased(estimates, truth)

    def test_few_distinct_terms_on_concentrated_instance(self, concentrated):
        graph, entries, truth = concentrated.graph, concentrated.entries, concentrated.truth
        weights = compute_weights(graph, entries)
        report, _ = run_trials(
            graph, entries, find_order(graph), weights, optimal_probabilities(weights),
            samples=2**10, trials=500, seed=5, sampler="optimal", truth=truth,
        )
        assert report.mean_distinct_terms <= 8
        assert report.q_max == pytest.approx(0.5)
        assert report.empirical_mse == pytest.approx(report.optimal_error, rel=0.3)


class TestClosedForms:
    def test_named_forms_match_generic(self, toy_instance):
        graph, truth = toy_instance.graph, toy_instance.truth
        weights = compute_weights(graph, toy_instance.entries)
        p_norm_sq = float(np.sum(truth ** 2))
        assert uniform_error(weights, 10, p_norm_sq) == pytest.approx(
            expected_error(uniform_probabilities(16), weights, 10, p_norm_sq), rel=1e-12
        )
        assert optimal_error(weights, 10, p_norm_sq) == pytest.approx(
            expected_error(optimal_probabilities(weights), weights, 10, p_norm_sq), rel=1e-12
        )
        q = essential_probabilities(graph, weights)
        assert essential_error(graph, weights, 10, p_norm_sq=p_norm_sq) == pytest.approx(
            expected_error(q, weights, 10, p_norm_sq), rel=1e-12
        )

    def test_essential_double_sum(self, toy_instance):
        graph = toy_instance.graph
        weights = compute_weights(graph, toy_instance.entries)
        norms = narrow_norms(graph, weights, default_narrow(graph))
        live = weights.squared > 0
        direct = sum(
            norms[j] / norms[k] * weights.squared[k]
            for k in np.flatnonzero(live) for j in range(weights.n_terms)
        )
        assert essential_error(graph, weights, 1) == pytest.approx(direct, rel=1e-12)

    def test_optimal_is_smallest(self, toy_instance, rng):
        weights = compute_weights(toy_instance.graph, toy_instance.entries)
        p_norm_sq = float(np.sum(toy_instance.truth ** 2))
        best = optimal_error(weights, 100, p_norm_sq)
        assert best <= uniform_error(weights, 100, p_norm_sq)
        q_opt = optimal_probabilities(weights)
        for _ in range(100):
            q = q_opt * np.exp(rng.normal(0, 0.5, size=q_opt.shape))
            q = q / q.sum()
            assert best <= expected_error(q, weights, 100, p_norm_sq) * (1 + 1e-12)

    def test_doubling_samples_halves_error(self, toy_instance):
        weights = compute_weights(toy_instance.graph, toy_instance.entries)
        p_norm_sq = float(np.sum(toy_instance.truth ** 2))
        for q in (uniform_probabilities(16), optimal_probabilities(weights)):
            assert expected_error(q, weights, 200, p_norm_sq) == expected_error(q, weights, 100, p_norm_sq) / 2

    def test_zero_probability_on_live_term(self, toy_instance):
        weights = compute_weights(toy_instance.graph, toy_instance.entries)
        q = np.zeros(16)
        q[0] = 1.0
        with pytest.raises(SamplingError):
            expected_error(q, weights, 10)

    def test_empirical_mse(self):
        truth = np.array([0.5, 0.5])
        mse, spread = empirical_mse([np.array([0.5, 0.5]), np.array([0.7, 0.3])], truth)
        assert mse == pytest.approx(0.04)
        assert spread == pytest.approx(0.04)
