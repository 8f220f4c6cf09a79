import numpy as np
import pytest

from src.circuit.parser import parse_circuit
from src.merge.bins import SubcircuitBins
from src.subsim.variants import enumerate_variants, variant_circuit, variant_terms
from tests.conftest import CutInstance

# Bell pair on qubits 0, 1, then qubit 1 drives qubit 2 across one cut
BELL = "qubits 3; h 0; cx 0 1; h 1; cx 1 2"


@pytest.fixture(scope="module")
def bell():
    return CutInstance(parse_circuit(BELL), (0, 1), 2)


class TestFragments:
    def test_layout(self, bell):
        measure_side, init_side = bell.fragments
        assert measure_side.width == 2
        assert measure_side.output_qubits == (0,)
        assert [r.role for r in measure_side.roles] == ["measure"]
        assert init_side.width == 2
        assert init_side.output_qubits == (1, 2)
        assert [(r.role, r.local_qubit) for r in init_side.roles] == [("init", 0)]

    def test_single_qubit_gate_follows_earlier_neighbor(self, bell):
        names = [g.name for g in bell.fragments[0].circuit.gates]
        assert names == ["h", "cx", "h"]
        assert [g.name for g in bell.fragments[1].circuit.gates] == ["cx"]


class TestVariants:
    def test_four_bases_per_cut(self, bell):
        variants = enumerate_variants(bell.fragments[1])
        assert [v.describe() for v in variants] == ["I", "X", "Y", "Z"]

    def test_init_weights(self, bell):
        init_side = bell.fragments[1]
        z = variant_terms(init_side, (3,))
        assert [(t.inits, t.weight) for t in z] == [(("zero",), 0.5), (("one",), -0.5)]
        x = variant_terms(init_side, (1,))
        assert [t.weight for t in x] == [1.0, -0.5, -0.5]

    def test_measure_side_has_one_run_per_basis(self, bell):
        for variant in enumerate_variants(bell.fragments[0]):
            assert len(variant.terms) == 1
            assert variant.terms[0].weight == 1.0

    def test_variant_circuit_wraps_fragment(self, bell):
        init_side = bell.fragments[1]
        term = variant_terms(init_side, (2,))[0]
        circuit = variant_circuit(init_side, term)
        assert [g.name for g in circuit.gates] == ["h", "s", "cx"]

        measure_side = bell.fragments[0]
        term = variant_terms(measure_side, (2,))[0]
        names = [g.name for g in variant_circuit(measure_side, term).gates]
        assert names[-2:] == ["rz", "h"]

    def test_uncut_fragment(self):
        instance = CutInstance(parse_circuit("qubits 2; h 0; cx 0 1"), (0,), 1)
        variants = enumerate_variants(instance.fragments[0])
        assert len(variants) == 1
        assert variants[0].basis == ()
        np.testing.assert_allclose(instance.entries[0], instance.truth, atol=1e-12)


class TestEvaluator:
    def test_shapes(self, bell):
        assert bell.entries[0].shape == (4, 2)
        assert bell.entries[1].shape == (4, 4)

    def test_identity_entries_are_distributions(self, bell):
        for values in bell.entries.values():
            assert values[0].sum() == pytest.approx(1.0, abs=1e-12)
            assert values[0].min() >= -1e-15

    def test_known_entries(self, bell):
        np.testing.assert_allclose(bell.entries[0][0], [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(bell.entries[0][1], [0.5, -0.5], atol=1e-12)
        np.testing.assert_allclose(bell.entries[0][3], [0.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(bell.entries[1][3], [0.5, 0.0, 0.0, -0.5], atol=1e-12)

    def test_runs_are_shared(self, bell):
        # measure side: I/Z, X and Y; init side: four prepared states
        assert bell.evaluator.simulations == 7
        again = bell.evaluator.evaluate_entries()
        assert bell.evaluator.simulations == 7
        for node, values in bell.entries.items():
            np.testing.assert_array_equal(again[node], values)

    def test_bins_sum_member_states(self, bell):
        bins = [
            SubcircuitBins(bin_of_state=np.array([0, 0]), n_bins=1),
            SubcircuitBins(bin_of_state=np.array([0, 1, 0, -1]), n_bins=2),
        ]
        binned = bell.evaluator.evaluate_entries(bins=bins, version=1)
        full = bell.entries
        assert binned[0].shape == (4, 1)
        assert binned[1].shape == (4, 2)
        np.testing.assert_allclose(binned[0][:, 0], full[0].sum(axis=1), atol=1e-12)
        np.testing.assert_allclose(binned[1][:, 0], full[1][:, 0] + full[1][:, 2], atol=1e-12)
        np.testing.assert_allclose(binned[1][:, 1], full[1][:, 1], atol=1e-12)

    def test_only_the_latest_bin_map_is_cached(self):
        instance = CutInstance(parse_circuit(BELL), (0, 1), 2)
        evaluator = instance.evaluator
        for version, first in ((1, [0, 0]), (2, [0, 1])):
            bins = [
                SubcircuitBins(bin_of_state=np.array(first), n_bins=max(first) + 1),
                SubcircuitBins(bin_of_state=np.array([0, 0, 1, 1]), n_bins=2),
            ]
            evaluator.evaluate_entries(bins=bins, version=version)
        versions = {key[3] for key in evaluator._entries if key[2] == "bins"}
        assert versions == {2}
        assert any(key[2] == "full" for key in evaluator._entries)
