import numpy as np
import pytest

from src.circuit.benchmarks import bv, qaoa_regular, supremacy_grid
from src.circuit.dag import build_dag
from src.circuit.parser import parse_circuit
from src.circuit.simulator import simulate_full
from src.contraction.cost import find_order, plan_contraction
from src.contraction.engine import contract
from src.contraction.graph import ComputeGraph
from src.cutting.fragments import build_fragments
from src.cutting.solver import find_cuts
from src.subsim.evaluator import SubcircuitEvaluator
from tests.conftest import CutInstance
from tests.test_solver import QAOA_FIVE


def striped_secret(n: int) -> str:
    return "".join("0" if i % 3 == 1 else "1" for i in range(n))


def oracle_cases():
    cases = []
    for n in range(4, 15):
        for alpha in (0.3, 0.4, 0.5):
            cases.append(pytest.param(bv(n, secret=striped_secret(n)), alpha, id=f"bv{n}-a{alpha}"))
    for n in (4, 6):
        for seed in range(3):
            for alpha in (0.4, 0.5):
                cases.append(pytest.param(qaoa_regular(n, seed=seed), alpha, id=f"qaoa{n}-s{seed}-a{alpha}"))
    for rows, cols, depth in ((2, 2, 8), (2, 3, 4)):
        for seed in range(2):
            for alpha in (0.4, 0.5):
                circuit = supremacy_grid(rows, cols, seed=seed, depth=depth)
                cases.append(pytest.param(circuit, alpha, id=f"grid{rows}x{cols}-s{seed}-a{alpha}"))
    return cases


def reconstruct(circuit, solution, memory_limit=2**28):
    graph = ComputeGraph.from_solution(solution)
    evaluator = SubcircuitEvaluator(build_fragments(circuit, build_dag(circuit), solution))
    return contract(graph, evaluator.evaluate_entries(), plan_contraction(graph, memory_limit)).values


@pytest.mark.parametrize("circuit,alpha", oracle_cases())
def test_matches_direct_simulation(circuit, alpha):
    solution = find_cuts(build_dag(circuit), alpha=alpha, max_subcircuits=4, time_limit=2)
    values = reconstruct(circuit, solution)
    truth = simulate_full(circuit)
    assert np.max(np.abs(values - truth)) <= 1e-9
    assert values.sum() == pytest.approx(1.0, abs=1e-9)


def test_opposite_cuts_between_two_subcircuits(toy_instance):
    assert toy_instance.solution.n_cuts == 2
    assert {(c.source, c.target) for c in toy_instance.solution.cuts} == {(0, 1), (1, 0)}
    values = contract(toy_instance.graph, toy_instance.entries, find_order(toy_instance.graph)).values
    np.testing.assert_allclose(values, toy_instance.truth, rtol=0, atol=1e-12)


def test_sliced_reconstruction(toy_instance):
    values = contract(
        toy_instance.graph, toy_instance.entries, plan_contraction(toy_instance.graph, memory_limit=20)
    ).values
    np.testing.assert_allclose(values, toy_instance.truth, rtol=0, atol=1e-12)


def test_three_subcircuits_on_a_chain():
    circuit = bv(7, secret="1101101")
    instance = CutInstance(circuit, (0, 1, 1, 2), 3)
    values = contract(instance.graph, instance.entries, find_order(instance.graph)).values
    np.testing.assert_allclose(values, instance.truth, rtol=0, atol=1e-12)


def test_five_qubit_qaoa_split():
    circuit = parse_circuit(QAOA_FIVE)
    instance = CutInstance(circuit, (0, 0, 1, 1, 0, 1), 2)
    assert sorted(node.output_dim for node in instance.graph.nodes) == [2, 16]
    values = contract(instance.graph, instance.entries, find_order(instance.graph)).values
    np.testing.assert_allclose(values, instance.truth, rtol=0, atol=1e-12)
