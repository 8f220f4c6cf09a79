import os
import sys

import numpy as np
import pytest

# Add the repository root to path
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, ROOT)

from src.circuit.dag import build_dag  # noqa: E402
from src.circuit.parser import parse_circuit  # noqa: E402
from src.circuit.simulator import simulate_full  # noqa: E402
from src.contraction.graph import ComputeGraph, load_graph_spec  # noqa: E402
from src.cutting.fragments import build_fragments  # noqa: E402
from src.cutting.solver import solution_from_assignment  # noqa: E402
from src.subsim.evaluator import SubcircuitEvaluator  # noqa: E402

SAMPLE_DATA = os.path.join(ROOT, "sample_data")

# two cuts running in opposite directions between two subcircuits
TOY_CIRCUIT = """
qubits 4
h 0
ry 1 0.7
cx 0 1
rx 1 0.4
cx 1 2
ry 2 0.9
cx 2 3
h 1
cx 0 1
"""
TOY_ASSIGNMENT = (0, 1, 1, 0)


class CutInstance:
    """A circuit cut by a fixed assignment, with its entries and the exact distribution."""

    def __init__(self, circuit, assignment, n_subcircuits, alpha=1.0):
        self.circuit = circuit
        self.dag = build_dag(circuit)
        self.solution = solution_from_assignment(self.dag, assignment, n_subcircuits, alpha)
        self.fragments = build_fragments(circuit, self.dag, self.solution)
        self.graph = ComputeGraph.from_solution(self.solution)
        self.evaluator = SubcircuitEvaluator(self.fragments)
        self.entries = self.evaluator.evaluate_entries()
        self.truth = simulate_full(circuit)


@pytest.fixture
def fig_graph():
    return load_graph_spec(os.path.join(SAMPLE_DATA, "compute_graph.json"))


@pytest.fixture(scope="session")
def toy_instance():
    return CutInstance(parse_circuit(TOY_CIRCUIT), TOY_ASSIGNMENT, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def random_entries(graph, rng):
    return {node.id: rng.uniform(-0.5, 0.5, size=graph.entry_shape(node.id)) for node in graph.nodes}
