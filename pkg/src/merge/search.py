"""States merging: locate high-probability states without the full 2^n vector."""
import logging
from dataclasses import dataclass, field

import numpy as np

from src.circuit.dag import build_dag
from src.circuit.ir import Circuit
from src.config.settings import (
    MAX_BINS,
    MAX_RECURSIONS,
    MEMORY_LIMIT_VALUES,
    SOLUTION_THRESHOLD,
    TOP_R,
)
from src.contraction.cost import plan_contraction, predict_cost
from src.contraction.engine import contract
from src.contraction.graph import ComputeGraph
from src.cutting.fragments import build_fragments
from src.merge.bins import BinAssignment, MergeBin, SubcircuitBins, assign_states
from src.models.cut import CutSolution
from src.models.plan import CostReport
from src.subsim.evaluator import SubcircuitEvaluator
from src.utils.errors import ConfigError, StateListTooLargeError

logger = logging.getLogger(__name__)

# bins at or below this mass are never expanded
EMPTY_BIN = 1e-12


@dataclass
class RecursionRecord:
    recursion: int
    parent_probability: float
    children_probability: float
    n_bins: int
    max_bin_probability: float
    pushed: int
    solutions_found: int


@dataclass
class MergeState:
    max_bins: int
    top_r: int
    threshold: float
    output_qubits: tuple[tuple[int, ...], ...]
    candidates: list[MergeBin] = field(default_factory=list)
    recursions: int = 0
    solutions: list[tuple[str, float]] = field(default_factory=list)
    trace: list[RecursionRecord] = field(default_factory=list)

    def push(self, bins: list[MergeBin]) -> None:
        """Merge ``bins`` into L, keep it sorted and truncate to the top R."""
        self.candidates = sorted(self.candidates + bins, key=MergeBin.sort_key)[: self.top_r]

    def pop(self) -> MergeBin:
        return self.candidates.pop(0)


def assemble_bitstring(states: list[int], output_qubits, n_qubits: int) -> str:
    """Place each subcircuit's output-state bits on their original qubits."""
    bits = ["0"] * n_qubits
    for state, qubits in zip(states, output_qubits):
        width = len(qubits)
        for position, qubit in enumerate(qubits):
            bits[qubit] = str((state >> (width - 1 - position)) & 1)
    return "".join(bits)


class StatesMerger:
    """Shared machinery of the merge search and subset mode."""

    def __init__(self, circuit: Circuit, solution: CutSolution, memory_limit: int = MEMORY_LIMIT_VALUES):
        self.circuit = circuit
        self.solution = solution
        self.memory_limit = memory_limit
        self.graph = ComputeGraph.from_solution(solution)
        self.evaluator = SubcircuitEvaluator(build_fragments(circuit, build_dag(circuit), solution))
        self.widths = [len(q) for q in solution.output_qubits]
        self.multiplications = 0
        self.costs: list[CostReport] = []

    def bin_probabilities(self, subcircuits: tuple[SubcircuitBins, ...], version: int) -> np.ndarray:
        graph = self.graph.with_bins([s.n_bins for s in subcircuits])
        entries = self.evaluator.evaluate_entries(bins=list(subcircuits), version=version)
        plan = plan_contraction(graph, self.memory_limit)
        result = contract(graph, entries, plan)
        self.costs.append(predict_cost(graph, plan))
        self.multiplications += result.multiplications
        return result.values

    @property
    def predicted_multiplications(self) -> int:
        return sum(cost.multiplications for cost in self.costs)

    def cost_report(self) -> CostReport | None:
        """Predicted cost over every contraction so far, one step entry per contraction."""
        if not self.costs:
            return None
        multiplications = self.predicted_multiplications
        naive = sum(cost.naive_multiplications for cost in self.costs)
        return CostReport(
            input_storage=max(cost.input_storage for cost in self.costs),
            peak_intermediate_storage=max(cost.peak_intermediate_storage for cost in self.costs),
            multiplications=multiplications,
            step_multiplications=tuple(cost.multiplications for cost in self.costs),
            naive_multiplications=naive,
            naive_ratio=naive / multiplications if multiplications else 1.0,
            n_subgraphs=sum(cost.n_subgraphs for cost in self.costs),
        )


def run_merge(
    circuit: Circuit,
    solution: CutSolution,
    max_bins: int = MAX_BINS,
    top_r: int = TOP_R,
    max_recursions: int = MAX_RECURSIONS,
    threshold: float = SOLUTION_THRESHOLD,
    memory_limit: int = MEMORY_LIMIT_VALUES,
    merger: StatesMerger | None = None,
) -> MergeState:
    """Iteratively expand the most probable bin until no candidate remains.

    A fully expanded bin whose probability reaches ``max(10 / 2^n, threshold)``
    is a solution. Every other non-empty bin competes for the R candidate
    slots, so the search runs until ``max_recursions`` unless the remaining
    mass is exhausted.
    """
    if max_bins < 2 or top_r < 1:
        raise ConfigError(f"merge needs M >= 2 and R >= 1, got M={max_bins}, R={top_r}", phase="merge")
    merger = merger or StatesMerger(circuit, solution, memory_limit)
    bar = max(10 / 2 ** circuit.n_qubits, threshold)
    state = MergeState(max_bins=max_bins, top_r=top_r, threshold=bar, output_qubits=solution.output_qubits)

    parent: MergeBin | None = None
    while state.recursions < max_recursions:
        assignment: BinAssignment = assign_states(state.recursions, parent, max_bins, merger.widths)
        probs = merger.bin_probabilities(assignment.subcircuits, version=state.recursions)

        pushed, found = [], 0
        for index in np.flatnonzero(probs > EMPTY_BIN):
            child = assignment.child(int(index), probs[index])
            if child.fully_expanded:
                if child.probability < bar:
                    continue
                states = [int(m[0]) for m in child.members]
                bitstring = assemble_bitstring(states, solution.output_qubits, circuit.n_qubits)
                state.solutions.append((bitstring, child.probability))
                found += 1
            else:
                pushed.append(child)

        state.trace.append(RecursionRecord(
            recursion=state.recursions,
            parent_probability=parent.probability if parent else 1.0,
            children_probability=float(probs.sum()),
            n_bins=len(probs),
            max_bin_probability=float(probs.max()),
            pushed=len(pushed),
            solutions_found=found,
        ))
        state.recursions += 1
        state.push(pushed)
        logger.info(
            f"Recursion {state.recursions}: {len(probs)} bins, max {probs.max():.6f}, "
            f"{found} solution(s), {len(state.candidates)} candidate(s)"
        )
        if not state.candidates:
            break
        parent = state.pop()

    state.solutions.sort(key=lambda s: (-s[1], s[0]))
    return state


def arbitrary_subset_mode(
    circuit: Circuit,
    solution: CutSolution,
    states: list[str],
    max_bins: int = MAX_BINS,
    memory_limit: int = MEMORY_LIMIT_VALUES,
    merger: StatesMerger | None = None,
) -> dict[str, float]:
    """Exact probabilities of ``states`` from one recursion.

    Each subcircuit gets a singleton bin per distinct local projection of the
    listed states and one catch-all bin for the rest.
    """
    if len(states) > max_bins:
        raise StateListTooLargeError(f"{len(states)} states exceed the bin budget M={max_bins}")
    if not states:
        return {}
    for s in states:
        if len(s) != circuit.n_qubits or set(s) - {"0", "1"}:
            raise ConfigError(f"'{s}' is not a {circuit.n_qubits}-bit string", phase="merge")

    merger = merger or StatesMerger(circuit, solution, memory_limit)
    local_states = [
        [int("".join(s[q] for q in qubits) or "0", 2) for s in states]
        for qubits in solution.output_qubits
    ]
    subcircuits = []
    for width, projections in zip(merger.widths, local_states):
        distinct = sorted(set(projections))
        bin_of_state = np.full(2 ** width, len(distinct), dtype=np.int64)
        bin_of_state[distinct] = np.arange(len(distinct))
        subcircuits.append(SubcircuitBins(bin_of_state=bin_of_state, n_bins=len(distinct) + 1))

    probs = merger.bin_probabilities(tuple(subcircuits), version=0)
    counts = tuple(s.n_bins for s in subcircuits)
    result = {}
    for position, s in enumerate(states):
        bins = tuple(int(sub.bin_of_state[proj[position]]) for sub, proj in zip(subcircuits, local_states))
        result[s] = float(probs[np.ravel_multi_index(bins, counts)])
    return result
