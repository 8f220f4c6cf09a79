"""Cut search: branch-and-bound over vertex-to-subcircuit assignments.

The search fixes vertices in circuit order. Every DAG edge points from an
earlier vertex to a later one, so when a vertex is placed all of its incoming
edges are already decided and the incoming/outgoing cut counts can be kept
incrementally. The running max of ``I_c + O_c`` is the lower bound.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import ceil

from src.circuit.dag import GateDag
from src.contraction.cost import find_order, predict_cost
from src.contraction.graph import ComputeGraph
from src.config.settings import (
    DEGREE_CAP,
    SIMULATOR_MAX_QUBITS,
    SOLVER_TIMEOUT_S,
    WORKERS,
)
from src.models.cut import CutRecord, CutSolution
from src.utils.errors import InfeasiblePartitionError, SolverTimeoutError

logger = logging.getLogger(__name__)

_CLOCK_STRIDE = 512


@dataclass(frozen=True)
class Segment:
    """A stretch of one qubit line that lives inside a single subcircuit."""

    qubit: int
    subcircuit: int
    vertices: tuple[int, ...]
    starts_with_cut: bool
    ends_with_cut: bool


def load_cap(alpha: float, n_vertices: int) -> int:
    return ceil(alpha * n_vertices - 1e-9)


def line_segments(dag: GateDag, assignment: tuple[int, ...]) -> list[list[Segment]]:
    """Split every qubit line at its cut edges.

    Lines without two-qubit gates form one segment owned by the subcircuit of
    vertex 0 (subcircuit 0 when the DAG is empty).
    """
    owner_of_idle = assignment[0] if assignment else 0
    layout = []
    for qubit, line in enumerate(dag.lines):
        if not line:
            layout.append([Segment(qubit, owner_of_idle, (), False, False)])
            continue
        segments = []
        current = [line[0]]
        for a, b in zip(line, line[1:]):
            if assignment[a] == assignment[b]:
                current.append(b)
                continue
            segments.append(Segment(qubit, assignment[a], tuple(current), bool(segments), True))
            current = [b]
        segments.append(Segment(qubit, assignment[line[-1]], tuple(current), bool(segments), False))
        layout.append(segments)
    return layout


def subcircuit_widths(dag: GateDag, assignment: tuple[int, ...], n_subcircuits: int) -> list[int]:
    widths = [0] * n_subcircuits
    for segments in line_segments(dag, assignment):
        for segment in segments:
            widths[segment.subcircuit] += 1
    return widths


def solution_from_assignment(
    dag: GateDag,
    assignment: tuple[int, ...],
    n_subcircuits: int,
    alpha: float,
    optimal: bool = True,
) -> CutSolution:
    """Derive cut edges and per-subcircuit counts from a vertex assignment."""
    cuts = []
    incoming = [0] * n_subcircuits
    outgoing = [0] * n_subcircuits
    for index, edge in enumerate(dag.edges):
        source, target = assignment[edge.source], assignment[edge.target]
        if source == target:
            continue
        cuts.append(CutRecord(
            id=len(cuts),
            edge=index,
            gate_a=dag.vertices[edge.source],
            gate_b=dag.vertices[edge.target],
            qubit=edge.qubit,
            source=source,
            target=target,
        ))
        outgoing[source] += 1
        incoming[target] += 1

    gate_counts = [0] * n_subcircuits
    for label in assignment:
        gate_counts[label] += 1

    widths = [0] * n_subcircuits
    outputs: list[list[int]] = [[] for _ in range(n_subcircuits)]
    for qubit, segments in enumerate(line_segments(dag, assignment)):
        for segment in segments:
            widths[segment.subcircuit] += 1
        outputs[segments[-1].subcircuit].append(qubit)

    return CutSolution(
        n_subcircuits=n_subcircuits,
        alpha=alpha,
        load_cap=load_cap(alpha, dag.n_vertices),
        subcircuit_map=tuple(assignment),
        cuts=tuple(cuts),
        objective=max((i + o for i, o in zip(incoming, outgoing)), default=0),
        gate_counts=tuple(gate_counts),
        incoming=tuple(incoming),
        outgoing=tuple(outgoing),
        qubit_counts=tuple(widths),
        effective_qubits=tuple(len(q) for q in outputs),
        output_qubits=tuple(tuple(q) for q in outputs),
        optimal=optimal,
    )


class PartitionModel:
    """Depth-first branch-and-bound for one subcircuit count.

    Labels are canonical: vertex 0 takes label 0 and a vertex may open at most
    the next unused label. Depth-first search visits canonical assignments in
    lexicographic order and only strictly better leaves replace the incumbent,
    so the result is the lexicographically smallest optimal assignment.
    """

    def __init__(
        self,
        dag: GateDag,
        n_subcircuits: int,
        alpha: float,
        degree_cap: int = DEGREE_CAP,
        max_qubits: int = SIMULATOR_MAX_QUBITS,
    ):
        self.dag = dag
        self.n_subcircuits = n_subcircuits
        self.alpha = alpha
        self.cap = load_cap(alpha, dag.n_vertices)
        self.degree_cap = degree_cap
        self.max_qubits = max_qubits
        self.sources: list[list[int]] = [[] for _ in range(dag.n_vertices)]
        for edge in dag.edges:
            self.sources[edge.target].append(edge.source)

        self.best: tuple[int, ...] | None = None
        self.best_value = degree_cap + 1
        self.nodes = 0
        self.timed_out = False

    def check_feasible(self) -> None:
        n_vertices = self.dag.n_vertices
        if self.n_subcircuits < 1:
            raise InfeasiblePartitionError(f"need at least one subcircuit, got {self.n_subcircuits}")
        if self.cap < 1:
            raise InfeasiblePartitionError(
                f"alpha={self.alpha} leaves no room for a gate among {n_vertices} vertices"
            )
        if self.n_subcircuits > n_vertices:
            raise InfeasiblePartitionError(
                f"{self.n_subcircuits} non-empty subcircuits need at least as many two-qubit gates, "
                f"got {n_vertices}"
            )
        if self.n_subcircuits * self.cap < n_vertices:
            raise InfeasiblePartitionError(
                f"{self.n_subcircuits} subcircuits of at most {self.cap} gates cannot hold "
                f"{n_vertices} gates"
            )

    def search(self, time_limit: float) -> tuple[tuple[int, ...], bool]:
        """Return ``(assignment, proved_optimal)``."""
        self.check_feasible()
        n_vertices = self.dag.n_vertices
        self.deadline = time.monotonic() + time_limit
        self.assignment = [-1] * n_vertices
        self.load = [0] * self.n_subcircuits
        self.incoming = [0] * self.n_subcircuits
        self.outgoing = [0] * self.n_subcircuits
        self._descend(0, 0)

        if self.best is None:
            if self.timed_out:
                raise SolverTimeoutError(
                    f"no feasible assignment for n_C={self.n_subcircuits} within {time_limit}s"
                )
            raise InfeasiblePartitionError(
                f"no assignment into {self.n_subcircuits} subcircuits meets the load cap {self.cap}, "
                f"degree cap {self.degree_cap} and width cap {self.max_qubits}"
            )
        logger.debug(f"n_C={self.n_subcircuits}: explored {self.nodes} nodes, L={self.best_value}")
        return self.best, not self.timed_out

    def _degree(self) -> int:
        return max(i + o for i, o in zip(self.incoming, self.outgoing))

    def _descend(self, vertex: int, opened: int) -> None:
        if self.timed_out:
            return
        self.nodes += 1
        if self.nodes % _CLOCK_STRIDE == 0 and time.monotonic() > self.deadline:
            self.timed_out = True
            return

        n_vertices = self.dag.n_vertices
        if vertex == n_vertices:
            self._accept_leaf(opened)
            return
        if self.n_subcircuits - opened > n_vertices - vertex:
            return

        for label in range(min(opened + 1, self.n_subcircuits)):
            if self.load[label] >= self.cap:
                continue
            self._place(vertex, label, +1)
            if self._degree() < self.best_value:
                self._descend(vertex + 1, max(opened, label + 1))
            self._place(vertex, label, -1)
            if self.timed_out:
                return

    def _place(self, vertex: int, label: int, step: int) -> None:
        self.assignment[vertex] = label if step > 0 else -1
        self.load[label] += step
        for source in self.sources[vertex]:
            source_label = self.assignment[source]
            if source_label != label:
                self.outgoing[source_label] += step
                self.incoming[label] += step

    def _accept_leaf(self, opened: int) -> None:
        if opened != self.n_subcircuits:
            return
        assignment = tuple(self.assignment)
        widths = subcircuit_widths(self.dag, assignment, self.n_subcircuits)
        if max(widths) > self.max_qubits:
            return
        self.best = assignment
        self.best_value = self._degree()


def solve_partition(
    dag: GateDag,
    n_subcircuits: int,
    alpha: float,
    time_limit: float = SOLVER_TIMEOUT_S,
    degree_cap: int = DEGREE_CAP,
    max_qubits: int = SIMULATOR_MAX_QUBITS,
) -> CutSolution:
    """Minimize ``L = max_c (I_c + O_c)`` over partitions into ``n_subcircuits``.

    Raises:
        InfeasiblePartitionError: no assignment satisfies the constraints.
        SolverTimeoutError: the time limit elapsed without any incumbent.
    """
    if dag.n_vertices == 0:
        if n_subcircuits != 1:
            raise InfeasiblePartitionError("a circuit without two-qubit gates cannot be split")
        return solution_from_assignment(dag, (), 1, alpha)

    model = PartitionModel(dag, n_subcircuits, alpha, degree_cap=degree_cap, max_qubits=max_qubits)
    assignment, optimal = model.search(time_limit)
    if not optimal:
        logger.warning(f"n_C={n_subcircuits}: time limit hit, keeping incumbent with L={model.best_value}")
    return solution_from_assignment(dag, assignment, n_subcircuits, alpha, optimal=optimal)


def find_cuts(
    dag: GateDag,
    alpha: float,
    max_subcircuits: int,
    time_limit: float = SOLVER_TIMEOUT_S,
    degree_cap: int = DEGREE_CAP,
    max_qubits: int = SIMULATOR_MAX_QUBITS,
) -> CutSolution:
    """Solve for every subcircuit count and keep the cheapest to post-process.

    Counts ``2..max_subcircuits`` are searched concurrently; a single
    subcircuit is also a candidate when ``alpha >= 1``. Candidates are scored
    by the predicted full-state contraction multiplications, smaller count on
    a tie.
    """
    if dag.n_vertices == 0:
        logger.info("No two-qubit gates; returning the uncut circuit")
        return solve_partition(dag, 1, alpha)

    counts = list(range(2, max_subcircuits + 1))
    if load_cap(alpha, dag.n_vertices) >= dag.n_vertices:
        counts.insert(0, 1)

    def attempt(n_subcircuits: int) -> CutSolution | None:
        try:
            return solve_partition(dag, n_subcircuits, alpha, time_limit, degree_cap, max_qubits)
        except (InfeasiblePartitionError, SolverTimeoutError) as e:
            logger.info(f"n_C={n_subcircuits} rejected: {e}")
            return None

    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        candidates = [s for s in pool.map(attempt, counts) if s is not None]
    if not candidates:
        raise InfeasiblePartitionError(
            f"no feasible partition for n_C in {counts} with alpha={alpha}"
        )

    def score(solution: CutSolution) -> tuple[int, int]:
        graph = ComputeGraph.from_solution(solution)
        return predict_cost(graph, find_order(graph)).multiplications, solution.n_subcircuits

    best = min(candidates, key=score)
    logger.info(
        f"Chose n_C={best.n_subcircuits} with K={best.n_cuts}, L={best.objective}, "
        f"gates per subcircuit {list(best.gate_counts)}"
    )
    return best
