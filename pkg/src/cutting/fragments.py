"""Rebuild each subcircuit as a standalone circuit on its own local qubits."""
import logging
from dataclasses import dataclass

from src.circuit.dag import GateDag, build_dag
from src.circuit.ir import Circuit, Gate
from src.cutting.solver import Segment, line_segments
from src.models.cut import CutSolution, QuantumArea

logger = logging.getLogger(__name__)

MEASURE = "measure"
INIT = "init"


@dataclass(frozen=True)
class CutRole:
    cut_id: int
    role: str  # MEASURE or INIT
    subcircuit: int
    local_qubit: int


@dataclass(frozen=True)
class Fragment:
    subcircuit: int
    circuit: Circuit
    segments: tuple[Segment, ...]  # one per local qubit
    roles: tuple[CutRole, ...]  # ascending cut id
    output_qubits: tuple[int, ...]  # original qubits, ascending
    output_local: tuple[int, ...]  # local qubit of each output qubit

    @property
    def width(self) -> int:
        return len(self.segments)


def build_fragments(circuit: Circuit, dag: GateDag, solution: CutSolution) -> list[Fragment]:
    assignment = solution.subcircuit_map
    layout = line_segments(dag, assignment)

    # (subcircuit, local qubit) of every segment, plus the segment holding each vertex per line
    local_of: dict[tuple[int, int], int] = {}
    segment_of_vertex: dict[tuple[int, int], int] = {}
    members: list[list[Segment]] = [[] for _ in range(solution.n_subcircuits)]
    for qubit, segments in enumerate(layout):
        for position, segment in enumerate(segments):
            local_of[(qubit, position)] = len(members[segment.subcircuit])
            members[segment.subcircuit].append(segment)
            for vertex in segment.vertices:
                segment_of_vertex[(qubit, vertex)] = position

    def place(qubit: int, anchor: int | None) -> tuple[int, int]:
        segments = layout[qubit]
        position = segment_of_vertex.get((qubit, anchor), 0)
        return segments[position].subcircuit, local_of[(qubit, position)]

    vertex_of = {gate_index: v for v, gate_index in enumerate(dag.vertices)}
    local_gates: list[list[Gate]] = [[] for _ in range(solution.n_subcircuits)]
    for index, gate in enumerate(circuit.gates):
        anchor = vertex_of.get(index, dag.attachment.get(index))
        placed = [place(q, anchor) for q in gate.qubits]
        subcircuit = placed[0][0]
        local_gates[subcircuit].append(
            Gate(name=gate.name, qubits=tuple(local for _, local in placed), params=gate.params)
        )

    roles: list[list[CutRole]] = [[] for _ in range(solution.n_subcircuits)]
    for cut in solution.cuts:
        edge = dag.edges[cut.edge]
        for vertex, role in ((edge.source, MEASURE), (edge.target, INIT)):
            subcircuit, local = place(edge.qubit, vertex)
            roles[subcircuit].append(CutRole(cut.id, role, subcircuit, local))

    fragments = []
    for c in range(solution.n_subcircuits):
        outputs = solution.output_qubits[c]
        fragments.append(Fragment(
            subcircuit=c,
            circuit=Circuit(n_qubits=max(len(members[c]), 1), gates=tuple(local_gates[c])),
            segments=tuple(members[c]),
            roles=tuple(roles[c]),
            output_qubits=outputs,
            output_local=tuple(local_of[(q, len(layout[q]) - 1)] for q in outputs),
        ))
        logger.debug(
            f"Subcircuit {c}: {len(members[c])} qubits, {len(local_gates[c])} gates, "
            f"{len(roles[c])} cut roles"
        )
    return fragments


def quantum_area(solution: CutSolution, circuit: Circuit) -> QuantumArea:
    """Width x depth of the full circuit against the largest rebuilt subcircuit."""
    full = circuit.n_qubits * circuit.depth()
    fragments = build_fragments(circuit, build_dag(circuit), solution)
    largest = max(f.width * f.circuit.depth() for f in fragments)
    return QuantumArea(
        full_area=full,
        max_subcircuit_area=largest,
        ratio=largest / full if full else 1.0,
    )
