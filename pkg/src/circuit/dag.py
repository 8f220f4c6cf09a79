"""Two-qubit-gate DAG used by the cut search.

Vertices are the two-qubit gates in circuit order. Edges are the qubit-line
segments between consecutive two-qubit gates on the same line. Single-qubit
gates do not change connectivity; each one is attached to its closest
two-qubit neighbor on its own line.
"""
import logging
from dataclasses import dataclass, field

import networkx as nx

from src.circuit.ir import Circuit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DagEdge:
    source: int  # vertex index, earlier gate
    target: int  # vertex index, later gate
    qubit: int


@dataclass(frozen=True)
class GateDag:
    n_qubits: int
    vertices: tuple[int, ...]  # gate index in the circuit, per vertex
    edges: tuple[DagEdge, ...]
    lines: tuple[tuple[int, ...], ...]  # vertex sequence along each qubit line
    attachment: dict[int, int] = field(default_factory=dict)  # single-qubit gate index -> vertex

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def idle_lines(self) -> list[int]:
        """Qubit lines that no two-qubit gate touches."""
        return [q for q, line in enumerate(self.lines) if not line]

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.n_vertices))
        for edge in self.edges:
            graph.add_edge(edge.source, edge.target, qubit=edge.qubit)
        return graph


def _attach(position: int, anchors: list[tuple[int, int]]) -> int:
    """Closest anchor ``(line position, vertex)`` to ``position``; earlier wins a tie."""
    before = [a for a in anchors if a[0] < position]
    after = [a for a in anchors if a[0] > position]
    if before and after:
        prev, nxt = before[-1], after[0]
        return prev[1] if position - prev[0] <= nxt[0] - position else nxt[1]
    return before[-1][1] if before else after[0][1]


def build_dag(circuit: Circuit) -> GateDag:
    """Build the two-qubit-gate DAG of ``circuit``."""
    two_qubit = circuit.two_qubit_gates()
    vertex_of = {gate_index: v for v, gate_index in enumerate(two_qubit)}

    # per line: the gate indices touching it, in time order
    line_gates: list[list[int]] = [[] for _ in range(circuit.n_qubits)]
    for index, gate in enumerate(circuit.gates):
        for qubit in gate.qubits:
            line_gates[qubit].append(index)

    lines = []
    edges = []
    attachment = {}
    for qubit, gates in enumerate(line_gates):
        anchors = [(pos, vertex_of[g]) for pos, g in enumerate(gates) if g in vertex_of]
        line = [vertex for _, vertex in anchors]
        lines.append(tuple(line))
        for a, b in zip(line, line[1:]):
            edges.append(DagEdge(source=a, target=b, qubit=qubit))
        for pos, g in enumerate(gates):
            if g in vertex_of:
                continue
            if anchors:
                attachment[g] = _attach(pos, anchors)
            elif two_qubit:
                # idle line: its gates ride along with vertex 0
                attachment[g] = 0

    edges.sort(key=lambda e: (e.source, e.target, e.qubit))
    dag = GateDag(
        n_qubits=circuit.n_qubits,
        vertices=tuple(two_qubit),
        edges=tuple(edges),
        lines=tuple(lines),
        attachment=attachment,
    )
    if not two_qubit:
        logger.warning("Circuit has no two-qubit gates; it cannot be cut")
    logger.debug(f"DAG with {dag.n_vertices} vertices and {len(dag.edges)} edges")
    return dag
