"""Compute graph: subcircuits as tensors joined by dimension-4 cut indices."""
import json
import logging
from dataclasses import dataclass

import numpy as np

from src.models.cut import CutSolution
from src.utils.errors import ConfigError, DimensionMismatchError

logger = logging.getLogger(__name__)

CUT_DIM = 4


@dataclass(frozen=True)
class CutEdge:
    id: int
    source: int
    target: int


@dataclass(frozen=True)
class GraphNode:
    id: int
    output_dim: int
    qubits: tuple[int, ...] | None = None  # original output qubits, ascending; None for bins or specs


@dataclass(frozen=True)
class DenseTensor:
    """Row-major real tensor with one label per axis."""

    labels: tuple[tuple[str, int], ...]
    values: np.ndarray

    def __post_init__(self):
        if self.values.ndim != len(self.labels):
            raise DimensionMismatchError(
                f"{len(self.labels)} labels for a {self.values.ndim}-axis tensor"
            )

    @property
    def dims(self) -> tuple[int, ...]:
        return self.values.shape


def cut_label(cut_id: int) -> tuple[str, int]:
    return ("c", cut_id)


def output_label(node_id: int) -> tuple[str, int]:
    return ("o", node_id)


@dataclass(frozen=True)
class ComputeGraph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[CutEdge, ...]

    @property
    def n_cuts(self) -> int:
        return len(self.edges)

    @property
    def full_state(self) -> bool:
        return all(node.qubits is not None for node in self.nodes)

    @property
    def n_qubits(self) -> int:
        return sum(len(node.qubits or ()) for node in self.nodes)

    def node_cuts(self, node_id: int) -> tuple[int, ...]:
        """Cut ids attached to ``node_id``, ascending. Tensor cut axes follow this order.

        A self-edge owns two adjacent axes, so its id is listed twice.
        """
        cuts = []
        for e in self.edges:
            if e.source == e.target == node_id:
                cuts.extend((e.id, e.id))
            elif node_id in (e.source, e.target):
                cuts.append(e.id)
        return tuple(cuts)

    def self_edges(self, node_id: int) -> tuple[int, ...]:
        return tuple(e.id for e in self.edges if e.source == e.target == node_id)

    def degree(self, node_id: int) -> int:
        return len(self.node_cuts(node_id))

    def node_labels(self, node_id: int, sliced: frozenset[int] = frozenset()) -> dict:
        """Axis label -> dimension for the input tensor of ``node_id`` with ``sliced`` cuts fixed."""
        traced = self.self_edges(node_id)
        labels = {
            cut_label(c): CUT_DIM for c in self.node_cuts(node_id) if c not in sliced and c not in traced
        }
        labels[output_label(node_id)] = self.nodes[node_id].output_dim
        return labels

    def entry_shape(self, node_id: int) -> tuple[int, ...]:
        return (CUT_DIM,) * self.degree(node_id) + (self.nodes[node_id].output_dim,)

    def with_bins(self, bins: list[int]) -> "ComputeGraph":
        """Same cuts, one opaque output index of ``bins[i]`` values per node."""
        nodes = tuple(GraphNode(id=n.id, output_dim=b) for n, b in zip(self.nodes, bins))
        return ComputeGraph(nodes=nodes, edges=self.edges)

    @classmethod
    def from_solution(cls, solution: CutSolution) -> "ComputeGraph":
        nodes = tuple(
            GraphNode(id=i, output_dim=2 ** len(qubits), qubits=qubits)
            for i, qubits in enumerate(solution.output_qubits)
        )
        edges = tuple(CutEdge(id=c.id, source=c.source, target=c.target) for c in solution.cuts)
        return cls(nodes=nodes, edges=edges)

    @classmethod
    def from_spec(cls, spec: dict) -> "ComputeGraph":
        """Build a cost-only graph from ``{"nodes": [{"qubits": n} | {"output_dim": d}], "edges": [[a, b], ...]}``.

        A self-edge keeps its cut id. Its two entry axes are traced when the
        tensor is loaded, or pinned to one diagonal digit when the cut is sliced.
        """
        try:
            raw_nodes = spec["nodes"]
            raw_edges = spec.get("edges", [])
        except (KeyError, TypeError) as e:
            raise ConfigError(f"graph spec needs a 'nodes' list: {e}") from e

        nodes = []
        for index, raw in enumerate(raw_nodes):
            if "output_dim" in raw:
                dim = int(raw["output_dim"])
            elif "qubits" in raw:
                dim = 2 ** int(raw["qubits"])
            else:
                raise ConfigError(f"graph spec node {index} needs 'qubits' or 'output_dim'")
            nodes.append(GraphNode(id=index, output_dim=dim))

        edges = []
        for a, b in raw_edges:
            if not (0 <= a < len(nodes) and 0 <= b < len(nodes)):
                raise ConfigError(f"graph spec edge ({a}, {b}) references a missing node")
            if a == b:
                logger.info(f"Tracing self-edge on node {a}")
            edges.append(CutEdge(id=len(edges), source=a, target=b))
        return cls(nodes=tuple(nodes), edges=tuple(edges))


def load_graph_spec(path: str) -> ComputeGraph:
    with open(path, "r") as f:
        return ComputeGraph.from_spec(json.load(f))
