"""Dense execution of a contraction plan."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from src.config.settings import WORKERS
from src.contraction.cost import pair_layout
from src.contraction.graph import ComputeGraph, DenseTensor, cut_label, output_label
from src.models.plan import ContractionPlan
from src.utils.errors import DimensionMismatchError, MissingEntryError

logger = logging.getLogger(__name__)


@dataclass
class ContractionResult:
    values: np.ndarray
    multiplications: int
    subgraphs: int


def slice_digits(index: int, n_digits: int) -> tuple[int, ...]:
    """Base-4 digits of ``index``, most significant first."""
    digits = []
    for _ in range(n_digits):
        index, digit = divmod(index, 4)
        digits.append(digit)
    return tuple(reversed(digits))


def _check_entries(graph: ComputeGraph, entries: dict) -> None:
    for node in graph.nodes:
        if node.id not in entries:
            raise MissingEntryError(f"no entry tensor for node {node.id}")
        expected = graph.entry_shape(node.id)
        if tuple(entries[node.id].shape) != expected:
            raise DimensionMismatchError(
                f"node {node.id} entry has shape {tuple(entries[node.id].shape)}, expected {expected}"
            )


def _load(graph: ComputeGraph, entries: dict, node_id: int, fixed: dict, scale: float = 1.0) -> DenseTensor:
    """Node tensor with the cuts in ``fixed`` pinned to their slice labels.

    Unpinned self-edges are traced over their two axes.
    """
    traced = set(graph.self_edges(node_id))
    index = []
    kept = []
    for cut in graph.node_cuts(node_id):
        if cut in fixed:
            index.append(fixed[cut])
        else:
            index.append(slice(None))
            kept.append(cut)
    index.append(slice(None))
    values = entries[node_id][tuple(index)]
    open_cuts = [c for c in kept if c not in traced]
    if len(open_cuts) < len(kept):
        out = graph.n_cuts
        values = np.einsum(values, kept + [out], open_cuts + [out])
    labels = [cut_label(c) for c in open_cuts] + [output_label(node_id)]
    if scale != 1.0:
        values = values * scale
    return DenseTensor(labels=tuple(labels), values=values)


def _product(incoming: DenseTensor, cluster: DenseTensor) -> tuple[DenseTensor, int]:
    layout = pair_layout(
        dict(zip(incoming.labels, incoming.dims)), dict(zip(cluster.labels, cluster.dims))
    )
    position_in = {label: axis for axis, label in enumerate(incoming.labels)}
    position_cl = {label: axis for axis, label in enumerate(cluster.labels)}
    leading = np.transpose(
        incoming.values, [position_in[l] for l in layout.kept_incoming + layout.contracted]
    ).reshape(layout.rows, layout.inner)
    trailing = np.transpose(
        cluster.values, [position_cl[l] for l in layout.contracted + layout.kept_cluster]
    ).reshape(layout.inner, layout.cols)
    merged = (leading @ trailing).reshape(tuple(layout.merged.values()))
    return DenseTensor(labels=tuple(layout.merged), values=merged), layout.multiplications


def _run_subgraph(graph, entries, order, fixed, scale) -> tuple[np.ndarray, int]:
    cluster = _load(graph, entries, order[0], fixed, scale)
    count = 0
    for node in order[1:]:
        cluster, step = _product(_load(graph, entries, node, fixed), cluster)
        count += step
    # node-id order, one axis per node
    axes = [cluster.labels.index(output_label(n.id)) for n in graph.nodes]
    return np.transpose(cluster.values, axes), count


def _restore_qubit_order(graph: ComputeGraph, values: np.ndarray) -> np.ndarray:
    qubit_axes = [q for node in graph.nodes for q in node.qubits]
    tensor = values.reshape((2,) * len(qubit_axes))
    return np.transpose(tensor, np.argsort(qubit_axes)).reshape(-1)


def contract(
    graph: ComputeGraph,
    entries: dict,
    plan: ContractionPlan,
    terms: dict[int, float] | None = None,
) -> ContractionResult:
    """Contract ``entries`` (node id -> array of ``graph.entry_shape``) along ``plan``.

    Sliced subgraphs run concurrently, one window of ``WORKERS`` at a time, and
    are summed in place in ascending slice order.
    With ``terms`` (global basis index k -> scale) every cut is sliced and only
    the listed terms are contracted, each with its first tensor scaled.

    Full-state graphs return probabilities in original qubit order (qubit 0 the
    most significant bit); other graphs return the flattened node-id-ordered
    output tensor.
    """
    _check_entries(graph, entries)
    if terms is None:
        sliced = plan.all_sliced
        assignments = [(s, 1.0) for s in range(4 ** len(sliced))]
    else:
        sliced = tuple(e.id for e in graph.edges)
        assignments = sorted(terms.items())

    def run(assignment):
        index, scale = assignment
        fixed = dict(zip(sliced, slice_digits(index, len(sliced))))
        return _run_subgraph(graph, entries, plan.order, fixed, scale)

    # at most WORKERS subgraph outputs are alive beside the running total
    total = np.zeros(tuple(node.output_dim for node in graph.nodes))
    multiplications = 0
    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        for start in range(0, len(assignments), WORKERS):
            for values, count in pool.map(run, assignments[start:start + WORKERS]):
                np.add(total, values, out=total)
                multiplications += count

    result = total.reshape(-1)
    if graph.full_state:
        result = _restore_qubit_order(graph, result)
    logger.debug(f"Contracted {len(assignments)} subgraph(s) with {multiplications} multiplications")
    return ContractionResult(values=result, multiplications=multiplications, subgraphs=len(assignments))
