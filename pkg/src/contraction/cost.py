"""Cost model, contraction-order search and two-level index slicing.

A plan contracts nodes one at a time into a growing cluster. Each step is a
matrix product between the incoming node's leading matrix (kept indices x
contracted indices) and the cluster's trailing matrix (contracted indices x
kept indices), so it costs ``rows * inner * cols`` multiplications.
"""
import logging
from dataclasses import dataclass
from math import prod

from src.config.settings import EXHAUSTIVE_ORDER_MAX_NODES, MEMORY_LIMIT_VALUES
from src.contraction.graph import CUT_DIM, ComputeGraph
from src.models.plan import ContractionPlan, CostReport, PlanStep
from src.utils.errors import MemoryLimitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairLayout:
    contracted: tuple
    kept_incoming: tuple
    kept_cluster: tuple
    rows: int
    inner: int
    cols: int
    merged: dict  # label -> dim of the product, incoming kept axes first

    @property
    def multiplications(self) -> int:
        return self.rows * self.inner * self.cols


def pair_layout(incoming: dict, cluster: dict) -> PairLayout:
    contracted = tuple(label for label in incoming if label in cluster)
    kept_incoming = tuple(label for label in incoming if label not in cluster)
    kept_cluster = tuple(label for label in cluster if label not in incoming)
    merged = {label: incoming[label] for label in kept_incoming}
    merged.update({label: cluster[label] for label in kept_cluster})
    return PairLayout(
        contracted=contracted,
        kept_incoming=kept_incoming,
        kept_cluster=kept_cluster,
        rows=prod(incoming[label] for label in kept_incoming),
        inner=prod(incoming[label] for label in contracted),
        cols=prod(cluster[label] for label in kept_cluster),
        merged=merged,
    )


def input_storage(graph: ComputeGraph, sliced=()) -> int:
    """Values held by the input tensors of one subgraph."""
    fixed = frozenset(sliced)
    return sum(
        prod(graph.node_labels(node.id, fixed).values())
        * CUT_DIM ** (2 * len([c for c in graph.self_edges(node.id) if c not in fixed]))
        for node in graph.nodes
    )


def build_plan(
    graph: ComputeGraph,
    order,
    sliced=(),
    sliced_intermediate=(),
    optimal: bool = True,
) -> ContractionPlan:
    fixed = frozenset(sliced) | frozenset(sliced_intermediate)
    cluster = graph.node_labels(order[0], fixed)
    steps = []
    for node in order[1:]:
        incoming = graph.node_labels(node, fixed)
        layout = pair_layout(incoming, cluster)
        steps.append(PlanStep(
            node=node,
            contracted=tuple(label[1] for label in layout.contracted),
            rows=layout.rows,
            inner=layout.inner,
            cols=layout.cols,
            operand_storage=prod(incoming.values()) + prod(cluster.values()),
            output_storage=layout.rows * layout.cols,
        ))
        cluster = layout.merged
    return ContractionPlan(
        order=tuple(order),
        steps=tuple(steps),
        sliced=tuple(sorted(sliced)),
        sliced_intermediate=tuple(sorted(sliced_intermediate)),
        optimal=optimal,
    )


def naive_multiplications(graph: ComputeGraph, order) -> int:
    """Cost of summing all 4^K outer products term by term in ``order``."""
    total = 0
    running = graph.nodes[order[0]].output_dim
    for node in order[1:]:
        running *= graph.nodes[node].output_dim
        total += running
    return 4 ** graph.n_cuts * total


def predict_cost(graph: ComputeGraph, plan: ContractionPlan) -> CostReport:
    per_step = tuple(step.multiplications for step in plan.steps)
    multiplications = plan.n_subgraphs * sum(per_step)
    naive = naive_multiplications(graph, plan.order)
    return CostReport(
        input_storage=input_storage(graph, plan.all_sliced),
        peak_intermediate_storage=max((s.output_storage for s in plan.steps), default=0),
        multiplications=multiplications,
        step_multiplications=per_step,
        naive_multiplications=naive,
        naive_ratio=naive / multiplications if multiplications else 1.0,
        n_subgraphs=plan.n_subgraphs,
    )


class _OrderSearch:
    """Exhaustive search over node orders, lexicographic, pruning on the incumbent."""

    def __init__(self, graph: ComputeGraph, fixed: frozenset[int]):
        self.graph = graph
        self.labels = [graph.node_labels(node.id, fixed) for node in graph.nodes]
        self.best_cost: int | None = None
        self.best_order: tuple[int, ...] = ()

    def run(self) -> tuple[int, ...]:
        for first in range(len(self.labels)):
            self._extend((first,), self.labels[first], 0)
        return self.best_order

    def _extend(self, prefix: tuple[int, ...], cluster: dict, cost: int) -> None:
        if self.best_cost is not None and cost >= self.best_cost:
            return
        if len(prefix) == len(self.labels):
            self.best_cost, self.best_order = cost, prefix
            return
        for node in range(len(self.labels)):
            if node in prefix:
                continue
            layout = pair_layout(self.labels[node], cluster)
            self._extend(prefix + (node,), layout.merged, cost + layout.multiplications)


def _greedy_order(graph: ComputeGraph, fixed: frozenset[int]) -> tuple[int, ...]:
    labels = [graph.node_labels(node.id, fixed) for node in graph.nodes]
    n = len(labels)
    _, first, second = min(
        (pair_layout(labels[b], labels[a]).multiplications, a, b)
        for a in range(n) for b in range(n) if a != b
    )
    order = [first, second]
    cluster = pair_layout(labels[second], labels[first]).merged
    while len(order) < n:
        _, node = min(
            (pair_layout(labels[v], cluster).multiplications, v)
            for v in range(n) if v not in order
        )
        order.append(node)
        cluster = pair_layout(labels[node], cluster).merged
    return tuple(order)


def find_order(graph: ComputeGraph, sliced=()) -> ContractionPlan:
    """Cheapest node order; exhaustive up to ``EXHAUSTIVE_ORDER_MAX_NODES`` nodes, greedy above."""
    fixed = frozenset(sliced)
    n_nodes = len(graph.nodes)
    if n_nodes <= 2:
        return build_plan(graph, tuple(range(n_nodes)), sliced)
    if n_nodes <= EXHAUSTIVE_ORDER_MAX_NODES:
        order = _OrderSearch(graph, fixed).run()
        return build_plan(graph, order, sliced)
    logger.info(f"{n_nodes} nodes: using greedy contraction order")
    return build_plan(graph, _greedy_order(graph, fixed), sliced, optimal=False)


def slice_level1(graph: ComputeGraph, memory_limit: int = MEMORY_LIMIT_VALUES) -> tuple[tuple[int, ...], int]:
    """Slice cut indices until the input tensors of one subgraph fit in ``memory_limit`` values.

    Each round slices the cut whose removal shrinks input storage the most,
    lowest id on a tie. Returns the sliced cut ids and the subgraph count.
    """
    floor = input_storage(graph, [e.id for e in graph.edges])
    if floor > memory_limit:
        raise MemoryLimitError(
            f"input tensors need {floor} values even with every cut sliced, limit is {memory_limit}"
        )
    sliced: list[int] = []
    storage = input_storage(graph, sliced)
    while storage > memory_limit:
        _, cut = min(
            (input_storage(graph, sliced + [e.id]), e.id)
            for e in graph.edges if e.id not in sliced
        )
        sliced.append(cut)
        storage = input_storage(graph, sliced)
        logger.info(f"Sliced cut {cut}: input storage now {storage} values")
    return tuple(sorted(sliced)), 4 ** len(sliced)


def _peak(plan: ContractionPlan) -> int:
    return max((s.output_storage for s in plan.steps), default=0)


def slice_level2(graph: ComputeGraph, plan: ContractionPlan, memory_limit: int = MEMORY_LIMIT_VALUES) -> ContractionPlan:
    """Slice indices of the largest intermediate until every step output fits."""
    while _peak(plan) > memory_limit:
        fixed = set(plan.all_sliced)
        cluster = graph.node_labels(plan.order[0], frozenset(fixed))
        largest, candidates = -1, []
        for node in plan.order[1:]:
            layout = pair_layout(graph.node_labels(node, frozenset(fixed)), cluster)
            if layout.rows * layout.cols > largest:
                largest = layout.rows * layout.cols
                candidates = [label[1] for label in layout.merged if label[0] == "c"]
            cluster = layout.merged
        if not candidates:
            raise MemoryLimitError(
                f"intermediate of {largest} values holds no sliceable index, limit is {memory_limit}"
            )
        trials = [
            (_peak(build_plan(graph, plan.order, plan.sliced, plan.sliced_intermediate + (cut,))), cut)
            for cut in sorted(candidates)
        ]
        _, cut = min(trials)
        plan = build_plan(
            graph, plan.order, plan.sliced, plan.sliced_intermediate + (cut,), plan.optimal
        )
        logger.info(f"Sliced intermediate index {cut}: peak now {_peak(plan)} values")
    return plan


def plan_contraction(graph: ComputeGraph, memory_limit: int = MEMORY_LIMIT_VALUES) -> ContractionPlan:
    """Level-1 slicing, order search on the sliced graph, then level-2 slicing."""
    sliced, _ = slice_level1(graph, memory_limit)
    plan = find_order(graph, sliced)
    return slice_level2(graph, plan, memory_limit)
