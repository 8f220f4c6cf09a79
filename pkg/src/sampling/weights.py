"""Term weights and the sampling distributions built from them.

Term k is the outer product of one entry per subcircuit, so its L2 norm is the
product of the entry norms. Norms are taken once per (subcircuit, local
basis) and broadcast over the global terms.
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.contraction.graph import ComputeGraph
from src.utils.errors import SamplingError

logger = logging.getLogger(__name__)

SAMPLERS = ("none", "uniform", "essential", "optimal")


@dataclass(frozen=True)
class TermWeights:
    norms: dict[int, np.ndarray]  # subcircuit -> ||p_i|| per local basis, shape (4,) * d_i
    products: np.ndarray  # w_k, length 4^K
    squared: np.ndarray  # w_k ** 2

    @property
    def n_terms(self) -> int:
        return len(self.products)


def broadcast_terms(graph: ComputeGraph, per_node: dict[int, np.ndarray]) -> np.ndarray:
    """Product over subcircuits of a per-local-basis value, for every global k."""
    n_cuts = graph.n_cuts
    total = np.ones((4,) * n_cuts)
    for node in graph.nodes:
        axes = list(graph.node_cuts(node.id))
        cuts = sorted(set(axes))
        # a self-edge's two axes take the same digit
        values = np.einsum(per_node[node.id], axes, cuts) if len(cuts) < len(axes) else per_node[node.id]
        shape = [4 if c in cuts else 1 for c in range(n_cuts)]
        total = total * values.reshape(shape)
    return total.reshape(-1)


def compute_weights(graph: ComputeGraph, entries: dict[int, np.ndarray]) -> TermWeights:
    norms = {node_id: np.linalg.norm(values, axis=-1) for node_id, values in entries.items()}
    products = broadcast_terms(graph, norms)
    return TermWeights(norms=norms, products=products, squared=products ** 2)


def uniform_probabilities(n_terms: int) -> np.ndarray:
    return np.full(n_terms, 1.0 / n_terms)


def optimal_probabilities(weights: TermWeights | np.ndarray) -> np.ndarray:
    """q_k proportional to the term norm; minimizes the expected error."""
    products = weights.products if isinstance(weights, TermWeights) else np.asarray(weights, dtype=float)
    total = products.sum()
    if total <= 0:
        raise SamplingError("all term weights are zero")
    return products / total


def default_narrow(graph: ComputeGraph) -> int:
    """Subcircuit with the smallest entry tensor, lowest index on a tie."""
    return min(
        (4 ** graph.degree(node.id) * node.output_dim, node.id) for node in graph.nodes
    )[1]


def narrow_norms(graph: ComputeGraph, weights: TermWeights, narrow: int) -> np.ndarray:
    """||p_narrow|| for every global term."""
    per_node = {node.id: np.ones((4,) * graph.degree(node.id)) for node in graph.nodes}
    per_node[narrow] = weights.norms[narrow]
    return broadcast_terms(graph, per_node)


def essential_probabilities(graph: ComputeGraph, weights: TermWeights, narrow: int | None = None) -> np.ndarray:
    """q_k proportional to the norm of one (cheap) subcircuit's entry."""
    narrow = default_narrow(graph) if narrow is None else narrow
    norms = narrow_norms(graph, weights, narrow)
    undefined = np.flatnonzero((norms == 0) & (weights.products > 0))
    if undefined.size:
        raise SamplingError(
            f"subcircuit {narrow} has a zero norm on term {int(undefined[0])} whose weight is not zero"
        )
    total = norms.sum()
    if total <= 0:
        raise SamplingError(f"subcircuit {narrow} has zero norm on every term")
    logger.debug(f"Essential sampling on subcircuit {narrow}")
    return norms / total


def sampling_probabilities(
    sampler: str, graph: ComputeGraph, weights: TermWeights, narrow: int | None = None
) -> np.ndarray:
    if sampler == "uniform":
        return uniform_probabilities(weights.n_terms)
    if sampler == "essential":
        return essential_probabilities(graph, weights, narrow)
    if sampler == "optimal":
        return optimal_probabilities(weights)
    raise SamplingError(f"unknown sampler '{sampler}', expected one of {SAMPLERS[1:]}")
