"""Closed-form expected errors of the sampled reconstruction.

For c independent draws from q the estimator
``sum_k lambda_k / (c q_k) * term_k`` has expected squared error
``(sum_k |term_k|^2 / q_k - |P|^2) / c``.
"""
import numpy as np
from scipy import stats

from src.contraction.graph import ComputeGraph
from src.sampling.weights import TermWeights, default_narrow, narrow_norms
from src.utils.errors import SamplingError


def expected_error(q: np.ndarray, weights: TermWeights, samples: int, p_norm_sq: float | None = None) -> float:
    """Expected error for any valid q; without ``p_norm_sq`` only the first term is reported."""
    q = np.asarray(q, dtype=float)
    live = weights.squared > 0
    undefined = np.flatnonzero(live & (q <= 0))
    if undefined.size:
        raise SamplingError(f"term {int(undefined[0])} has weight but probability 0")
    first = float(np.sum(weights.squared[live] / q[live]))
    return (first - (p_norm_sq or 0.0)) / samples


def uniform_error(weights: TermWeights, samples: int, p_norm_sq: float | None = None) -> float:
    return (weights.n_terms * float(weights.squared.sum()) - (p_norm_sq or 0.0)) / samples


def optimal_error(weights: TermWeights, samples: int, p_norm_sq: float | None = None) -> float:
    return (float(weights.products.sum()) ** 2 - (p_norm_sq or 0.0)) / samples


def essential_error(
    graph: ComputeGraph,
    weights: TermWeights,
    samples: int,
    narrow: int | None = None,
    p_norm_sq: float | None = None,
) -> float:
    """Double sum over (k, k') of |C_k'| / |C_k| * |term_k|^2, factorized into two single sums."""
    narrow = default_narrow(graph) if narrow is None else narrow
    norms = narrow_norms(graph, weights, narrow)
    live = weights.squared > 0
    if np.any(live & (norms == 0)):
        raise SamplingError(f"subcircuit {narrow} has a zero norm on a term with weight")
    double_sum = float(norms.sum()) * float(np.sum(weights.squared[live] / norms[live]))
    return (double_sum - (p_norm_sq or 0.0)) / samples


def empirical_mse(estimates: list[np.ndarray], truth: np.ndarray) -> tuple[float, float]:
    """Mean squared error over runs and its standard error."""
    errors = np.array([np.sum((truth - estimate) ** 2) for estimate in estimates])
    spread = float(stats.sem(errors)) if len(errors) > 1 else 0.0
    return float(errors.mean()), spread
