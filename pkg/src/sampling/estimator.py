"""Term sampling and the unbiased sampled reconstruction."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from src.config.settings import WORKERS
from src.contraction.engine import contract
from src.contraction.graph import ComputeGraph
from src.models.plan import ContractionPlan
from src.models.sampling import ErrorReport
from src.sampling.analysis import (
    empirical_mse,
    essential_error,
    expected_error,
    optimal_error,
    uniform_error,
)
from src.sampling.weights import TermWeights
from src.utils.errors import SamplingError
from src.utils.rng import make_rng, spawn_rngs

logger = logging.getLogger(__name__)


@dataclass
class SamplingPlan:
    samples: int
    q: np.ndarray
    counts: np.ndarray | None = None
    seed: int | None = None

    @property
    def distinct(self) -> int:
        return 0 if self.counts is None else int(np.count_nonzero(self.counts))


def sample_terms(plan: SamplingPlan, rng: np.random.Generator | None = None) -> np.ndarray:
    """Draw ``plan.samples`` terms independently with replacement from ``plan.q``."""
    rng = rng if rng is not None else make_rng(plan.seed or 0)
    q = np.asarray(plan.q, dtype=float)
    draws = rng.choice(len(q), size=plan.samples, p=q / q.sum())
    plan.counts = np.bincount(draws, minlength=len(q))
    return plan.counts


def estimate(
    graph: ComputeGraph,
    entries: dict[int, np.ndarray],
    plan: SamplingPlan,
    contraction_plan: ContractionPlan,
) -> np.ndarray:
    """Contract only the sampled terms, each scaled by ``lambda_k / (c q_k)``."""
    if plan.counts is None:
        raise SamplingError("sample the terms before estimating")
    sampled = np.flatnonzero(plan.counts)
    if np.any(plan.q[sampled] <= 0):
        raise SamplingError("a sampled term has probability 0")
    terms = {
        int(k): float(plan.counts[k] / (plan.samples * plan.q[k]))
        for k in sampled
    }
    return contract(graph, entries, contraction_plan, terms=terms).values


def run_trials(
    graph: ComputeGraph,
    entries: dict[int, np.ndarray],
    contraction_plan: ContractionPlan,
    weights: TermWeights,
    q: np.ndarray,
    samples: int,
    trials: int,
    seed: int,
    sampler: str,
    truth: np.ndarray | None = None,
    narrow: int | None = None,
) -> tuple[ErrorReport, list[np.ndarray]]:
    """Run ``trials`` independent seeded estimates concurrently and summarize them.

    Returns the report and the per-trial estimates in seed order.
    """
    p_norm_sq = float(np.sum(truth ** 2)) if truth is not None else None
    rngs = spawn_rngs(seed, trials)

    def one(rng):
        plan = SamplingPlan(samples=samples, q=q)
        sample_terms(plan, rng)
        return estimate(graph, entries, plan, contraction_plan), plan.distinct

    with ThreadPoolExecutor(max_workers=WORKERS) as pool:
        outcomes = list(pool.map(one, rngs))
    estimates = [values for values, _ in outcomes]
    distinct = [d for _, d in outcomes]

    mse = spread = bias_z = None
    if truth is not None:
        mse, spread = empirical_mse(estimates, truth)
        if trials > 1:
            stacked = np.stack(estimates)
            errors = stats.sem(stacked, axis=0)
            gap = np.abs(stacked.mean(axis=0) - truth)
            bias_z = float(np.max(np.where(errors > 0, gap / np.where(errors > 0, errors, 1), 0.0)))

    try:
        essential = essential_error(graph, weights, samples, narrow, p_norm_sq)
    except SamplingError:
        essential = None

    report = ErrorReport(
        sampler=sampler,
        samples=samples,
        trials=trials,
        seed=seed,
        n_terms=weights.n_terms,
        expected_error=expected_error(q, weights, samples, p_norm_sq),
        optimal_error=optimal_error(weights, samples, p_norm_sq),
        uniform_error=uniform_error(weights, samples, p_norm_sq),
        essential_error=essential,
        empirical_mse=mse,
        mse_standard_error=spread,
        mean_distinct_terms=float(np.mean(distinct)),
        max_bias_z=bias_z,
        q_max=float(np.max(q)),
        q_nonzero=int(np.count_nonzero(q)),
    )
    logger.info(
        f"{sampler} sampling, c={samples}, T={trials}: expected error {report.expected_error:.3e}, "
        f"empirical {mse if mse is None else f'{mse:.3e}'}, {report.mean_distinct_terms:.1f} distinct terms"
    )
    return report, estimates
