"""Sampling report models."""
from pydantic import BaseModel, ConfigDict


class ErrorReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    sampler: str
    samples: int
    trials: int
    seed: int
    n_terms: int
    expected_error: float
    optimal_error: float
    uniform_error: float
    essential_error: float | None = None
    empirical_mse: float | None = None
    mse_standard_error: float | None = None
    mean_distinct_terms: float
    max_bias_z: float | None = None  # largest |mean - P| / standard error over states
    q_max: float
    q_nonzero: int
