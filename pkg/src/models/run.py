"""Run configuration and report."""
import json
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.circuit.benchmarks import BENCHMARK_KINDS
from src.config.settings import (
    DEFAULT_ALPHA,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    DEGREE_CAP,
    MAX_BINS,
    MAX_RECURSIONS,
    MAX_SUBCIRCUITS,
    MEMORY_LIMIT_VALUES,
    REPORT_SCHEMA_VERSION,
    SIMULATOR_MAX_QUBITS,
    SOLUTION_THRESHOLD,
    SOLVER_TIMEOUT_S,
    TOP_R,
)
from src.models.cut import QuantumArea
from src.models.plan import ContractionPlan, CostReport
from src.models.sampling import ErrorReport
from src.utils.errors import ConfigError

Mode = Literal["cut", "full", "merge", "subset", "cost"]
Sampler = Literal["none", "uniform", "essential", "optimal"]


class RunConfig(BaseModel):
    """One validated run. Built from CLI flags or a JSON file."""

    model_config = ConfigDict(extra="forbid")

    circuit_path: str | None = None
    benchmark: str | None = None
    n_qubits: int | None = None
    benchmark_params: dict = Field(default_factory=dict)
    graph_spec: str | None = None

    mode: Mode = "full"
    alpha: float = DEFAULT_ALPHA
    max_subcircuits: int = MAX_SUBCIRCUITS
    solver_timeout_s: float = SOLVER_TIMEOUT_S
    degree_cap: int = DEGREE_CAP
    memory_limit_values: int = MEMORY_LIMIT_VALUES

    max_bins: int = MAX_BINS
    top_r: int = TOP_R
    max_recursions: int = MAX_RECURSIONS
    solution_threshold: float = SOLUTION_THRESHOLD
    states: list[str] = Field(default_factory=list)

    sampler: Sampler = "none"
    samples: int = 1000
    trials: int = DEFAULT_TRIALS
    narrow_subcircuit: int | None = None
    seed: int = DEFAULT_SEED

    output: str | None = None

    @model_validator(mode="after")
    def _check_consistency(self) -> "RunConfig":
        sources = [s for s in (self.circuit_path, self.benchmark, self.graph_spec) if s]
        if len(sources) != 1:
            raise ConfigError("give exactly one of a circuit file, a benchmark or a graph spec")
        if self.graph_spec and self.mode != "cost":
            raise ConfigError("a graph spec only supports the cost mode")
        if self.benchmark:
            if self.benchmark not in BENCHMARK_KINDS:
                raise ConfigError(f"unknown benchmark '{self.benchmark}', expected one of {BENCHMARK_KINDS}")
            if self.n_qubits is None:
                raise ConfigError("a benchmark needs a qubit count")
            if self.mode == "full" and self.n_qubits > SIMULATOR_MAX_QUBITS:
                raise ConfigError(
                    f"full mode needs n <= {SIMULATOR_MAX_QUBITS}, got {self.n_qubits}; use merge or subset"
                )
        if not 0 < self.alpha <= 1:
            raise ConfigError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.max_subcircuits < 1:
            raise ConfigError(f"max_subcircuits must be positive, got {self.max_subcircuits}")
        if self.mode == "subset" and not self.states:
            raise ConfigError("subset mode needs a state list")
        if self.mode == "merge" and (self.max_bins < 2 or self.top_r < 1):
            raise ConfigError("merge mode needs max_bins >= 2 and top_r >= 1")
        if self.sampler != "none":
            if self.mode != "full":
                raise ConfigError("sampling runs in full mode only")
            if self.samples < 1 or self.trials < 1:
                raise ConfigError("sampling needs samples >= 1 and trials >= 1")
        return self

    @classmethod
    def from_file(cls, path: str, **overrides) -> "RunConfig":
        with open(path, "r") as f:
            data = json.load(f)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


class RunReport(BaseModel):
    schema_version: str = REPORT_SCHEMA_VERSION
    config: dict
    circuit: dict | None = None
    cut: dict | None = None
    quantum_area: QuantumArea | None = None
    plan: ContractionPlan | None = None
    cost: CostReport | None = None
    actual_multiplications: int | None = None
    result: dict | None = None
    sampling: ErrorReport | None = None
    error: dict | None = None
    timing: dict[str, float] = Field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True)
