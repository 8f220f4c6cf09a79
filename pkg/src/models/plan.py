"""Contraction plans and their predicted cost."""
from pydantic import BaseModel, ConfigDict


class PlanStep(BaseModel):
    """One pairwise product: the incoming node's leading matrix times the cluster's trailing matrix."""

    model_config = ConfigDict(frozen=True)

    node: int
    contracted: tuple[int, ...]  # cut ids summed in this step
    rows: int
    inner: int
    cols: int
    operand_storage: int
    output_storage: int

    @property
    def multiplications(self) -> int:
        return self.rows * self.inner * self.cols


class ContractionPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    order: tuple[int, ...]
    steps: tuple[PlanStep, ...]
    sliced: tuple[int, ...] = ()  # level 1: input cut indices
    sliced_intermediate: tuple[int, ...] = ()  # level 2: indices of large intermediates
    optimal: bool = True

    @property
    def all_sliced(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.sliced) | set(self.sliced_intermediate)))

    @property
    def n_subgraphs(self) -> int:
        return 4 ** len(self.all_sliced)


class CostReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    input_storage: int
    peak_intermediate_storage: int
    multiplications: int
    step_multiplications: tuple[int, ...]
    naive_multiplications: int
    naive_ratio: float
    n_subgraphs: int
