"""Serialized cut-search results."""
from pydantic import BaseModel, ConfigDict


class CutRecord(BaseModel):
    """One cut: the DAG edge it severs and the subcircuits on either side."""

    model_config = ConfigDict(frozen=True)

    id: int
    edge: int  # index into GateDag.edges
    gate_a: int  # circuit gate index of the earlier gate
    gate_b: int  # circuit gate index of the later gate
    qubit: int
    source: int  # measurement-side subcircuit
    target: int  # initialization-side subcircuit


class CutSolution(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_subcircuits: int
    alpha: float
    load_cap: int
    subcircuit_map: tuple[int, ...]  # vertex -> subcircuit
    cuts: tuple[CutRecord, ...]
    objective: int  # L = max_c (I_c + O_c)
    gate_counts: tuple[int, ...]  # S_c
    incoming: tuple[int, ...]  # I_c
    outgoing: tuple[int, ...]  # O_c
    qubit_counts: tuple[int, ...]
    effective_qubits: tuple[int, ...]
    output_qubits: tuple[tuple[int, ...], ...]  # original qubits measured in each subcircuit
    optimal: bool = True

    @property
    def n_cuts(self) -> int:
        return len(self.cuts)

    def summary(self) -> dict:
        return {
            "n_subcircuits": self.n_subcircuits,
            "K": self.n_cuts,
            "L": self.objective,
            "gate_counts": list(self.gate_counts),
            "qubit_counts": list(self.qubit_counts),
            "effective_qubits": list(self.effective_qubits),
            "optimal": self.optimal,
        }

    def to_json_dict(self) -> dict:
        """Cut edges as (gate_index_a, gate_index_b, qubit) plus the subcircuit map."""
        return {
            "cut_edges": [[c.gate_a, c.gate_b, c.qubit] for c in self.cuts],
            "subcircuit_map": list(self.subcircuit_map),
            **self.summary(),
        }


class QuantumArea(BaseModel):
    model_config = ConfigDict(frozen=True)

    full_area: int
    max_subcircuit_area: int
    ratio: float
