"""Gate-list intermediate representation of a quantum circuit."""
from pydantic import BaseModel, ConfigDict, model_validator

from src.utils.errors import CircuitSyntaxError, GateArityError, QubitIndexError

SINGLE_QUBIT_GATES = frozenset({"h", "x", "y", "z", "s", "t", "rx", "ry", "rz"})
TWO_QUBIT_GATES = frozenset({"cx", "cz"})
PARAMETRIC_GATES = frozenset({"rx", "ry", "rz"})
GATE_NAMES = SINGLE_QUBIT_GATES | TWO_QUBIT_GATES


class Gate(BaseModel):
    """One gate application. Angles are in radians."""

    model_config = ConfigDict(frozen=True)

    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    @model_validator(mode="after")
    def _check_shape(self) -> "Gate":
        if self.name not in GATE_NAMES:
            raise CircuitSyntaxError(f"unknown gate '{self.name}'", line=0)
        arity = 2 if self.name in TWO_QUBIT_GATES else 1
        if len(self.qubits) != arity:
            raise GateArityError(
                f"gate '{self.name}' takes {arity} qubit(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise GateArityError(f"gate '{self.name}' repeats qubit {self.qubits[0]}")
        n_params = 1 if self.name in PARAMETRIC_GATES else 0
        if len(self.params) != n_params:
            raise GateArityError(
                f"gate '{self.name}' takes {n_params} angle(s), got {len(self.params)}"
            )
        return self

    @property
    def is_two_qubit(self) -> bool:
        return self.name in TWO_QUBIT_GATES


class Circuit(BaseModel):
    """Ordered gate list on ``n_qubits`` lines; list order is time order per line."""

    model_config = ConfigDict(frozen=True)

    n_qubits: int
    gates: tuple[Gate, ...] = ()

    @model_validator(mode="after")
    def _check_qubits(self) -> "Circuit":
        if self.n_qubits < 1:
            raise QubitIndexError(f"circuit needs at least one qubit, got {self.n_qubits}")
        for gate in self.gates:
            for qubit in gate.qubits:
                if not 0 <= qubit < self.n_qubits:
                    raise QubitIndexError(
                        f"qubit {qubit} of gate '{gate.name}' outside [0, {self.n_qubits})"
                    )
        return self

    def two_qubit_gates(self) -> list[int]:
        return [index for index, gate in enumerate(self.gates) if gate.is_two_qubit]

    def depth(self) -> int:
        level = [0] * self.n_qubits
        for gate in self.gates:
            layer = max(level[q] for q in gate.qubits) + 1
            for q in gate.qubits:
                level[q] = layer
        return max(level, default=0)


def serialize_circuit(circuit: Circuit) -> str:
    """Render the line-oriented text format accepted by ``parse_circuit``."""
    lines = [f"qubits {circuit.n_qubits}"]
    for gate in circuit.gates:
        fields = [gate.name, *map(str, gate.qubits), *map(repr, gate.params)]
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"
