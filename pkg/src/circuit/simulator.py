"""Dense statevector simulator.

The state is kept as a complex128 tensor of shape ``[2] * n``; axis ``q`` is
qubit ``q``, so qubit 0 is the most significant bit of a flattened index.
"""
from math import cos, pi, sin, sqrt

import numpy as np

from src.circuit.ir import Circuit, Gate
from src.config.settings import SIMULATOR_MAX_QUBITS
from src.utils.errors import SimulatorWidthError

_SQRT2_INV = 1 / sqrt(2)
_GATE_CACHE = {
    "h": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "t": np.array([[1, 0], [0, np.exp(1j * pi / 4)]], dtype=complex),
    "cx": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
}
_GATE_PARAM = {
    "rx": lambda t: np.array([[cos(t / 2), -1j * sin(t / 2)], [-1j * sin(t / 2), cos(t / 2)]], dtype=complex),
    "ry": lambda t: np.array([[cos(t / 2), -sin(t / 2)], [sin(t / 2), cos(t / 2)]], dtype=complex),
    "rz": lambda t: np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=complex),
}


def gate_matrix(gate: Gate) -> np.ndarray:
    if gate.name in _GATE_CACHE:
        return _GATE_CACHE[gate.name]
    return _GATE_PARAM[gate.name](gate.params[0])


def zero_state(n_qubits: int) -> np.ndarray:
    state = np.zeros([2] * n_qubits, dtype=np.complex128)
    state[(0,) * n_qubits] = 1.0
    return state


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    k = len(gate.qubits)
    tensor = gate_matrix(gate).reshape([2] * (2 * k))
    state = np.tensordot(tensor, state, axes=(list(range(k, 2 * k)), list(gate.qubits)))
    return np.moveaxis(state, list(range(k)), list(gate.qubits))


def run_statevector(circuit: Circuit, state: np.ndarray | None = None) -> np.ndarray:
    """Apply every gate of ``circuit`` to ``state`` (|0...0> when omitted)."""
    if circuit.n_qubits > SIMULATOR_MAX_QUBITS:
        raise SimulatorWidthError(
            f"{circuit.n_qubits} qubits exceed the simulator cap of {SIMULATOR_MAX_QUBITS}"
        )
    if state is None:
        state = zero_state(circuit.n_qubits)
    for gate in circuit.gates:
        state = apply_gate(state, gate)
    return state


def probabilities(state: np.ndarray) -> np.ndarray:
    return (np.abs(state) ** 2).reshape(-1)


def simulate_full(circuit: Circuit) -> np.ndarray:
    """Computational-basis probabilities of ``circuit`` run from |0...0>, length 2^n."""
    return probabilities(run_statevector(circuit))
