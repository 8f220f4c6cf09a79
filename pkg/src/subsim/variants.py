"""Pauli-basis variants of a subcircuit.

Each cut carries a label in I, X, Y, Z (indices 0..3). The measurement side
rotates the cut qubit into the label's eigenbasis and weighs the two outcomes
by the eigenvalues. The initialization side prepares the label's operator as
a signed mix of pure states; the 1/2 of the wire identity sits here, so the
all-I entry of a subcircuit is still a probability distribution.
"""
from dataclasses import dataclass
from itertools import product
from math import pi

from src.circuit.ir import Circuit, Gate
from src.config.settings import PAULI_LABELS
from src.cutting.fragments import INIT, MEASURE, Fragment

INIT_PREP = {
    "zero": (),
    "one": (("x", ()),),
    "plus": (("h", ()),),
    "plus_i": (("h", ()), ("s", ())),
}

INIT_WEIGHTS = {
    0: (("zero", 0.5), ("one", 0.5)),
    1: (("plus", 1.0), ("zero", -0.5), ("one", -0.5)),
    2: (("plus_i", 1.0), ("zero", -0.5), ("one", -0.5)),
    3: (("zero", 0.5), ("one", -0.5)),
}

# rotation applied before reading the cut qubit; I and Z read it as is
MEASURE_ROTATION = {
    0: (),
    1: (("h", ()),),
    2: (("rz", (-pi / 2,)), ("h", ())),
    3: (),
}

MEASURE_SIGNS = {0: (1.0, 1.0), 1: (1.0, -1.0), 2: (1.0, -1.0), 3: (1.0, -1.0)}


@dataclass(frozen=True)
class VariantTerm:
    inits: tuple[str, ...]  # prepared state per init role
    rotations: tuple[int, ...]  # label per measure role
    weight: float


@dataclass(frozen=True)
class Variant:
    basis: tuple[int, ...]  # label per attached cut, ascending cut id
    terms: tuple[VariantTerm, ...]

    def describe(self) -> str:
        return "".join(PAULI_LABELS[label] for label in self.basis)


def split_roles(fragment: Fragment, basis: tuple[int, ...]) -> tuple[list, list]:
    inits, measures = [], []
    for role, label in zip(fragment.roles, basis):
        (inits if role.role == INIT else measures).append((role, label))
    return inits, measures


def variant_terms(fragment: Fragment, basis: tuple[int, ...]) -> tuple[VariantTerm, ...]:
    inits, measures = split_roles(fragment, basis)
    rotations = tuple(label for _, label in measures)
    terms = []
    for choice in product(*(INIT_WEIGHTS[label] for _, label in inits)):
        weight = 1.0
        for _, w in choice:
            weight *= w
        terms.append(VariantTerm(tuple(state for state, _ in choice), rotations, weight))
    return tuple(terms)


def enumerate_variants(fragment: Fragment) -> list[Variant]:
    """All 4^d local bases of ``fragment`` with the runs that realize each."""
    return [
        Variant(basis, variant_terms(fragment, basis))
        for basis in product(range(4), repeat=len(fragment.roles))
    ]


def variant_circuit(fragment: Fragment, term: VariantTerm) -> Circuit:
    """Preparations, then the fragment, then measurement rotations."""
    init_roles = [r for r in fragment.roles if r.role == INIT]
    measure_roles = [r for r in fragment.roles if r.role == MEASURE]
    gates = []
    for role, state in zip(init_roles, term.inits):
        gates += [Gate(name=n, qubits=(role.local_qubit,), params=p) for n, p in INIT_PREP[state]]
    gates += fragment.circuit.gates
    for role, label in zip(measure_roles, term.rotations):
        gates += [Gate(name=n, qubits=(role.local_qubit,), params=p) for n, p in MEASURE_ROTATION[label]]
    return Circuit(n_qubits=fragment.circuit.n_qubits, gates=tuple(gates))
