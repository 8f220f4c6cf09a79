"""Parser for the line-oriented circuit text format.

    # comment
    qubits 3
    h 0
    cx 0 1; rz 2 1.5707963267948966

One statement per line, or several separated by ';'. The ``qubits`` header
must be the first statement.
"""
import pyparsing as pp

from src.circuit.ir import GATE_NAMES, PARAMETRIC_GATES, Circuit, Gate
from src.utils.errors import CircuitSyntaxError, GateArityError, QubitIndexError


class CircuitGrammar:
    """Tokens of one statement."""

    # pylint: disable = too-few-public-methods

    name = pp.Word(pp.alphas, pp.alphanums + "_")
    number = pp.Regex(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
    statement = name + pp.ZeroOrMore(number)


def _statements(text: str):
    for line_number, line in enumerate(text.splitlines(), start=1):
        code = line.split("#", 1)[0]
        for chunk in code.split(";"):
            if chunk.strip():
                yield line_number, chunk.strip()


def _qubit(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise CircuitSyntaxError(f"qubit index '{token}' is not an integer", line) from None


def parse_circuit(text: str) -> Circuit:
    """Parse circuit source text into a ``Circuit`` with gates in source order."""
    n_qubits = None
    gates: list[Gate] = []

    for line, chunk in _statements(text):
        try:
            tokens = CircuitGrammar.statement.parse_string(chunk, parse_all=True)
        except pp.ParseException as exc:
            raise CircuitSyntaxError(f"cannot parse '{chunk}': {exc.msg}", line) from None
        name, args = tokens[0], list(tokens[1:])

        if n_qubits is None:
            if name != "qubits" or len(args) != 1:
                raise CircuitSyntaxError("expected header 'qubits <n>'", line)
            n_qubits = _qubit(args[0], line)
            if n_qubits < 1:
                raise CircuitSyntaxError(f"qubit count must be positive, got {n_qubits}", line)
            continue

        if name == "qubits":
            raise CircuitSyntaxError("duplicate 'qubits' header", line)
        if name not in GATE_NAMES:
            raise CircuitSyntaxError(f"unknown gate '{name}'", line)

        n_params = 1 if name in PARAMETRIC_GATES else 0
        qubit_tokens = args[: len(args) - n_params] if n_params else args
        param_tokens = args[len(args) - n_params:] if n_params else []
        if n_params and not args:
            raise GateArityError(f"line {line}: gate '{name}' is missing its angle")
        qubits = tuple(_qubit(token, line) for token in qubit_tokens)
        for qubit in qubits:
            if not 0 <= qubit < n_qubits:
                raise QubitIndexError(f"line {line}: qubit {qubit} outside [0, {n_qubits})")
        try:
            gates.append(Gate(name=name, qubits=qubits, params=tuple(map(float, param_tokens))))
        except GateArityError as exc:
            raise GateArityError(f"line {line}: {exc}") from exc

    if n_qubits is None:
        raise CircuitSyntaxError("missing 'qubits <n>' header", 1)
    return Circuit(n_qubits=n_qubits, gates=tuple(gates))


def load_circuit(path: str) -> Circuit:
    with open(path, "r") as f:
        return parse_circuit(f.read())
