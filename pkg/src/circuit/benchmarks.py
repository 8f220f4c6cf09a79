"""Benchmark circuit generators.

All generators are deterministic for a given seed. Controlled-phase gates are
emitted as their rz + cx decomposition.
"""
import logging
from math import acos, pi, sqrt

import networkx as nx
import numpy as np

from src.circuit.ir import Circuit, Gate
from src.utils.errors import ConfigError
from src.utils.rng import make_rng

logger = logging.getLogger(__name__)

BENCHMARK_KINDS = ("bv", "qaoa-regular", "qaoa-erdos", "supremacy-grid", "aqft", "planted", "uniform")


def _g(name: str, *qubits: int, angle: float | None = None) -> Gate:
    params = () if angle is None else (float(angle),)
    return Gate(name=name, qubits=qubits, params=params)


def controlled_phase(control: int, target: int, theta: float) -> list[Gate]:
    """CP(theta) up to a global phase."""
    return [
        _g("rz", control, angle=theta / 2),
        _g("cx", control, target),
        _g("rz", target, angle=-theta / 2),
        _g("cx", control, target),
        _g("rz", target, angle=theta / 2),
    ]


def bv(n: int, secret: str | None = None, seed: int = 0) -> Circuit:
    """Bernstein-Vazirani on ``n`` qubits whose output state is ``secret``.

    Qubits ``0..n-2`` carry the hidden string; qubit ``n-1`` is the
    phase-kickback ancilla, flipped at the end so it reads the last bit.
    """
    if n < 2:
        raise ConfigError(f"bv needs at least 2 qubits, got {n}", phase="bench")
    if secret is None:
        rng = make_rng(seed)
        bits = rng.integers(0, 2, size=n)
        bits[0] = 1
        secret = "".join(map(str, bits))
    if len(secret) != n or set(secret) - {"0", "1"}:
        raise ConfigError(f"secret must be a {n}-bit string, got '{secret}'", phase="bench")

    ancilla = n - 1
    gates = [_g("h", q) for q in range(n - 1)]
    gates += [_g("x", ancilla), _g("h", ancilla)]
    gates += [_g("cx", q, ancilla) for q in range(n - 1) if secret[q] == "1"]
    gates += [_g("h", q) for q in range(n - 1)]
    gates.append(_g("h", ancilla))
    if secret[-1] == "0":
        gates.append(_g("x", ancilla))
    return Circuit(n_qubits=n, gates=tuple(gates))


def _qaoa(n: int, graph: nx.Graph, rng: np.random.Generator, rounds: int) -> Circuit:
    gates = [_g("h", q) for q in range(n)]
    for _ in range(rounds):
        gamma, beta = rng.uniform(0, 2 * pi, size=2)
        for a, b in sorted(tuple(sorted(e)) for e in graph.edges):
            gates += [_g("cx", a, b), _g("rz", b, angle=2 * gamma), _g("cx", a, b)]
        gates += [_g("rx", q, angle=2 * beta) for q in range(n)]
    return Circuit(n_qubits=n, gates=tuple(gates))


def qaoa_regular(n: int, seed: int = 0, rounds: int = 1) -> Circuit:
    """QAOA on a random 3-regular graph with random angles."""
    if n < 4 or n % 2:
        raise ConfigError(f"3-regular graphs need an even n >= 4, got {n}", phase="bench")
    graph = nx.random_regular_graph(3, n, seed=seed)
    return _qaoa(n, graph, make_rng(seed), rounds)


def qaoa_erdos(n: int, seed: int = 0, rounds: int = 1, edge_probability: float = 0.5) -> Circuit:
    """QAOA on a random Erdos-Renyi graph with random angles."""
    if n < 2:
        raise ConfigError(f"qaoa-erdos needs at least 2 qubits, got {n}", phase="bench")
    graph = nx.erdos_renyi_graph(n, edge_probability, seed=seed)
    return _qaoa(n, graph, make_rng(seed), rounds)


def supremacy_pairs(rows: int, cols: int, pattern: int) -> list[tuple[int, int]]:
    """cz pairs of one cycle: 0/1 horizontal even/odd, 2/3 vertical even/odd."""
    pairs = []
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if pattern in (0, 1) and c % 2 == pattern and c + 1 < cols:
                pairs.append((q, q + 1))
            if pattern in (2, 3) and r % 2 == pattern - 2 and r + 1 < rows:
                pairs.append((q, q + cols))
    return pairs


def supremacy_grid(rows: int, cols: int, seed: int = 0, depth: int = 8) -> Circuit:
    """Random grid circuit of depth (1 + depth + 1).

    A Hadamard layer, ``depth`` cycles each holding the cz pattern
    ``cycle % 4`` followed by one random gate from {t, rx(pi/2), ry(pi/2)}
    on every qubit, and a closing Hadamard layer. Gate count is
    ``n * (depth + 2) + sum(len(supremacy_pairs(rows, cols, c % 4)))``.
    """
    n = rows * cols
    if n < 2:
        raise ConfigError(f"grid {rows}x{cols} is too small", phase="bench")
    rng = make_rng(seed)
    gates = [_g("h", q) for q in range(n)]
    for cycle in range(depth):
        gates += [_g("cz", a, b) for a, b in supremacy_pairs(rows, cols, cycle % 4)]
        for q, choice in enumerate(rng.integers(0, 3, size=n)):
            if choice == 0:
                gates.append(_g("t", q))
            elif choice == 1:
                gates.append(_g("rx", q, angle=pi / 2))
            else:
                gates.append(_g("ry", q, angle=pi / 2))
    gates += [_g("h", q) for q in range(n)]
    return Circuit(n_qubits=n, gates=tuple(gates))


def aqft(n: int, degree: int, seed: int = 0) -> Circuit:
    """Approximate QFT keeping rotations between qubits at most ``degree`` apart.

    The input is a random computational-basis state drawn from ``seed``.
    """
    if n < 2 or degree < 1:
        raise ConfigError(f"aqft needs n >= 2 and degree >= 1, got n={n}, degree={degree}", phase="bench")
    rng = make_rng(seed)
    gates = [_g("x", q) for q, bit in enumerate(rng.integers(0, 2, size=n)) if bit]
    for j in range(n):
        gates.append(_g("h", j))
        for k in range(j + 1, min(n, j + degree + 1)):
            gates += controlled_phase(k, j, pi / 2 ** (k - j))
    return Circuit(n_qubits=n, gates=tuple(gates))


def _planted_patterns(n: int, m: int, seed: int) -> list[str]:
    width = n - (m - 1)
    rng = make_rng(seed)
    return ["".join(map(str, row)) for row in rng.integers(0, 2, size=(m, width))]


def planted_solutions(n: int, m: int, seed: int = 0) -> list[str]:
    """The ``m`` output states of ``planted(n, m, seed)``."""
    patterns = _planted_patterns(n, m, seed)
    selectors = {1: [""], 2: ["0", "1"], 3: ["00", "10", "11"]}[m]
    return sorted(s + p for s, p in zip(selectors, patterns))


def planted(n: int, m: int = 3, seed: int = 0) -> Circuit:
    """Output uniform over ``m`` (1..3) planted states with zero background.

    The first ``m - 1`` qubits select a branch; the remaining data qubits are
    written with an affine function of the selectors so that every branch
    carries its own pattern.
    """
    if m not in (1, 2, 3) or n < m + 1:
        raise ConfigError(f"planted supports 1..3 solutions on n > m qubits, got n={n}, m={m}", phase="bench")
    patterns = _planted_patterns(n, m, seed)
    offset = m - 1
    gates: list[Gate] = []
    if m == 2:
        gates.append(_g("h", 0))
    elif m == 3:
        gates.append(_g("ry", 0, angle=2 * acos(1 / sqrt(3))))
        # controlled (ry(pi/2) x): branch 1 of selector 0 splits evenly
        gates += [_g("ry", 1, angle=-pi / 4), _g("cx", 0, 1), _g("ry", 1, angle=pi / 4)]

    def flips(a: str, b: str) -> list[int]:
        return [j for j in range(len(a)) if a[j] != b[j]]

    gates += [_g("x", offset + j) for j, bit in enumerate(patterns[0]) if bit == "1"]
    if m >= 2:
        gates += [_g("cx", 0, offset + j) for j in flips(patterns[0], patterns[1])]
    if m == 3:
        gates += [_g("cx", 1, offset + j) for j in flips(patterns[1], patterns[2])]
    return Circuit(n_qubits=n, gates=tuple(gates))


def uniform(n: int) -> Circuit:
    """Every basis state equally likely: a Hadamard layer followed by a cx chain."""
    if n < 2:
        raise ConfigError(f"uniform needs at least 2 qubits, got {n}", phase="bench")
    gates = [_g("h", q) for q in range(n)]
    gates += [_g("cx", q, q + 1) for q in range(n - 1)]
    return Circuit(n_qubits=n, gates=tuple(gates))


def _grid_shape(n: int) -> tuple[int, int]:
    rows = max(r for r in range(1, int(sqrt(n)) + 1) if n % r == 0)
    return rows, n // rows


def generate_benchmark(kind: str, n: int, seed: int = 0, **params) -> Circuit:
    """Dispatch to the generator named ``kind``."""
    logger.debug(f"Generating {kind}({n}) with seed {seed} and {params}")
    if kind == "bv":
        return bv(n, secret=params.get("secret"), seed=seed)
    if kind == "qaoa-regular":
        return qaoa_regular(n, seed=seed, rounds=params.get("rounds", 1))
    if kind == "qaoa-erdos":
        return qaoa_erdos(
            n, seed=seed, rounds=params.get("rounds", 1),
            edge_probability=params.get("edge_probability", 0.5),
        )
    if kind == "supremacy-grid":
        rows, cols = params.get("rows"), params.get("cols")
        if rows is None or cols is None:
            rows, cols = _grid_shape(n)
        return supremacy_grid(rows, cols, seed=seed, depth=params.get("depth", 8))
    if kind == "aqft":
        if "degree" not in params:
            raise ConfigError("aqft requires an explicit approximation degree", phase="bench")
        return aqft(n, params["degree"], seed=seed)
    if kind == "planted":
        return planted(n, m=params.get("solutions", 3), seed=seed)
    if kind == "uniform":
        return uniform(n)
    raise ConfigError(f"unknown benchmark '{kind}', expected one of {BENCHMARK_KINDS}", phase="bench")
