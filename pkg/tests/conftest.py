import itertools

import numpy as np
import pytest
from hypothesis import settings

from qcloudsim.circuit import Circuit, gate
from qcloudsim.gates import standard_unitary

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

ACCEPTANCE_LINES: list[str] = []

ONE_QUBIT = ("H", "T", "X", "Y")
TWO_QUBIT = ("CNOT", "SWAP", "CZ")


def embed(u: np.ndarray, n: int, qubits) -> np.ndarray:
    """Full 2^n matrix of ``u`` on ``qubits`` (first = most significant), by
    explicit enumeration of basis states."""
    k = len(qubits)
    full = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for col in range(2 ** n):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_in = sum(bits[q] << (k - 1 - j) for j, q in enumerate(qubits))
        for sub_out in range(2 ** k):
            amp = u[sub_out, sub_in]
            if amp == 0:
                continue
            out = list(bits)
            for j, q in enumerate(qubits):
                out[q] = (sub_out >> (k - 1 - j)) & 1
            row = sum(b << (n - 1 - q) for q, b in enumerate(out))
            full[row, col] += amp
    return full


def circuit_matrix(c: Circuit) -> np.ndarray:
    m = np.eye(2 ** c.n_qubits, dtype=complex)
    for inst in c.instructions:
        m = embed(standard_unitary(inst.kind, inst.params), c.n_qubits, inst.operands) @ m
    return m


def random_standard_circuit(rng: np.random.Generator, n: int, length: int, kinds=ONE_QUBIT + TWO_QUBIT,
                            ones: bool = False) -> Circuit:
    insts = []
    for _ in range(length):
        kind = kinds[rng.integers(len(kinds))] if n > 1 else ONE_QUBIT[rng.integers(4)]
        if kind in TWO_QUBIT:
            a, b = rng.choice(n, 2, replace=False)
            insts.append(gate(kind, int(a), int(b)))
        else:
            insts.append(gate(kind, int(rng.integers(n))))
    initial = frozenset(int(q) for q in range(n) if ones and rng.random() < 0.3)
    return Circuit(n, tuple(insts), tuple(range(n)), initial)


def all_instructions(n: int):
    for kind in ONE_QUBIT:
        for q in range(n):
            yield gate(kind, q)
    for kind in TWO_QUBIT:
        for a, b in itertools.permutations(range(n), 2):
            yield gate(kind, a, b)


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
