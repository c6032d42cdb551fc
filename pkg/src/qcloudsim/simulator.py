"""Dense state-vector simulation and shot sampling."""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .circuit import MAX_QUBITS, Circuit, Instruction, check
from .gates import standard_unitary

NORM_TOL = 1e-10
Z95 = 1.96


@dataclass(frozen=True)
class StateVector:
    n: int
    amplitudes: np.ndarray

    @classmethod
    def basis(cls, n: int, ones=()) -> "StateVector":
        if n > MAX_QUBITS:
            raise ValueError(f"qubit cap exceeded: {n} > {MAX_QUBITS}")
        amps = np.zeros(2 ** n, dtype=complex)
        amps[basis_index(n, ones)] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def basis_index(n: int, ones) -> int:
    # qubit 0 is the most significant bit
    return sum(1 << (n - 1 - q) for q in ones)


def apply_matrix(amps: np.ndarray, n: int, u: np.ndarray, qubits) -> np.ndarray:
    k = len(qubits)
    psi = amps.reshape((2,) * n)
    out = np.tensordot(u.reshape((2,) * (2 * k)), psi, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(out, list(range(k)), list(qubits)).reshape(-1)


def apply(state: StateVector, inst: Instruction) -> StateVector:
    for q in inst.operands:
        if not 0 <= q < state.n:
            raise ValueError(f"qubit {q} out of range for {state.n}-qubit state")
    u = standard_unitary(inst.kind, inst.params)
    return StateVector(state.n, apply_matrix(state.amplitudes, state.n, u, inst.operands))


def run_ideal(c: Circuit) -> StateVector:
    check(c)
    state = StateVector.basis(c.n_qubits, c.initial_ones)
    for inst in c.instructions:
        state = apply(state, inst)
    return state


def marginal(probs: np.ndarray, n: int, measured) -> np.ndarray:
    """Distribution over ``measured`` bits, first listed qubit most significant."""
    measured = list(measured)
    p = probs.reshape((2,) * n)
    rest = tuple(q for q in range(n) if q not in measured)
    p = p.sum(axis=rest) if rest else p
    kept = sorted(measured)
    p = np.transpose(p, [kept.index(q) for q in measured])
    return p.reshape(-1)


def bitstrings(m: int) -> list[str]:
    return [format(i, f"0{m}b") for i in range(2 ** m)]


def complement_mask(measured, complemented) -> int:
    m = len(measured)
    return sum(1 << (m - 1 - i) for i, q in enumerate(measured) if q in complemented)


@dataclass
class Histogram:
    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to shots")

    def get(self, bits: str) -> int:
        return self.counts.get(bits, 0)

    def probabilities(self) -> dict[str, float]:
        return {k: v / self.shots for k, v in self.counts.items()}

    @classmethod
    def from_indices(cls, counts_by_index: np.ndarray, m: int) -> "Histogram":
        counts = {format(i, f"0{m}b"): int(c) for i, c in enumerate(counts_by_index) if c}
        return cls(counts, int(np.sum(counts_by_index)))


def sample(state: StateVector, measured, shots: int, seed: int) -> Histogram:
    if not measured:
        raise ValueError("empty measurement list")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = marginal(state.probabilities(), state.n, measured)
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    return Histogram.from_indices(rng.multinomial(shots, p), len(measured))


def outcome_distribution(c: Circuit) -> dict[str, float]:
    """Exact noiseless distribution of the measured bits, complements applied."""
    state = run_ideal(c)
    p = marginal(state.probabilities(), c.n_qubits, c.measured)
    mask = complement_mask(c.measured, c.complemented)
    m = len(c.measured)
    return {format(i ^ mask, f"0{m}b"): float(v) for i, v in enumerate(p)}


def ideal_outcome(c: Circuit) -> str:
    """Most likely noiseless outcome; the success target of an experiment."""
    dist = outcome_distribution(c)
    return max(sorted(dist), key=dist.__getitem__)


def measure(c: Circuit, shots: int, seed: int) -> Histogram:
    h = sample(run_ideal(c), c.measured, shots, seed)
    mask = complement_mask(c.measured, c.complemented)
    if not mask:
        return h
    m = len(c.measured)
    return Histogram({format(int(k, 2) ^ mask, f"0{m}b"): v for k, v in h.counts.items()}, h.shots)


def total_variation(p: dict[str, float], q: dict[str, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def wald_interval(successes: int, shots: int) -> tuple[float, float]:
    p = successes / shots
    return p, Z95 * sqrt(p * (1 - p) / shots)


def success_probability(h: Histogram, ideal: str) -> tuple[float, float]:
    """Success estimate and its Wald 95% half-width."""
    if h.shots < 1:
        raise ValueError("no shots")
    return wald_interval(h.get(ideal), h.shots)
