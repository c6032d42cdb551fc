"""Stochastic error channels and Monte Carlo trajectory execution.

Shots are simulated in fixed-size chunks of state vectors. Chunk ``k`` draws
all of its randomness from ``default_rng([seed, k])``, so the histogram does
not depend on the order in which chunks are evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, check
from .gates import PAULIS, GateKind, standard_unitary
from .simulator import Histogram, basis_index, complement_mask, marginal, run_ideal
from .topology import TopologyGraph

CHUNK = 1024

# generator of each entangler's interaction, used for the default over-rotation axis
_GENERATORS = {GateKind.XX: "XX", GateKind.ZX: "ZX", GateKind.CZ: "ZZ", GateKind.CNOT: "ZX"}
_PAULI_LABELS = "IXYZ"


def _check_probability(value: float, name: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")
    return float(value)


@dataclass(frozen=True)
class SpamModel:
    """Readout flip probabilities: a true 0 reads 1 with ``p_read_0``, a true 1
    reads 0 with ``p_read_1``."""

    p_read_0: float = 0.0
    p_read_1: float = 0.0

    def __post_init__(self):
        _check_probability(self.p_read_0, "p_read_0")
        _check_probability(self.p_read_1, "p_read_1")

    @property
    def average(self) -> float:
        return (self.p_read_0 + self.p_read_1) / 2


@dataclass(frozen=True)
class DepolarizingModel:
    """Uniform non-identity Pauli after a gate with probability p2 (two-qubit)
    or p1 (single-qubit). ``p1=None`` means p2 / 10."""

    p2: float = 0.0
    p1: float | None = None

    def __post_init__(self):
        _check_probability(self.p2, "p2")
        if self.p1 is not None:
            _check_probability(self.p1, "p1")

    @property
    def single(self) -> float:
        return self.p2 / 10 if self.p1 is None else self.p1


@dataclass(frozen=True)
class QuasiStaticCoherentModel:
    """Per-shot over-rotation exp(-i delta P) after every entangling gate.

    delta ~ Normal(offset + run offset, sigma) is drawn once per shot. ``axis``
    names the two-qubit Pauli P on the gate's operands; "native" uses the
    gate's own interaction so that delta adds to its entangling angle.
    ``run_sigma`` adds one seed-dependent offset shared by a whole run.
    """

    sigma: float = 0.0
    axis: str = "native"
    offset: float = 0.0
    run_sigma: float = 0.0

    def __post_init__(self):
        if self.sigma < 0 or self.run_sigma < 0:
            raise ValueError("sigma and run_sigma must be non-negative")
        if self.axis != "native" and (len(self.axis) != 2 or set(self.axis) - set(_PAULI_LABELS)):
            raise ValueError(f"axis must be 'native' or a two-letter Pauli label, got {self.axis!r}")

    @property
    def active(self) -> bool:
        return bool(self.sigma or self.offset or self.run_sigma)


@dataclass(frozen=True)
class CrosstalkModel:
    """Each topology neighbour of a two-qubit gate's operands suffers a random
    Pauli with probability ``p_ct``."""

    p_ct: float = 0.0

    def __post_init__(self):
        _check_probability(self.p_ct, "p_ct")


@dataclass(frozen=True)
class NoiseProfile:
    spam: SpamModel = field(default_factory=SpamModel)
    depol: DepolarizingModel = field(default_factory=DepolarizingModel)
    coherent: QuasiStaticCoherentModel = field(default_factory=QuasiStaticCoherentModel)
    crosstalk: CrosstalkModel = field(default_factory=CrosstalkModel)
    topology: TopologyGraph | None = None

    def __post_init__(self):
        if self.crosstalk.p_ct > 0 and self.topology is None:
            raise ValueError("crosstalk requires a topology")

    @property
    def gate_noise_free(self) -> bool:
        return (self.depol.p2 == 0 and self.depol.single == 0 and self.crosstalk.p_ct == 0
                and not self.coherent.active)


def apply_readout_error(bits: str, spam: SpamModel, rng: np.random.Generator) -> str:
    out = []
    for b in bits:
        p = spam.p_read_1 if b == "1" else spam.p_read_0
        out.append(("0" if b == "1" else "1") if rng.random() < p else b)
    return "".join(out)


# -- batched state manipulation; states have shape (shots, 2**n) --------------

def _apply_1q(states: np.ndarray, n: int, u: np.ndarray, q: int) -> np.ndarray:
    s = states.shape[0]
    v = states.reshape(s * 2 ** q, 2, 2 ** (n - q - 1))
    return np.matmul(u, v).reshape(s, -1)


def _apply_2q(states: np.ndarray, n: int, u: np.ndarray, q0: int, q1: int) -> np.ndarray:
    """``u`` is (4, 4) shared or (shots, 4, 4) per shot."""
    s = states.shape[0]
    t = np.moveaxis(states.reshape((s,) + (2,) * n), (1 + q0, 1 + q1), (-2, -1))
    shape = t.shape
    t = t.reshape(s, -1, 4)
    if u.ndim == 2:
        t = t @ u.T
    else:
        t = np.matmul(t, np.transpose(u, (0, 2, 1)))
    t = np.moveaxis(t.reshape(shape), (-2, -1), (1 + q0, 1 + q1))
    return np.ascontiguousarray(t).reshape(s, -1)


def _apply_pauli(states: np.ndarray, n: int, q: int, which: np.ndarray) -> None:
    """In place: row r gets Pauli ``which[r]`` (0=I, 1=X, 2=Y, 3=Z) on qubit q.
    Per-row phases are dropped; they are global to each trajectory."""
    s = states.shape[0]
    v = states.reshape(s, 2 ** q, 2, 2 ** (n - q - 1))
    zrows = np.flatnonzero((which == 2) | (which == 3))
    if zrows.size:
        v[zrows, :, 1, :] *= -1
    xrows = np.flatnonzero((which == 1) | (which == 2))
    if xrows.size:
        v[xrows] = v[xrows][:, :, ::-1, :]


def _rotation_batch(label: str, delta: np.ndarray) -> np.ndarray:
    p = np.kron(PAULIS[label[0]], PAULIS[label[1]])
    return (np.cos(delta)[:, None, None] * np.eye(4)
            - 1j * np.sin(delta)[:, None, None] * p)


def _spectators(profile: NoiseProfile, layout, ops) -> list[int]:
    g = profile.topology
    if g is None or profile.crosstalk.p_ct == 0:
        return []
    where = {p: i for i, p in enumerate(layout)}
    phys = {layout[q] for q in ops}
    near = sorted({w for p in phys for w in g.neighbors[p]} - phys)
    return [where[w] for w in near if w in where]


def _batch_marginal(probs: np.ndarray, n: int, measured) -> np.ndarray:
    s = probs.shape[0]
    p = probs.reshape((s,) + (2,) * n)
    rest = tuple(1 + q for q in range(n) if q not in measured)
    if rest:
        p = p.sum(axis=rest)
    kept = sorted(measured)
    p = np.transpose(p, [0] + [1 + kept.index(q) for q in measured])
    return p.reshape(s, -1)


def _sample_rows(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(probs, axis=1)
    u = rng.random(probs.shape[0]) * cdf[:, -1]
    idx = (cdf < u[:, None]).sum(axis=1)
    return np.minimum(idx, probs.shape[1] - 1)


def _readout(idx: np.ndarray, m: int, spam: SpamModel, rng: np.random.Generator) -> np.ndarray:
    if m == 0:
        return idx
    weights = 1 << np.arange(m - 1, -1, -1)
    bits = (idx[:, None] & weights) > 0
    flip = rng.random(bits.shape) < np.where(bits, spam.p_read_1, spam.p_read_0)
    return idx ^ (flip * weights).sum(axis=1)


def _run_chunk(c: Circuit, profile: NoiseProfile, shots: int, rng: np.random.Generator,
               run_offset: float, layout) -> np.ndarray:
    n = c.n_qubits
    coh = profile.coherent
    delta = coh.sigma * rng.standard_normal(shots) + coh.offset + run_offset
    p1, p2, pct = profile.depol.single, profile.depol.p2, profile.crosstalk.p_ct

    states = np.zeros((shots, 2 ** n), dtype=complex)
    states[:, basis_index(n, c.initial_ones)] = 1.0
    for inst in c.instructions:
        u = standard_unitary(inst.kind, inst.params)
        if inst.arity == 1:
            (q,) = inst.operands
            states = _apply_1q(states, n, u, q)
            hit = rng.random(shots) < p1
            kind = rng.integers(1, 4, shots)
            _apply_pauli(states, n, q, np.where(hit, kind, 0))
            continue
        q0, q1 = inst.operands
        states = _apply_2q(states, n, u, q0, q1)
        if coh.active and inst.kind in _GENERATORS:
            label = _GENERATORS[inst.kind] if coh.axis == "native" else coh.axis
            states = _apply_2q(states, n, _rotation_batch(label, delta), q0, q1)
        hit = rng.random(shots) < p2
        kind = rng.integers(1, 16, shots)
        kind = np.where(hit, kind, 0)
        _apply_pauli(states, n, q0, kind // 4)
        _apply_pauli(states, n, q1, kind % 4)
        for w in _spectators(profile, layout, inst.operands):
            hit = rng.random(shots) < pct
            kind = rng.integers(1, 4, shots)
            _apply_pauli(states, n, w, np.where(hit, kind, 0))

    return _sample_rows(_batch_marginal(np.abs(states) ** 2, n, c.measured), rng)


def run_noisy(c: Circuit, profile: NoiseProfile, shots: int, seed: int,
              layout: tuple[int, ...] | None = None) -> Histogram:
    """Monte Carlo histogram of ``c`` under ``profile``; deterministic in ``seed``.

    ``layout[i]`` is the topology vertex holding circuit qubit ``i`` (identity
    by default); it only matters for crosstalk.
    """
    check(c)
    if not c.measured:
        raise ValueError("circuit measures no qubits")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if layout is None:
        layout = tuple(range(c.n_qubits))
    m = len(c.measured)
    mask = complement_mask(c.measured, c.complemented)
    run_offset = 0.0
    if profile.coherent.run_sigma:
        run_offset = profile.coherent.run_sigma * np.random.default_rng([seed, 0xFFFFFFFF]).standard_normal()

    ideal = None
    if profile.gate_noise_free:
        ideal = marginal(run_ideal(c).probabilities(), c.n_qubits, c.measured)

    counts = np.zeros(2 ** m, dtype=np.int64)
    for k, start in enumerate(range(0, shots, CHUNK)):
        size = min(CHUNK, shots - start)
        rng = np.random.default_rng([seed, k])
        if ideal is not None:
            idx = _sample_rows(np.broadcast_to(ideal, (size, ideal.size)), rng)
        else:
            idx = _run_chunk(c, profile, size, rng, run_offset, layout)
        idx = _readout(idx, m, profile.spam, rng) ^ mask
        counts += np.bincount(idx, minlength=2 ** m)
    return Histogram.from_indices(counts, m)
