"""Experiment circuits (SPAM, CNOT chain, SWAP chain, Bernstein-Vazirani),
parameter sweeps, and the Gaussian / linear curve fits."""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from math import log
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .circuit import Circuit, gate
from .noise import run_noisy
from .simulator import ideal_outcome, wald_interval
from .topology import compact, hub_placement, identity_placement, route, swap_count
from .transpiler import decompose_swap, transpile

EXPERIMENTS = ("spam", "cnot-chain", "swap-chain", "bv")
RECORD_FIELDS = ("backend", "experiment", "parameter", "shots", "successes", "seed", "ci95")


class FitError(ValueError):
    pass


# -- circuits -----------------------------------------------------------------

def build_spam_circuit(prep_one: bool) -> Circuit:
    return Circuit(1, (), (0,), frozenset({0}) if prep_one else frozenset())


def build_cnot_chain(blocks: int) -> Circuit:
    """H; blocks x [X, CNOT, Y, CNOT]; H on the upper qubit, which alone is measured."""
    if blocks < 1:
        raise ValueError("blocks must be >= 1")
    body = [gate("X", 0), gate("CNOT", 0, 1), gate("Y", 0), gate("CNOT", 0, 1)] * blocks
    return Circuit(2, (gate("H", 0), *body, gate("H", 0)), (0,))


def build_swap_chain(repeats: int) -> Circuit:
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    hs = (gate("H", 0), gate("H", 1))
    swaps = tuple(decompose_swap(0, 1)) * repeats
    return Circuit(2, hs + swaps + hs, (0, 1))


def build_bv(n: int, hidden: str) -> Circuit:
    """Data qubits 0..n-1 read ``hidden`` (char i is qubit i); ancilla n starts in |1>."""
    if len(hidden) != n:
        raise ValueError(f"hidden string has length {len(hidden)}, expected {n}")
    if set(hidden) - {"0", "1"}:
        raise ValueError("hidden string must be binary")
    if n + 1 > 15:
        raise ValueError("qubit cap exceeded")
    anc = n
    insts = [gate("H", q) for q in range(n + 1)]
    insts += [gate("CNOT", q, anc) for q, bit in enumerate(hidden) if bit == "1"]
    insts += [gate("H", q) for q in range(n)]
    return Circuit(n + 1, tuple(insts), tuple(range(n)), frozenset({anc}))


def weight_string(n: int, weight: int) -> str:
    """Representative hidden string of a given weight: ones in the lowest indices."""
    if not 0 <= weight <= n:
        raise ValueError(f"weight {weight} outside 0..{n}")
    return "1" * weight + "0" * (n - weight)


def classical_baseline(n: int) -> float:
    """Best single-query classical success: learn one bit, guess the rest."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return 2.0 ** (1 - n)


# -- records ------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentRecord:
    backend: str
    experiment: str
    parameter: int
    shots: int
    successes: int
    seed: int
    ci95: float

    def __post_init__(self):
        if self.successes > self.shots:
            raise ValueError("successes exceed shots")

    @property
    def success(self) -> float:
        if self.shots == 0:
            raise ValueError("no shots")
        return self.successes / self.shots

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, line: str) -> "ExperimentRecord":
        data = json.loads(line)
        missing = set(RECORD_FIELDS) - set(data)
        if missing:
            raise ValueError(f"record missing fields: {', '.join(sorted(missing))}")
        return cls(**{k: data[k] for k in RECORD_FIELDS})


def write_records(records: Iterable[ExperimentRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            f.write(r.to_json() + "\n")


def read_records(path) -> list[ExperimentRecord]:
    with open(path, encoding="utf-8") as f:
        return [ExperimentRecord.from_json(line) for line in f if line.strip()]


# -- running ------------------------------------------------------------------

@dataclass(frozen=True)
class Experiment:
    """What to build for each sweep parameter.

    parameter meaning: spam -> prepared bit; cnot-chain -> CNOT count (two per
    block); swap-chain -> SWAP count; bv -> Hamming weight of the hidden string.
    ``passes=None`` picks the experiment default: decomposition only for the
    gate chains, the backend's own pass list otherwise.
    """

    name: str
    n: int = 4
    passes: tuple[str, ...] | None = None
    strings_per_weight: int = 1

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.name!r}; choose from {', '.join(EXPERIMENTS)}")

    def build(self, parameter: int, rng: np.random.Generator | None = None) -> Circuit:
        if self.name == "spam":
            if parameter not in (0, 1):
                raise ValueError("spam parameter is the prepared bit, 0 or 1")
            return build_spam_circuit(bool(parameter))
        if self.name == "cnot-chain":
            if parameter < 2 or parameter % 2:
                raise ValueError("cnot-chain depth must be a positive even CNOT count")
            return build_cnot_chain(parameter // 2)
        if self.name == "swap-chain":
            return build_swap_chain(parameter)
        hidden = weight_string(self.n, parameter)
        if rng is not None:
            hidden = "".join(rng.permutation(list(hidden)))
        return build_bv(self.n, hidden)

    def pass_list(self, backend) -> tuple[str, ...]:
        if self.passes is not None:
            return self.passes
        if self.name in ("cnot-chain", "swap-chain"):
            return ()
        return backend.passes


def point_seed(seed: int, experiment: str, parameter: int) -> int:
    digest = hashlib.sha256(f"{seed}:{experiment}:{parameter}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def compile_for(c: Circuit, backend, passes: Sequence[str], hub: int | None = None):
    """Place, route, transpile and compact ``c`` for a backend.

    Returns (physical circuit, layout, SWAPs inserted by routing).
    """
    g = backend.topology
    placement = identity_placement(c.n_qubits) if hub is None else hub_placement(g, c.n_qubits, hub)
    routed, _ = route(c, g, placement)
    swaps = swap_count(routed) - swap_count(c)
    small, layout = compact(routed)
    return transpile(small, backend.native, passes), layout, swaps


def run_point(experiment: Experiment, parameter: int, backend, shots: int, seed: int) -> ExperimentRecord:
    pseed = point_seed(seed, experiment.name, parameter)
    passes = experiment.pass_list(backend)
    n_strings = experiment.strings_per_weight if experiment.name == "bv" else 1
    rng = np.random.default_rng(pseed) if n_strings > 1 else None
    successes = total = 0
    for k in range(n_strings):
        c = experiment.build(parameter, rng)
        target = ideal_outcome(c)
        hub = c.n_qubits - 1 if experiment.name == "bv" else None
        physical, layout, _ = compile_for(c, backend, passes, hub)
        h = run_noisy(physical, backend.profile, shots, pseed + k, layout)
        successes += h.get(target)
        total += h.shots
    return ExperimentRecord(backend.name, experiment.name, int(parameter), total, successes, pseed,
                            wald_interval(successes, total)[1])


def sweep(experiment: Experiment, grid: Iterable[int], backend, shots: int, seed: int,
          workers: int = 1) -> list[ExperimentRecord]:
    """One record per grid point; each point seeds itself from (seed, experiment, parameter)."""
    grid = list(grid)
    task = lambda p: run_point(experiment, p, backend, shots, seed)  # noqa: E731
    if workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(task, grid))
    return [task(p) for p in grid]


def default_grid(experiment: str, n: int = 4) -> list[int]:
    if experiment == "spam":
        return [0, 1]
    if experiment == "cnot-chain":
        return list(range(2, 61, 2))
    if experiment == "swap-chain":
        return list(range(1, 13))
    return list(range(n + 1))


# -- fits ---------------------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    """``params`` is (d0, amplitude) for gaussian and (intercept, slope) for linear."""

    model: str
    params: tuple[float, float]
    residual: float

    def __post_init__(self):
        if self.model == "gaussian" and not self.params[0] > 0:
            raise ValueError("gaussian d0 must be positive")


def gaussian_model(d, d0: float, amplitude: float):
    return 0.5 + amplitude * np.exp(-(np.asarray(d, dtype=float) / d0) ** 2)


def _best_amplitude(d, y, d0):
    g = np.exp(-(d / d0) ** 2)
    gg = float(g @ g)
    a = float(g @ (y - 0.5)) / gg if gg > 0 else 0.0
    a = min(max(a, 1e-12), 0.5)
    r = y - 0.5 - a * g
    return a, float(r @ r)


def fit_gaussian(points: Sequence[tuple[float, float]]) -> FitResult:
    """Least squares for P(d) = 0.5 + A exp(-(d/d0)^2), A in (0, 0.5], d0 > 0.

    The amplitude is solved in closed form for each d0, leaving a 1-D search
    over log d0: a coarse log grid followed by bounded Brent refinement.
    """
    if len(points) < 4:
        raise FitError("gaussian fit needs at least 4 points")
    d = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.ptp(y) == 0:
        raise FitError("degenerate data: all success values are equal")
    positive = d[d > 0]
    lo = log(positive.min() / 50) if positive.size else log(1e-3)
    hi = log(max(d.max(), 1.0) * 50)
    grid = np.linspace(lo, hi, 2001)
    costs = [_best_amplitude(d, y, np.exp(t))[1] for t in grid]
    i = int(np.argmin(costs))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda t: _best_amplitude(d, y, np.exp(t))[1], bounds=(a, b),
                          method="bounded", options={"xatol": 1e-10})
    t = res.x if res.fun <= costs[i] else grid[i]
    d0 = float(np.exp(t))
    amp, sse = _best_amplitude(d, y, d0)
    return FitResult("gaussian", (d0, amp), sse)


def fit_linear_first4(points: Sequence[tuple[float, float]]) -> FitResult:
    """Ordinary least squares on the four shallowest points."""
    if len(points) < 4:
        raise FitError("linear fit needs at least 4 points")
    first = sorted(points, key=lambda p: p[0])[:4]
    x = np.array([p[0] for p in first], dtype=float)
    y = np.array([p[1] for p in first], dtype=float)
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    if sxx == 0:
        raise FitError("linear fit needs distinct depths")
    slope = float(((x - xm) * (y - ym)).sum()) / sxx
    intercept = float(ym - slope * xm)
    r = y - intercept - slope * x
    return FitResult("linear", (intercept, slope), float(r @ r))


def record_points(records: Iterable[ExperimentRecord]) -> list[tuple[float, float]]:
    return [(r.parameter, r.success) for r in records]
