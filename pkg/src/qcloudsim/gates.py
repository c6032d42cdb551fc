"""Gate unitaries for the native (R, XX, ZX, CZ) and standard (H, T, CNOT, ...) sets.

Two-qubit matrices use the basis |00>, |01>, |10>, |11> with the first
operand as the most significant bit.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import cos, pi, sin, sqrt

import numpy as np

UNITARY_TOL = 1e-12
EQUIV_TOL = 1e-9


class GateKind(str, Enum):
    R = "R"
    XX = "XX"
    ZX = "ZX"
    CZ = "CZ"
    H = "H"
    T = "T"
    X = "X"
    Y = "Y"
    CNOT = "CNOT"
    SWAP = "SWAP"

    @property
    def arity(self) -> int:
        return 2 if self in _TWO_QUBIT else 1

    @property
    def n_params(self) -> int:
        return _N_PARAMS.get(self, 0)

    @property
    def param_names(self) -> tuple[str, ...]:
        return _PARAM_NAMES.get(self, ())


_TWO_QUBIT = frozenset({GateKind.XX, GateKind.ZX, GateKind.CZ, GateKind.CNOT, GateKind.SWAP})
_PARAM_NAMES = {
    GateKind.R: ("theta", "phi"),
    GateKind.XX: ("chi",),
    GateKind.ZX: ("chi",),
}
_N_PARAMS = {k: len(v) for k, v in _PARAM_NAMES.items()}

ENTANGLERS = frozenset({GateKind.XX, GateKind.ZX, GateKind.CZ})

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"I": I2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


def _frozen(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


def rotation_unitary(theta: float, phi: float) -> np.ndarray:
    """Single-qubit rotation R(theta, phi).

    |0> -> cos(theta/2)|0> - i e^{-i phi} sin(theta/2)|1>
    |1> -> cos(theta/2)|1> - i e^{+i phi} sin(theta/2)|0>
    """
    c, s = cos(theta / 2), sin(theta / 2)
    return _frozen(np.array([
        [c, -1j * np.exp(1j * phi) * s],
        [-1j * np.exp(-1j * phi) * s, c],
    ], dtype=complex))


def pauli_rotation(label: str, angle: float) -> np.ndarray:
    """exp(-i * angle * P) for a two-letter Pauli label such as "XX" or "ZX"."""
    p = np.kron(PAULIS[label[0]], PAULIS[label[1]])
    return _frozen(cos(angle) * np.eye(4, dtype=complex) - 1j * sin(angle) * p)


def xx_unitary(chi: float) -> np.ndarray:
    """Ising gate, |00> -> cos(chi)|00> - i sin(chi)|11> and so on."""
    return pauli_rotation("XX", chi)


def zx_unitary(chi: float) -> np.ndarray:
    """Cross-resonance gate: X rotation on the second qubit, signed by the first."""
    return pauli_rotation("ZX", chi)


_H = _frozen(np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2))
_T = _frozen(np.diag([1, np.exp(1j * pi / 4)]).astype(complex))
_CZ = _frozen(np.diag([1, 1, 1, -1]).astype(complex))
_CNOT = _frozen(np.array([
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
    [0, 0, 1, 0],
], dtype=complex))
_SWAP = _frozen(np.array([
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [0, 0, 0, 1],
], dtype=complex))
_FIXED = {
    GateKind.H: _H,
    GateKind.T: _T,
    GateKind.CZ: _CZ,
    GateKind.CNOT: _CNOT,
    GateKind.SWAP: _SWAP,
    # X and Y are aliases of the native pi rotations.
    GateKind.X: rotation_unitary(pi, 0.0),
    GateKind.Y: rotation_unitary(pi, pi / 2),
}


def standard_unitary(kind: GateKind, params: tuple[float, ...] = ()) -> np.ndarray:
    """Matrix for any gate kind; parameterized kinds need their angles bound."""
    kind = GateKind(kind)
    if kind in _FIXED:
        return _FIXED[kind]
    if len(params) != kind.n_params:
        raise ValueError(f"{kind.value} needs {kind.n_params} bound parameter(s), got {len(params)}")
    if kind is GateKind.R:
        return rotation_unitary(*params)
    if kind is GateKind.XX:
        return xx_unitary(params[0])
    return zx_unitary(params[0])


gate_unitary = standard_unitary


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol)


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = EQUIV_TOL) -> bool:
    """True iff a == c*b for some |c| = 1, within tol in the max norm.

    The phase c is read off the largest-magnitude entry of b.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    k = int(np.argmax(np.abs(b)))
    bk = b.flat[k]
    if abs(bk) == 0:
        return bool(np.max(np.abs(a)) <= tol)
    ratio = a.flat[k] / bk
    c = ratio / abs(ratio) if abs(ratio) > 0 else 1.0
    return bool(np.max(np.abs(a - c * b)) <= tol)


@dataclass(frozen=True)
class NativeGateSet:
    """Gate vocabulary a backend executes directly."""

    name: str
    single_qubit: frozenset[GateKind]
    two_qubit: frozenset[GateKind]
    entangling_angle: float = pi / 4

    def __post_init__(self):
        if len(self.two_qubit) != 1:
            raise ValueError("a native set has exactly one entangling template")

    @property
    def entangler(self) -> GateKind:
        return next(iter(self.two_qubit))

    def __contains__(self, kind: GateKind) -> bool:
        return kind in self.single_qubit or kind in self.two_qubit


NATIVE_SETS = {
    "xx": NativeGateSet("xx", frozenset({GateKind.R}), frozenset({GateKind.XX})),
    "zx": NativeGateSet("zx", frozenset({GateKind.R}), frozenset({GateKind.ZX})),
    "cz": NativeGateSet("cz", frozenset({GateKind.R}), frozenset({GateKind.CZ})),
}


def native_set(name: str) -> NativeGateSet:
    try:
        return NATIVE_SETS[name]
    except KeyError:
        raise ValueError(f"unknown native gate set {name!r}") from None
