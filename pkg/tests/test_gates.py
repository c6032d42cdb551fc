from math import pi, sqrt

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcloudsim.gates import (NATIVE_SETS, GateKind, equal_up_to_global_phase, is_unitary, native_set,
                             rotation_unitary, standard_unitary, xx_unitary, zx_unitary)

angles = st.floats(-2 * pi, 2 * pi, allow_nan=False)
ket = {s: np.eye(4, dtype=complex)[int(s, 2)] for s in ("00", "01", "10", "11")}


def test_rotation_examples():
    assert np.allclose(rotation_unitary(0, 1.23), np.eye(2), atol=1e-15)
    assert np.allclose(rotation_unitary(pi, 0) @ [1, 0], [0, -1j], atol=1e-15)
    assert np.allclose(rotation_unitary(pi / 2, pi / 2) @ [1, 0], np.array([1, -1]) / sqrt(2), atol=1e-15)


def test_xx_and_zx_state_maps():
    assert np.allclose(xx_unitary(0), np.eye(4))
    assert np.allclose(zx_unitary(0), np.eye(4))
    assert np.allclose(xx_unitary(pi / 4) @ ket["00"], (ket["00"] - 1j * ket["11"]) / sqrt(2))
    assert np.allclose(xx_unitary(pi / 4) @ ket["01"], (ket["01"] - 1j * ket["10"]) / sqrt(2))
    assert np.allclose(zx_unitary(pi / 4) @ ket["00"], (ket["00"] - 1j * ket["01"]) / sqrt(2))
    assert np.allclose(zx_unitary(pi / 4) @ ket["11"], (ket["11"] + 1j * ket["10"]) / sqrt(2))


def test_standard_state_maps():
    assert np.allclose(standard_unitary(GateKind.CZ) @ ket["11"], -ket["11"])
    assert np.allclose(standard_unitary(GateKind.T) @ [0, 1], [0, np.exp(1j * pi / 4)])
    assert np.allclose(standard_unitary(GateKind.CNOT) @ ket["10"], ket["11"])
    assert np.array_equal(standard_unitary("X"), rotation_unitary(pi, 0))
    assert np.array_equal(standard_unitary("Y"), rotation_unitary(pi, pi / 2))


def test_unbound_parameters_rejected():
    with pytest.raises(ValueError):
        standard_unitary(GateKind.R)
    with pytest.raises(ValueError):
        standard_unitary(GateKind.XX, (0.1, 0.2))


def test_exact_entries():
    h = standard_unitary(GateKind.H)
    assert h[0, 0] == 1 / sqrt(2)
    assert standard_unitary(GateKind.CZ)[3, 3] == -1
    assert rotation_unitary(pi, pi / 2)[1, 0].real == pytest.approx(-1.0, abs=1e-15)


def test_matrices_are_read_only():
    with pytest.raises(ValueError):
        standard_unitary(GateKind.H)[0, 0] = 0


def test_global_phase_examples():
    u = standard_unitary(GateKind.H)
    assert equal_up_to_global_phase(u, u)
    assert equal_up_to_global_phase(u, np.exp(1j * pi / 7) * u)
    assert not equal_up_to_global_phase(u, standard_unitary(GateKind.X))
    with pytest.raises(ValueError):
        equal_up_to_global_phase(u, np.eye(4))


def test_native_sets():
    assert set(NATIVE_SETS) == {"xx", "zx", "cz"}
    assert native_set("xx").entangler is GateKind.XX
    assert native_set("zx").entangling_angle == pi / 4
    with pytest.raises(ValueError):
        native_set("iswap")


def test_kind_metadata():
    assert GateKind.R.param_names == ("theta", "phi")
    assert GateKind.XX.n_params == 1 and GateKind.CZ.n_params == 0
    assert GateKind.SWAP.arity == 2 and GateKind.T.arity == 1


@given(angles, angles)
def test_rotation_unitary_and_inverse(theta, phi):
    u = rotation_unitary(theta, phi)
    assert is_unitary(u)
    assert np.max(np.abs(u @ rotation_unitary(-theta, phi) - np.eye(2))) < 1e-12


@given(angles, angles)
def test_entangler_additivity(a, b):
    for f in (xx_unitary, zx_unitary):
        assert is_unitary(f(a))
        assert np.allclose(f(a) @ f(b), f(a + b), atol=1e-12)


def test_fixed_gates_unitary():
    for kind in GateKind:
        if kind.n_params == 0:
            assert is_unitary(standard_unitary(kind))


PHASES = [0.0, 0.3, pi / 7, 2.0, -1.1]


def test_global_phase_is_equivalence_relation():
    base = [standard_unitary(k) for k in (GateKind.H, GateKind.X, GateKind.T)] + [rotation_unitary(0.4, 1.0)]
    mats = [np.exp(1j * p) * m for m in base for p in PHASES]
    eq = [[equal_up_to_global_phase(a, b) for b in mats] for a in mats]
    n = len(mats)
    for i in range(n):
        assert eq[i][i]
        for j in range(n):
            assert eq[i][j] == eq[j][i]
            for k in range(n):
                if eq[i][j] and eq[j][k]:
                    assert eq[i][k]
    assert sum(map(sum, eq)) == len(base) * len(PHASES) ** 2
