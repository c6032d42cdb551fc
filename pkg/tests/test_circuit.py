from math import pi

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcloudsim.bench import build_cnot_chain
from qcloudsim.circuit import (Circuit, CircuitError, Instruction, R, check, dumps, gate, loads,
                               two_qubit_gate_count, validate)
from qcloudsim.gates import GateKind


def test_validate_examples():
    assert validate(Circuit(1)) == []
    errors = validate(Circuit(4, (gate("CNOT", 3, 3),)))
    assert any("duplicate operands" in e for e in errors)
    assert any("qubit cap exceeded" in e for e in validate(Circuit(16)))


def test_validate_collects_everything():
    c = Circuit(2, (Instruction(GateKind.R, (0,), (1.0,)), gate("H", 5)), (0, 0), frozenset({7}))
    errors = validate(c)
    assert len(errors) == 4
    with pytest.raises(CircuitError):
        check(c)


def test_complemented_must_be_measured():
    assert validate(Circuit(2, (), (0,), complemented=frozenset({1})))


def test_two_qubit_gate_count():
    assert two_qubit_gate_count(build_cnot_chain(2)) == 4
    swaps = Circuit(2, (gate("H", 0), gate("H", 1)) + (gate("SWAP", 0, 1),) * 3, (0, 1))
    assert two_qubit_gate_count(swaps) == 3
    assert two_qubit_gate_count(Circuit(1, (gate("H", 0), gate("T", 0)))) == 0


def test_instruction_order_preserved():
    insts = tuple(gate(k, 0) for k in ("H", "T", "X", "Y", "T", "H"))
    assert Circuit(1, insts).instructions == insts


def test_text_format():
    c = Circuit(3, (gate("H", 0), R(1, 0.1, pi / 3), gate("XX", 0, 2, params=(pi / 4,))), (2, 0),
                frozenset({1}), frozenset({0}))
    text = dumps(c)
    assert text.splitlines()[:4] == ["qubits 3", "ones 1", "measure 2,0", "flip 0"]
    assert loads(text) == c


def test_loads_rejects_garbage():
    with pytest.raises(ValueError):
        loads("qubits 2\nFOO 1\n")


finite = st.floats(-10, 10, allow_nan=False)


@st.composite
def circuits(draw):
    n = draw(st.integers(1, 5))
    insts = []
    for _ in range(draw(st.integers(0, 12))):
        kind = draw(st.sampled_from(list(GateKind)))
        if kind.arity == 2 and n < 2:
            continue
        qs = draw(st.permutations(range(n)))[: kind.arity]
        params = [draw(finite) for _ in range(kind.n_params)]
        insts.append(Instruction(kind, tuple(qs), tuple(params)))
    measured = draw(st.permutations(range(n)))[: draw(st.integers(0, n))]
    return Circuit(n, tuple(insts), tuple(measured), frozenset(draw(st.sets(st.integers(0, n - 1)))))


@given(circuits())
def test_text_round_trip(c):
    assert validate(c) == []
    assert loads(dumps(c)) == c


@given(st.integers(-3, 20), st.lists(st.tuples(st.integers(-2, 20), st.integers(-2, 20)), max_size=6))
def test_validate_is_total(n, pairs):
    c = Circuit(n, tuple(Instruction(GateKind.CNOT, p) for p in pairs), tuple(q for q, _ in pairs))
    assert isinstance(validate(c), list)
