"""Circuit data model and its line-oriented text format."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

from .gates import GateKind

MAX_QUBITS = 15


@dataclass(frozen=True)
class Instruction:
    kind: GateKind
    operands: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "operands", tuple(int(q) for q in self.operands))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    @property
    def arity(self) -> int:
        return len(self.operands)

    def __str__(self) -> str:
        parts = [self.kind.value, *map(str, self.operands)]
        parts += [f"{name}={value!r}" for name, value in zip(self.kind.param_names, self.params)]
        return " ".join(parts)


def gate(kind: GateKind | str, *qubits: int, params: Iterable[float] = ()) -> Instruction:
    return Instruction(GateKind(kind), tuple(qubits), tuple(params))


def R(q: int, theta: float, phi: float) -> Instruction:
    return Instruction(GateKind.R, (q,), (theta, phi))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``n_qubits`` with terminal measurement.

    ``initial_ones`` are qubits prepared in |1>. ``complemented`` lists
    measured qubits whose readout bit is classically inverted, which is how
    constant propagation reports a qubit it has resolved to |1>.
    """

    n_qubits: int
    instructions: tuple[Instruction, ...] = ()
    measured: tuple[int, ...] = ()
    initial_ones: frozenset[int] = field(default_factory=frozenset)
    complemented: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        object.__setattr__(self, "measured", tuple(int(q) for q in self.measured))
        object.__setattr__(self, "initial_ones", frozenset(self.initial_ones))
        object.__setattr__(self, "complemented", frozenset(self.complemented))

    def with_instructions(self, instructions: Iterable[Instruction], **changes) -> "Circuit":
        return replace(self, instructions=tuple(instructions), **changes)

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)


def validate(c: Circuit) -> list[str]:
    """Every invariant violation in ``c``; an empty list means valid."""
    errors = []
    if c.n_qubits < 1:
        errors.append("circuit needs at least one qubit")
    if c.n_qubits > MAX_QUBITS:
        errors.append(f"qubit cap exceeded: {c.n_qubits} > {MAX_QUBITS}")
    for i, inst in enumerate(c.instructions):
        where = f"instruction {i} ({inst.kind.value})"
        if inst.arity != inst.kind.arity:
            errors.append(f"{where}: expects {inst.kind.arity} operand(s), got {inst.arity}")
        if len(inst.params) != inst.kind.n_params:
            errors.append(f"{where}: expects {inst.kind.n_params} parameter(s), got {len(inst.params)}")
        if len(set(inst.operands)) != len(inst.operands):
            errors.append(f"{where}: duplicate operands {inst.operands}")
        for q in inst.operands:
            if not 0 <= q < c.n_qubits:
                errors.append(f"{where}: qubit {q} out of range")
    if len(set(c.measured)) != len(c.measured):
        errors.append("duplicate measured qubits")
    for label, qubits in (("measured", c.measured), ("ones", c.initial_ones),
                          ("complemented", c.complemented)):
        for q in sorted(qubits):
            if not 0 <= q < c.n_qubits:
                errors.append(f"{label} qubit {q} out of range")
    if not c.complemented <= set(c.measured):
        errors.append("complemented qubits must be measured")
    return errors


class CircuitError(ValueError):
    pass


def check(c: Circuit) -> Circuit:
    errors = validate(c)
    if errors:
        raise CircuitError("; ".join(errors))
    return c


def two_qubit_gate_count(c: Circuit) -> int:
    return sum(1 for inst in c.instructions if inst.arity == 2)


def _join(qubits) -> str:
    return ",".join(str(q) for q in qubits)


def dumps(c: Circuit) -> str:
    lines = [f"qubits {c.n_qubits}"]
    if c.initial_ones:
        lines.append(f"ones {_join(sorted(c.initial_ones))}")
    if c.measured:
        lines.append(f"measure {_join(c.measured)}")
    if c.complemented:
        lines.append(f"flip {_join(sorted(c.complemented))}")
    lines += [str(inst) for inst in c.instructions]
    return "\n".join(lines) + "\n"


def _qubit_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def loads(text: str) -> Circuit:
    n = None
    ones: list[int] = []
    measured: list[int] = []
    flips: list[int] = []
    instructions = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        arg = " ".join(rest)
        if head == "qubits":
            n = int(arg)
        elif head == "ones":
            ones = _qubit_list(arg)
        elif head == "measure":
            measured = _qubit_list(arg)
        elif head == "flip":
            flips = _qubit_list(arg)
        else:
            try:
                kind = GateKind(head)
            except ValueError:
                raise CircuitError(f"line {lineno}: unknown gate {head!r}") from None
            qubits = [int(t) for t in rest if "=" not in t]
            named = dict(t.split("=", 1) for t in rest if "=" in t)
            try:
                params = [float(named[name]) for name in kind.param_names]
            except KeyError as e:
                raise CircuitError(f"line {lineno}: missing parameter {e.args[0]}") from None
            instructions.append(Instruction(kind, tuple(qubits), tuple(params)))
    if n is None:
        raise CircuitError("missing 'qubits N' header")
    return Circuit(n, tuple(instructions), tuple(measured), frozenset(ones), frozenset(flips))
