"""Compilation of standard-gate circuits to native gate sets, plus the
rotation-merging, virtual-phase and constant-propagation passes."""
from __future__ import annotations

from math import isclose, pi, remainder, tau
from typing import Callable, Sequence

from .circuit import Circuit, Instruction, R, check, gate
from .gates import ENTANGLERS, GateKind, NativeGateSet

ANGLE_TOL = 1e-12


class TranspileError(ValueError):
    pass


def _is_multiple_of_2pi(angle: float) -> bool:
    return abs(remainder(angle, tau)) < ANGLE_TOL


def _same_angle(a: float, b: float) -> bool:
    return abs(remainder(a - b, tau)) < ANGLE_TOL


def rz_pair(q: int, alpha: float) -> list[Instruction]:
    """Two pi rotations whose product is exp(-i alpha Z / 2) up to phase."""
    return [R(q, pi, 0.0), R(q, pi, -alpha / 2)]


def decompose_h(q: int = 0) -> list[Instruction]:
    # H = R(pi/2, pi/2) R(pi, 0) as a matrix product, so R(pi, 0) acts first.
    return [R(q, pi, 0.0), R(q, pi / 2, pi / 2)]


def decompose_swap(a: int = 0, b: int = 1) -> list[Instruction]:
    return [gate("CNOT", a, b), gate("CNOT", b, a), gate("CNOT", a, b)]


def decompose_cnot(native: NativeGateSet, c: int = 0, t: int = 1) -> list[Instruction]:
    """CNOT(c -> t) as R rotations around one native entangler."""
    if GateKind.R not in native.single_qubit:
        raise TranspileError(f"native set {native.name!r} lacks R rotations")
    if not isclose(native.entangling_angle, pi / 4):
        raise TranspileError("CNOT sandwiches assume an entangling angle of pi/4")
    chi = native.entangling_angle
    entangler = native.entangler
    if entangler is GateKind.CZ:
        return [*decompose_h(t), gate("CZ", c, t), *decompose_h(t)]
    if entangler is GateKind.ZX:
        return [
            R(c, pi, 0.0),
            gate("ZX", c, t, params=(chi,)),
            R(c, pi, -pi / 4),
            R(t, pi / 2, 0.0),
        ]
    if entangler is GateKind.XX:
        return [
            R(c, pi / 2, -pi / 2),
            gate("XX", c, t, params=(chi,)),
            R(c, pi / 2, pi),
            R(c, pi / 2, pi / 2),
            R(t, pi / 2, pi),
        ]
    raise TranspileError(f"unknown native set {native.name!r}")


def _zz(native: NativeGateSet, a: int, b: int, chi: float) -> list[Instruction]:
    # exp(-i chi ZZ) = CNOT . Rz(2 chi)_b . CNOT
    cnot = decompose_cnot(native, a, b)
    return [*cnot, *rz_pair(b, 2 * chi), *cnot]


def _decompose_one(inst: Instruction, native: NativeGateSet) -> list[Instruction]:
    kind, ops = inst.kind, inst.operands
    if kind is GateKind.R:
        return [inst]
    if kind is GateKind.X:
        return [R(ops[0], pi, 0.0)]
    if kind is GateKind.Y:
        return [R(ops[0], pi, pi / 2)]
    if kind is GateKind.H:
        return decompose_h(ops[0])
    if kind is GateKind.T:
        return rz_pair(ops[0], pi / 4)
    if kind is GateKind.CNOT:
        return decompose_cnot(native, *ops)
    if kind is GateKind.SWAP:
        return [g for cnot in decompose_swap(*ops) for g in decompose_cnot(native, *cnot.operands)]
    if kind is native.entangler and (kind is GateKind.CZ or _same_angle(inst.params[0], native.entangling_angle)):
        return [inst]
    a, b = ops
    if kind is GateKind.CZ:
        return [*decompose_h(b), *decompose_cnot(native, a, b), *decompose_h(b)]
    chi = inst.params[0]
    if kind is GateKind.ZX:
        return [*decompose_h(b), *_zz(native, a, b, chi), *decompose_h(b)]
    if kind is GateKind.XX:
        hs = [*decompose_h(a), *decompose_h(b)]
        return [*hs, *_zz(native, a, b, chi), *hs]
    raise TranspileError(f"cannot decompose {kind.value}")


def decompose(c: Circuit, native: NativeGateSet) -> Circuit:
    return c.with_instructions(g for inst in c.instructions for g in _decompose_one(inst, native))


def merge_rotations(c: Circuit) -> Circuit:
    """Fuse neighbouring same-axis R gates on a qubit; drop 2*pi multiples.

    Neighbouring means no other instruction touches that qubit in between.
    """
    out: list[Instruction | None] = []
    stacks: dict[int, list[int]] = {q: [] for q in range(c.n_qubits)}
    for inst in c.instructions:
        if inst.kind is GateKind.R:
            q = inst.operands[0]
            stack = stacks[q]
            if stack:
                prev = out[stack[-1]]
                if prev.kind is GateKind.R and _same_angle(prev.params[1], inst.params[1]):
                    theta = prev.params[0] + inst.params[0]
                    if _is_multiple_of_2pi(theta):
                        out[stack.pop()] = None
                    else:
                        out[stack[-1]] = R(q, theta, prev.params[1])
                    continue
        out.append(inst)
        for q in inst.operands:
            stacks[q].append(len(out) - 1)
    return c.with_instructions(g for g in out if g is not None)


def _as_rotation(inst: Instruction) -> tuple[float, float] | None:
    if inst.kind is GateKind.R:
        return inst.params
    if inst.kind is GateKind.X:
        return (pi, 0.0)
    if inst.kind is GateKind.Y:
        return (pi, pi / 2)
    return None


def apply_virtual_phase(c: Circuit) -> Circuit:
    """Absorb Z rotations into a per-qubit phase frame.

    A pending Z rotation by f ahead of R(theta, phi) is equivalent to
    R(theta, phi + f) followed by the same Z rotation, so the frame slides
    forward and is finally dropped in front of the Z-basis measurement.
    Gates that do not commute with Z on an operand flush that frame.
    """
    frame = [0.0] * c.n_qubits
    out: list[Instruction] = []
    insts = list(c.instructions)
    consumed = set()

    def next_on(i: int, q: int) -> int | None:
        for j in range(i + 1, len(insts)):
            if q in insts[j].operands:
                return j
        return None

    def flush(q: int):
        if not _is_multiple_of_2pi(frame[q]):
            out.extend(rz_pair(q, frame[q]))
        frame[q] = 0.0

    for i, inst in enumerate(insts):
        if i in consumed:
            continue
        kind, ops = inst.kind, inst.operands
        if kind is GateKind.T:
            frame[ops[0]] = remainder(frame[ops[0]] + pi / 4, tau)
            continue
        rot = _as_rotation(inst)
        if rot is not None:
            q = ops[0]
            theta, phi = rot
            if _is_multiple_of_2pi(theta):
                continue
            if _same_angle(theta, pi):
                j = next_on(i, q)
                partner = _as_rotation(insts[j]) if j is not None else None
                if partner is not None and _same_angle(partner[0], pi):
                    frame[q] = remainder(frame[q] + 2 * (phi - partner[1]), tau)
                    consumed.add(j)
                    continue
            out.append(R(q, theta, remainder(phi + frame[q], tau)))
            continue
        if kind is GateKind.CZ:
            pass
        elif kind in (GateKind.ZX, GateKind.CNOT):
            flush(ops[1])
        elif kind is GateKind.SWAP:
            a, b = ops
            frame[a], frame[b] = frame[b], frame[a]
        else:
            for q in ops:
                flush(q)
        out.append(inst)
    return c.with_instructions(out)


def propagate_constants(c: Circuit) -> Circuit:
    """Resolve gates acting on qubits in a known computational basis state.

    Every qubit starts known (|0> or |1>) and is physically prepared in |0>;
    the known value is materialized with an X only when tracking ends.
    Measured qubits still known at the end read |0> physically and get their
    bit complemented classically when the known value is 1.
    """
    known: list[int | None] = [1 if q in c.initial_ones else 0 for q in range(c.n_qubits)]
    out: list[Instruction] = []

    def release(*qubits: int):
        for q in qubits:
            if known[q] == 1:
                out.append(gate("X", q))
            known[q] = None

    for inst in c.instructions:
        kind, ops = inst.kind, inst.operands
        rot = _as_rotation(inst)
        if inst.arity == 1:
            q = ops[0]
            if known[q] is not None:
                if kind is GateKind.T or (rot is not None and _is_multiple_of_2pi(rot[0])):
                    continue
                if rot is not None and _same_angle(rot[0], pi):
                    known[q] ^= 1
                    continue
            release(q)
            out.append(inst)
            continue
        a, b = ops
        if kind is GateKind.CNOT:
            if known[a] == 0:
                continue
            if known[a] == 1:
                if known[b] is not None:
                    known[b] ^= 1
                else:
                    out.append(gate("X", b))
                continue
            release(b)
        elif kind is GateKind.CZ:
            if 0 in (known[a], known[b]) or (known[a] is not None and known[b] is not None):
                continue
            release(a, b)
        elif kind is GateKind.SWAP:
            if known[a] is not None and known[b] is not None:
                known[a], known[b] = known[b], known[a]
                continue
            release(a, b)
        else:
            release(a, b)
        out.append(inst)

    flips = set(c.complemented)
    for q in c.measured:
        if known[q] == 1:
            flips ^= {q}
    return c.with_instructions(out, initial_ones=frozenset(), complemented=frozenset(flips))


PASSES: dict[str, Callable[..., Circuit]] = {
    "propagate_constants": propagate_constants,
    "decompose": decompose,
    "merge_rotations": merge_rotations,
    "apply_virtual_phase": apply_virtual_phase,
}
DEFAULT_PASSES = ("propagate_constants", "decompose", "merge_rotations", "apply_virtual_phase")


def is_native(c: Circuit, native: NativeGateSet) -> bool:
    for inst in c.instructions:
        if inst.kind not in native:
            return False
        if inst.kind in (GateKind.XX, GateKind.ZX) and not _same_angle(inst.params[0], native.entangling_angle):
            return False
    return True


def transpile(c: Circuit, native: NativeGateSet, passes: Sequence[str] | None = None) -> Circuit:
    """Run ``passes`` in order; decomposition to ``native`` always happens.

    ``passes=[]`` performs decomposition only, which is how the gate-error
    experiments keep their circuits from being simplified away.
    """
    check(c)
    passes = DEFAULT_PASSES if passes is None else tuple(passes)
    for name in passes:
        if name not in PASSES:
            raise TranspileError(f"unknown pass {name!r}; choose from {', '.join(PASSES)}")
    for name in passes:
        c = decompose(c, native) if name == "decompose" else PASSES[name](c)
    if not is_native(c, native):
        c = decompose(c, native)
    return c


def entangler_count(c: Circuit) -> int:
    return sum(1 for inst in c.instructions if inst.kind in ENTANGLERS)
