"""Circuit IR, its text format, the classical evaluator and the dephasing pass.

Text format, one op per line::

    qubits 3
    cnot 0 1            # controls first, target last
    majnot 1 2 3 4 -> 0
    dephase 1 0 3.141592653589793
    cphase 1 2 pi

``#`` starts a comment and blank lines are skipped.  Phases are radians,
either decimal or a ``pi`` expression such as ``-pi/2`` or ``3*pi/4``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import gates
from .errors import InvalidArgumentError, NotClassicalError
from .gates import GateKind
from .statevector import (
    QuantumState,
    apply_controlled_not,
    apply_controlled_phase,
    apply_majority_not,
    apply_phase,
    apply_single,
    check_width,
)

_ARITY_NAMES = {1: "one operand", 2: "two operands", 3: "three operands"}


@dataclass(frozen=True)
class CircuitOp:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        arity = self.kind.arity
        if arity is None:
            if len(self.qubits) < 2:
                raise InvalidArgumentError("majnot needs at least one control and a target")
        elif len(self.qubits) != arity:
            raise InvalidArgumentError(
                f"{self.kind.mnemonic} takes {_ARITY_NAMES[arity]}, got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise InvalidArgumentError(f"duplicate operand in {self.kind.mnemonic} {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise InvalidArgumentError(f"negative qubit index in {self.qubits}")
        if len(self.params) != self.kind.n_params:
            raise InvalidArgumentError(
                f"{self.kind.mnemonic} takes {self.kind.n_params} phase(s), got {len(self.params)}"
            )
        if not all(math.isfinite(p) for p in self.params):
            raise InvalidArgumentError(f"non-finite phase in {self.params}")

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind in (GateKind.CNOT, GateKind.CCNOT, GateKind.MAJNOT):
            return self.qubits[:-1]
        return ()

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def shifted(self, offset: int) -> CircuitOp:
        return CircuitOp(self.kind, tuple(q + offset for q in self.qubits), self.params)

    def matrix(self) -> np.ndarray:
        return gates.gate_matrix(self.kind, self.params, len(self.qubits))

    def to_text(self) -> str:
        kind = self.kind
        if kind is GateKind.MAJNOT:
            return "majnot " + " ".join(map(str, self.controls)) + f" -> {self.target}"
        parts = [kind.mnemonic, *map(str, self.qubits), *map(format_phase, self.params)]
        return " ".join(parts)


# convenience constructors
def x(t): return CircuitOp(GateKind.X, (t,))
def cnot(c, t): return CircuitOp(GateKind.CNOT, (c, t))
def ccnot(c1, c2, t): return CircuitOp(GateKind.CCNOT, (c1, c2, t))
def majnot(controls, t): return CircuitOp(GateKind.MAJNOT, (*controls, t))
def u_conv(t): return CircuitOp(GateKind.U_CONV, (t,))
def u_conv_dag(t): return CircuitOp(GateKind.U_CONV_DAG, (t,))
def dephase(t, phi0, phi1): return CircuitOp(GateKind.DEPHASE, (t,), (phi0, phi1))
def cphase(a, b, phi): return CircuitOp(GateKind.CPHASE, (a, b), (phi,))


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    ops: tuple[CircuitOp, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.n_qubits < 1:
            raise InvalidArgumentError(f"circuit width must be >= 1, got {self.n_qubits}")
        for op in self.ops:
            if max(op.qubits) >= self.n_qubits:
                raise InvalidArgumentError(
                    f"op '{op.to_text()}' exceeds circuit width {self.n_qubits}"
                )

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def then(self, more: Iterable[CircuitOp] | Circuit) -> Circuit:
        if isinstance(more, Circuit):
            if more.n_qubits != self.n_qubits:
                raise InvalidArgumentError("cannot join circuits of different width")
            more = more.ops
        return Circuit(self.n_qubits, self.ops + tuple(more))

    @property
    def is_classical(self) -> bool:
        return all(op.kind.is_classical for op in self.ops)

    def to_text(self) -> str:
        return serialize_circuit(self)


# -- text format ----------------------------------------------------------

class CircuitParseError(InvalidArgumentError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownMnemonicError(CircuitParseError):
    pass


class ArityError(CircuitParseError):
    pass


class DuplicateOperandError(CircuitParseError):
    pass


class OperandRangeError(CircuitParseError):
    pass


class HeaderError(CircuitParseError):
    pass


_MNEMONICS = {kind.mnemonic: kind for kind in GateKind}
_PI_EXPR = re.compile(
    r"^(?P<sign>[+-])?(?:(?P<num>\d+(?:\.\d*)?|\.\d+)\s*\*?\s*)?pi(?:\s*/\s*(?P<den>\d+(?:\.\d*)?))?$"
)


def parse_phase(token: str) -> float:
    """Decimal radians, or ``[sign][k*]pi[/m]``."""
    token = token.strip().lower()
    m = _PI_EXPR.match(token)
    if m:
        value = math.pi * float(m["num"] or 1) / float(m["den"] or 1)
        return -value if m["sign"] == "-" else value
    value = float(token)
    if not math.isfinite(value):
        raise ValueError(f"non-finite phase {token!r}")
    return value


def format_phase(phi: float) -> str:
    # repr is the shortest string that round-trips
    return repr(float(phi))


def serialize_circuit(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.n_qubits}"]
    lines += [op.to_text() for op in circuit.ops]
    return "\n".join(lines) + "\n"


def _parse_index(tok: str, lineno: int) -> int:
    try:
        q = int(tok)
    except ValueError:
        raise ArityError(f"expected a qubit index, got {tok!r}", lineno) from None
    if q < 0:
        raise OperandRangeError(f"negative qubit index {q}", lineno)
    return q


def parse_circuit(text: str) -> Circuit:
    n_qubits = None
    ops: list[CircuitOp] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if n_qubits is None:
            if head != "qubits" or len(tokens) != 2:
                raise HeaderError("first statement must be 'qubits <n>'", lineno)
            try:
                n_qubits = int(tokens[1])
            except ValueError:
                raise HeaderError(f"bad qubit count {tokens[1]!r}", lineno) from None
            if n_qubits < 1:
                raise HeaderError(f"qubit count must be >= 1, got {n_qubits}", lineno)
            continue
        if head == "qubits":
            raise HeaderError("duplicate 'qubits' declaration", lineno)
        kind = _MNEMONICS.get(head)
        if kind is None:
            raise UnknownMnemonicError(f"unknown mnemonic {tokens[0]!r}", lineno)
        args = tokens[1:]

        if kind is GateKind.MAJNOT:
            if args.count("->") != 1 or args.index("->") != len(args) - 2 or len(args) < 3:
                raise ArityError("majnot expects '<c1> ... <ck> -> <t>' with k >= 1", lineno)
            qubit_toks = args[:-2] + args[-1:]
            params: list[float] = []
        else:
            n_q = kind.arity
            if len(args) != n_q + kind.n_params:
                raise ArityError(
                    f"{kind.mnemonic} expects {n_q} qubit(s) and {kind.n_params} phase(s), "
                    f"got {len(args)} argument(s)",
                    lineno,
                )
            qubit_toks = args[:n_q]
            try:
                params = [parse_phase(tok) for tok in args[n_q:]]
            except ValueError as exc:
                raise ArityError(f"bad phase: {exc}", lineno) from None

        qubits = [_parse_index(tok, lineno) for tok in qubit_toks]
        if len(set(qubits)) != len(qubits):
            raise DuplicateOperandError(f"duplicate operand in {line!r}", lineno)
        for q in qubits:
            if q >= n_qubits:
                raise OperandRangeError(f"qubit {q} >= declared width {n_qubits}", lineno)
        ops.append(CircuitOp(kind, tuple(qubits), tuple(params)))

    if n_qubits is None:
        raise HeaderError("missing 'qubits <n>' declaration", 1)
    return Circuit(n_qubits, tuple(ops))


# -- evaluation ------------------------------------------------------------

def eval_classical(circuit: Circuit, bits: Sequence[int]) -> tuple[int, ...]:
    """Truth-table evaluation; ``bits[q]`` is the value on line q."""
    if len(bits) != circuit.n_qubits:
        raise InvalidArgumentError(f"expected {circuit.n_qubits} bits, got {len(bits)}")
    state = [int(b) & 1 for b in bits]
    for op in circuit.ops:
        kind = op.kind
        if not kind.is_classical:
            raise NotClassicalError(f"'{op.to_text()}' has no classical meaning")
        ctrl = [state[c] for c in op.controls]
        if kind is GateKind.MAJNOT:
            fire = 2 * sum(ctrl) > len(ctrl)
        else:
            fire = all(ctrl)
        if fire:
            state[op.target] ^= 1
    return tuple(state)


def apply_op(state: QuantumState, op: CircuitOp) -> QuantumState:
    kind = op.kind
    if kind in (GateKind.X, GateKind.CNOT, GateKind.CCNOT):
        return apply_controlled_not(state, op.controls, op.target)
    if kind is GateKind.MAJNOT:
        return apply_majority_not(state, op.controls, op.target)
    if kind is GateKind.U_CONV:
        return apply_single(state, gates.conversion_rotation(), op.target)
    if kind is GateKind.U_CONV_DAG:
        return apply_single(state, gates.conversion_rotation_dag(), op.target)
    if kind is GateKind.DEPHASE:
        return apply_phase(state, op.target, *op.params)
    if kind is GateKind.CPHASE:
        return apply_controlled_phase(state, op.qubits[0], op.qubits[1], op.params[0])
    raise InvalidArgumentError(f"unsupported gate kind {kind!r}")


def run_quantum(circuit: Circuit | Iterable[CircuitOp], state: QuantumState) -> QuantumState:
    """Apply the ops in order.  A bare op list is taken at the state's width."""
    if isinstance(circuit, Circuit):
        if circuit.n_qubits != state.n_qubits:
            raise InvalidArgumentError(
                f"circuit width {circuit.n_qubits} != state width {state.n_qubits}"
            )
        ops = circuit.ops
    else:
        ops = circuit
    check_width(state.n_qubits)
    for op in ops:
        state = apply_op(state, op)
    return state


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense unitary of the whole circuit, column b = image of basis state b."""
    dim = 1 << circuit.n_qubits
    basis = QuantumState(circuit.n_qubits, np.eye(dim, dtype=complex))
    return run_quantum(circuit, basis).amplitudes.T


# -- the classical -> dephasing conversion --------------------------------

def quantize_for_dephasing(encode: Circuit, decode: Circuit) -> tuple[Circuit, Circuit]:
    """Turn a bit-flip code (encode, decode) into a dephasing code.

    The classical ops are reused as quantum gates.  Encoding gains a final
    conversion rotation on every line; decoding starts by undoing it, so any
    phase error striking in between reaches the classical decoder as a flip.
    """
    if encode.n_qubits != decode.n_qubits:
        raise InvalidArgumentError("encode and decode must have the same width")
    for part in (encode, decode):
        for op in part.ops:
            if not op.kind.is_classical:
                raise InvalidArgumentError(f"'{op.to_text()}' is not a classical op")
    n = encode.n_qubits
    q_encode = encode.then(u_conv(q) for q in range(n))
    q_decode = Circuit(n, tuple(u_conv_dag(q) for q in range(n)) + decode.ops)
    return q_encode, q_decode
