"""Minimal dephasing-correction codes on a dense state-vector simulator."""

from .circuit import (
    Circuit,
    CircuitOp,
    eval_classical,
    parse_circuit,
    quantize_for_dephasing,
    run_quantum,
    serialize_circuit,
)
from .codes import CodeSpec, classical_repetition, multi_block_encode, quantum_dephasing_code
from .gates import GateKind, conjugate_dephase_identity, conversion_rotation, dephase_gate
from .statevector import QuantumState, fidelity_with, init_state, reduced_density

__all__ = [
    "Circuit",
    "CircuitOp",
    "CodeSpec",
    "GateKind",
    "QuantumState",
    "classical_repetition",
    "conjugate_dephase_identity",
    "conversion_rotation",
    "dephase_gate",
    "eval_classical",
    "fidelity_with",
    "init_state",
    "multi_block_encode",
    "parse_circuit",
    "quantize_for_dephasing",
    "quantum_dephasing_code",
    "reduced_density",
    "run_quantum",
    "serialize_circuit",
]
