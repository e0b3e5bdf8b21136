"""Gate kinds and the concrete matrices behind them."""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import InvalidArgumentError

_S = 1 / math.sqrt(2)

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class GateKind(enum.Enum):
    X = "x"
    CNOT = "cnot"
    CCNOT = "ccnot"
    MAJNOT = "majnot"
    U_CONV = "u"
    U_CONV_DAG = "udag"
    DEPHASE = "dephase"
    CPHASE = "cphase"

    @property
    def mnemonic(self) -> str:
        return self.value

    @property
    def n_params(self) -> int:
        return {GateKind.DEPHASE: 2, GateKind.CPHASE: 1}.get(self, 0)

    @property
    def arity(self) -> int | None:
        """Fixed operand count, or None for the variable-width majority gate."""
        return _ARITY[self]

    @property
    def is_classical(self) -> bool:
        return self in CLASSICAL_KINDS


_ARITY = {
    GateKind.X: 1,
    GateKind.CNOT: 2,
    GateKind.CCNOT: 3,
    GateKind.MAJNOT: None,
    GateKind.U_CONV: 1,
    GateKind.U_CONV_DAG: 1,
    GateKind.DEPHASE: 1,
    GateKind.CPHASE: 2,
}

CLASSICAL_KINDS = frozenset({GateKind.X, GateKind.CNOT, GateKind.CCNOT, GateKind.MAJNOT})


def _finite(*phis: float) -> None:
    for phi in phis:
        if not math.isfinite(phi):
            raise InvalidArgumentError(f"phase must be finite, got {phi}")


def conversion_rotation() -> np.ndarray:
    """exp(-i pi sigma_y / 4): the pi/2 y-rotation that turns phase errors into flips.

    cos(pi/4) I - i sin(pi/4) sigma_y = [[1, -1], [1, 1]] / sqrt(2).
    """
    return np.array([[_S, -_S], [_S, _S]], dtype=complex)


def conversion_rotation_dag() -> np.ndarray:
    return conversion_rotation().conj().T


def dephase_gate(phi0: float, phi1: float) -> np.ndarray:
    _finite(phi0, phi1)
    return np.diag([np.exp(1j * phi0), np.exp(1j * phi1)])


def conjugate_dephase_identity(phi0: float, phi1: float) -> np.ndarray:
    """Return U^dag D(phi0, phi1) U, which is a mix of identity and bit flip."""
    u = conversion_rotation()
    return u.conj().T @ dephase_gate(phi0, phi1) @ u


def conjugate_dephase_closed_form(phi0: float, phi1: float) -> np.ndarray:
    """((e^{i phi1} + e^{i phi0}) I + (e^{i phi1} - e^{i phi0}) X) / 2."""
    _finite(phi0, phi1)
    a, b = np.exp(1j * phi0), np.exp(1j * phi1)
    return 0.5 * ((b + a) * I2 + (b - a) * PAULI_X)


def correlated_phase_gate(phi: float) -> np.ndarray:
    """diag(1, 1, 1, e^{i phi}) on two qubits (symmetric in its operands)."""
    _finite(phi)
    return np.diag([1, 1, 1, np.exp(1j * phi)]).astype(complex)


def _controlled_x(n_controls: int) -> np.ndarray:
    # operands ordered controls first, target last; operand i is bit i
    dim = 1 << (n_controls + 1)
    mask = (1 << n_controls) - 1
    m = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        out = b ^ (1 << n_controls) if b & mask == mask else b
        m[out, b] = 1
    return m


def _majority_x(n_controls: int) -> np.ndarray:
    dim = 1 << (n_controls + 1)
    m = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        ones = bin(b & ((1 << n_controls) - 1)).count("1")
        out = b ^ (1 << n_controls) if 2 * ones > n_controls else b
        m[out, b] = 1
    return m


def gate_matrix(kind: GateKind, params: tuple[float, ...] = (), n_operands: int | None = None) -> np.ndarray:
    """Dense unitary of a gate on its own operands (operand i is bit i)."""
    if kind is GateKind.X:
        return PAULI_X.copy()
    if kind is GateKind.CNOT:
        return _controlled_x(1)
    if kind is GateKind.CCNOT:
        return _controlled_x(2)
    if kind is GateKind.MAJNOT:
        if n_operands is None or n_operands < 2:
            raise InvalidArgumentError("majority gate needs the operand count (>= 2)")
        return _majority_x(n_operands - 1)
    if kind is GateKind.U_CONV:
        return conversion_rotation()
    if kind is GateKind.U_CONV_DAG:
        return conversion_rotation_dag()
    if kind is GateKind.DEPHASE:
        return dephase_gate(*params)
    if kind is GateKind.CPHASE:
        return correlated_phase_gate(*params)
    raise InvalidArgumentError(f"unknown gate kind {kind!r}")
