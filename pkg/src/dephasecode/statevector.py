"""Dense state-vector core.

Basis convention is little-endian: in basis index ``b`` qubit ``q`` holds bit
``(b >> q) & 1``, so qubit 0 is the data line and ancillas are appended above
it.  Amplitude arrays may carry leading batch dimensions; every kernel acts on
the last axis only, which lets Monte-Carlo code push many trials through one
call.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CapacityError, InvalidArgumentError

DEFAULT_QUBIT_CAP = 24
NORM_TOL = 1e-12
INPUT_NORM_TOL = 1e-10

_qubit_cap = DEFAULT_QUBIT_CAP


def qubit_cap() -> int:
    return _qubit_cap


def set_qubit_cap(cap: int) -> None:
    global _qubit_cap
    if cap < 1:
        raise InvalidArgumentError(f"qubit cap must be positive, got {cap}")
    _qubit_cap = int(cap)


def check_width(n_qubits: int, cap: int | None = None) -> None:
    cap = _qubit_cap if cap is None else cap
    if n_qubits < 1:
        raise InvalidArgumentError(f"n_qubits must be >= 1, got {n_qubits}")
    if n_qubits > cap:
        raise CapacityError(f"{n_qubits} qubits exceeds the cap of {cap}")


def as_qubit_vector(data) -> np.ndarray:
    """Normalize-check a pair ``(alpha, beta)`` or any 2**m amplitude vector."""
    vec = np.asarray(data, dtype=complex)
    if vec.ndim < 1 or vec.shape[-1] < 2 or vec.shape[-1] & (vec.shape[-1] - 1):
        raise InvalidArgumentError("state vector length must be a power of two >= 2")
    norms = np.sum(np.abs(vec) ** 2, axis=-1)
    if np.any(np.abs(norms - 1.0) > INPUT_NORM_TOL):
        raise InvalidArgumentError(f"state is not normalized (|v|^2 = {norms})")
    return vec


@dataclass
class QuantumState:
    """Amplitudes over ``n_qubits`` qubits, shape ``(..., 2**n_qubits)``."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape[-1] != 1 << self.n_qubits:
            raise InvalidArgumentError(
                f"expected {1 << self.n_qubits} amplitudes, got {self.amplitudes.shape[-1]}"
            )

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.amplitudes.shape[:-1]

    def norm_squared(self):
        return np.sum(np.abs(self.amplitudes) ** 2, axis=-1)

    def copy(self) -> QuantumState:
        return QuantumState(self.n_qubits, self.amplitudes.copy())

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.n_qubits:
            raise IndexError(f"qubit {q} out of range for {self.n_qubits}-qubit state")


def embed_state(n_qubits: int, data, data_qubits: Sequence[int], cap: int | None = None) -> QuantumState:
    """Place a normalized m-qubit vector on ``data_qubits``; all other qubits are |0>.

    ``data`` may carry leading batch dimensions.  Entry ``j`` of the data
    vector lands on the basis index whose bit ``data_qubits[i]`` equals bit
    ``i`` of ``j``.
    """
    check_width(n_qubits, cap)
    vec = as_qubit_vector(data)
    m = vec.shape[-1].bit_length() - 1
    data_qubits = list(data_qubits)
    if len(data_qubits) != m or len(set(data_qubits)) != m:
        raise InvalidArgumentError(f"need {m} distinct data qubits, got {data_qubits}")
    for q in data_qubits:
        if not 0 <= q < n_qubits:
            raise IndexError(f"qubit {q} out of range for {n_qubits}-qubit state")
    idx = np.zeros(1 << m, dtype=np.int64)
    for i, q in enumerate(data_qubits):
        idx |= ((np.arange(1 << m) >> i) & 1) << q
    amps = np.zeros(vec.shape[:-1] + (1 << n_qubits,), dtype=complex)
    amps[..., idx] = vec
    return QuantumState(n_qubits, amps)


def init_state(n_qubits: int, data_state, cap: int | None = None) -> QuantumState:
    """Return ``(alpha|0> + beta|1>) (x) |0...0>`` with the data on qubit 0."""
    return embed_state(n_qubits, data_state, [0], cap)


def basis_state(n_qubits: int, bits: Sequence[int]) -> QuantumState:
    index = sum((int(b) & 1) << q for q, b in enumerate(bits))
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[index] = 1.0
    return QuantumState(n_qubits, amps)


def is_unitary(u: np.ndarray, tol: float = NORM_TOL) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(
        u.conj().T @ u, np.eye(u.shape[0]), rtol=0, atol=tol
    )


# -- kernels on raw arrays -------------------------------------------------

def _apply_1q(amps: np.ndarray, u: np.ndarray, target: int, n: int) -> np.ndarray:
    lead = amps.shape[:-1]
    view = amps.reshape(lead + (1 << (n - target - 1), 2, 1 << target))
    out = np.einsum("ij,...ajb->...aib", u, view)
    return out.reshape(amps.shape)


def _apply_diag(amps: np.ndarray, diag: np.ndarray) -> np.ndarray:
    return amps * diag


@lru_cache(maxsize=256)
def _bits(n: int) -> np.ndarray:
    """``bits[q, b]`` is bit q of basis index b."""
    idx = np.arange(1 << n)
    return ((idx[None, :] >> np.arange(n)[:, None]) & 1).astype(np.int8)


@lru_cache(maxsize=256)
def _cnot_perm(n: int, controls: tuple[int, ...], target: int) -> np.ndarray:
    idx = np.arange(1 << n)
    mask = 0
    for c in controls:
        mask |= 1 << c
    fire = (idx & mask) == mask
    return np.where(fire, idx ^ (1 << target), idx)


@lru_cache(maxsize=256)
def _majority_perm(n: int, controls: tuple[int, ...], target: int) -> np.ndarray:
    idx = np.arange(1 << n)
    bits = _bits(n)
    ones = bits[list(controls)].sum(axis=0)
    # strict majority: ties leave the target alone
    fire = 2 * ones > len(controls)
    return np.where(fire, idx ^ (1 << target), idx)


def _check_controls(state: QuantumState, controls: Sequence[int], target: int) -> tuple[int, ...]:
    state._check_qubit(target)
    controls = tuple(int(c) for c in controls)
    for c in controls:
        state._check_qubit(c)
    if target in controls:
        raise InvalidArgumentError(f"target {target} is also a control")
    if len(set(controls)) != len(controls):
        raise InvalidArgumentError(f"repeated control in {controls}")
    return controls


# -- public operations -----------------------------------------------------

def apply_single(state: QuantumState, u, target: int) -> QuantumState:
    """Apply a 2x2 unitary to ``target``."""
    state._check_qubit(target)
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise InvalidArgumentError(f"expected a 2x2 matrix, got shape {u.shape}")
    return QuantumState(state.n_qubits, _apply_1q(state.amplitudes, u, target, state.n_qubits))


def apply_phase(state: QuantumState, target: int, phi0, phi1) -> QuantumState:
    """Apply ``diag(e^{i phi0}, e^{i phi1})`` to ``target``.

    ``phi0``/``phi1`` may be arrays matching the batch shape, so each batch
    member can receive its own phases.
    """
    state._check_qubit(target)
    phi0 = np.asarray(phi0, dtype=float)[..., None]
    phi1 = np.asarray(phi1, dtype=float)[..., None]
    bit = _bits(state.n_qubits)[target]
    diag = np.exp(1j * np.where(bit == 1, phi1, phi0))
    return QuantumState(state.n_qubits, _apply_diag(state.amplitudes, diag))


def apply_controlled_phase(state: QuantumState, a: int, b: int, phi) -> QuantumState:
    """Phase ``e^{i phi}`` on basis states where qubits ``a`` and ``b`` are both 1."""
    state._check_qubit(a)
    state._check_qubit(b)
    if a == b:
        raise InvalidArgumentError("controlled phase needs two distinct qubits")
    bits = _bits(state.n_qubits)
    both = (bits[a] & bits[b]) == 1
    phi = np.asarray(phi, dtype=float)[..., None]
    diag = np.exp(1j * np.where(both, phi, 0.0))
    return QuantumState(state.n_qubits, _apply_diag(state.amplitudes, diag))


def apply_controlled_not(state: QuantumState, controls: Sequence[int], target: int) -> QuantumState:
    """Flip ``target`` wherever every control bit is 1 (no controls: plain NOT)."""
    controls = _check_controls(state, controls, target)
    perm = _cnot_perm(state.n_qubits, tuple(sorted(controls)), target)
    return QuantumState(state.n_qubits, state.amplitudes[..., perm])


def apply_majority_not(state: QuantumState, controls: Sequence[int], target: int) -> QuantumState:
    """Flip ``target`` iff strictly more than half of ``controls`` are 1."""
    controls = _check_controls(state, controls, target)
    if not controls:
        raise InvalidArgumentError("majority gate needs at least one control")
    perm = _majority_perm(state.n_qubits, tuple(sorted(controls)), target)
    return QuantumState(state.n_qubits, state.amplitudes[..., perm])


def reduced_density(state: QuantumState, keep) -> np.ndarray:
    """Partial trace down to the qubits in ``keep`` (an index or a sequence).

    The result is ``2**m x 2**m`` (with the batch shape in front), indexed in
    the same little-endian order as ``keep``: ``keep[0]`` is the low bit.
    """
    keep = [keep] if np.ndim(keep) == 0 else list(keep)
    for q in keep:
        state._check_qubit(int(q))
    if len(set(keep)) != len(keep):
        raise InvalidArgumentError(f"repeated qubit in {keep}")
    n = state.n_qubits
    lead = state.batch_shape
    # reshape gives axis -(q+1) for qubit q
    psi = state.amplitudes.reshape(lead + (2,) * n)
    nb = len(lead)
    kept_axes = [nb + n - 1 - q for q in reversed(keep)]  # high bit of result first
    traced = [nb + a for a in range(n) if nb + a not in kept_axes]
    psi = np.moveaxis(psi, kept_axes + traced, list(range(nb, nb + n)))
    m = len(keep)
    psi = psi.reshape(lead + (1 << m, 1 << (n - m)))
    return psi @ np.swapaxes(psi.conj(), -1, -2)


def fidelity_with(state_or_density, reference, keep=0):
    """``<ref| rho |ref>`` for the reduced density of the ``keep`` qubit(s).

    Accepts either a :class:`QuantumState` (reduced onto ``keep``) or a
    density matrix whose dimension matches the reference.
    """
    ref = as_qubit_vector(reference)
    if isinstance(state_or_density, QuantumState):
        rho = reduced_density(state_or_density, keep)
    else:
        rho = np.asarray(state_or_density, dtype=complex)
    if rho.shape[-1] != ref.shape[-1]:
        raise InvalidArgumentError("reference dimension does not match the density matrix")
    value = np.einsum("...i,...ij,...j->...", ref.conj(), rho, ref).real
    value = np.clip(value, 0.0, 1.0)
    return float(value) if np.ndim(value) == 0 else value


def purity(rho: np.ndarray):
    value = np.einsum("...ij,...ji->...", rho, rho).real
    return float(value) if np.ndim(value) == 0 else value
