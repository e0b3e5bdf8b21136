"""Repetition-code builders and their dephasing-correcting counterparts."""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, ccnot, cnot, majnot, quantize_for_dephasing
from .errors import InvalidArgumentError
from .statevector import check_width


@dataclass(frozen=True)
class CodeSpec:
    """``k`` logical qubits, each in its own block of ``2t + 1`` lines.

    The data qubit of block ``j`` sits at index ``j * block_size``.
    """

    t: int = 1
    k: int = 1

    def __post_init__(self):
        if self.t < 1:
            raise InvalidArgumentError(f"t must be >= 1, got {self.t}")
        if self.k < 1:
            raise InvalidArgumentError(f"k must be >= 1, got {self.k}")

    @property
    def block_size(self) -> int:
        return 2 * self.t + 1

    @property
    def width(self) -> int:
        return self.k * self.block_size

    @property
    def data_qubits(self) -> list[int]:
        return [j * self.block_size for j in range(self.k)]

    def block(self, j: int) -> range:
        start = j * self.block_size
        return range(start, start + self.block_size)

    @property
    def label(self) -> str:
        base = f"rep{self.block_size}"
        return base if self.k == 1 else f"{base}x{self.k}"


def classical_repetition(t: int) -> tuple[Circuit, Circuit]:
    """Bit-flip repetition code on 2t+1 lines with the data bit on line 0.

    Decoding undoes the fan-out and then flips the data bit when the
    ancillas, now holding the error syndrome, say it was hit.
    """
    if t < 1:
        raise InvalidArgumentError(f"t must be >= 1, got {t}")
    n = 2 * t + 1
    fan_out = tuple(cnot(0, a) for a in range(1, n))
    if t == 1:
        correct = ccnot(1, 2, 0)
    else:
        correct = majnot(range(1, n), 0)
    return Circuit(n, fan_out), Circuit(n, fan_out + (correct,))


def quantum_dephasing_code(t: int) -> tuple[Circuit, Circuit]:
    return quantize_for_dephasing(*classical_repetition(t))


def multi_block_encode(spec: CodeSpec, cap: int | None = None) -> tuple[Circuit, Circuit]:
    """Independent copies of the t-code on disjoint blocks, block 0 first."""
    check_width(spec.width, cap)
    encode, decode = quantum_dephasing_code(spec.t)
    if spec.k == 1:
        return encode, decode
    enc_ops, dec_ops = [], []
    for j in range(spec.k):
        offset = j * spec.block_size
        enc_ops += [op.shifted(offset) for op in encode.ops]
        dec_ops += [op.shifted(offset) for op in decode.ops]
    return Circuit(spec.width, tuple(enc_ops)), Circuit(spec.width, tuple(dec_ops))
