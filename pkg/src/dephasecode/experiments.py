"""Verification runs and Monte-Carlo fidelity sweeps."""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
from typing import Sequence

import numpy as np

from . import gates
from .circuit import Circuit, CircuitOp, dephase, run_quantum
from .codes import CodeSpec, multi_block_encode
from .errors import InvalidArgumentError
from .noise import (
    DephasingModel,
    apply_error_batch,
    enumerate_pauli_z,
    restrict_to_single_qubit,
    trial_rng,
    validate_model,
    with_sigma,
)
from .statevector import (
    QuantumState,
    as_qubit_vector,
    embed_state,
    fidelity_with,
    purity,
    reduced_density,
)

VERIFY_TOL = 1e-10
IDENTITY_TOL = 1e-12
CHUNK = 8192
PLUS = (1 / math.sqrt(2), 1 / math.sqrt(2))
# Bloch vector (1, 1, 1)/sqrt(3): sensitive both to bare dephasing (Z) and to
# the flip-type residue the codes leave behind (X)
GENERIC_INPUT = (
    math.sqrt((1 + 1 / math.sqrt(3)) / 2),
    math.sqrt((1 - 1 / math.sqrt(3)) / 2) * complex(math.cos(math.pi / 4), math.sin(math.pi / 4)),
)


def random_qubit_states(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` Haar-random single-qubit states, shape (n, 2)."""
    v = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def logical_reference(data, k: int) -> np.ndarray:
    """Product of ``k`` copies of ``data`` (batch dims allowed)."""
    ref = np.asarray(data, dtype=complex)
    out = ref
    for _ in range(k - 1):
        out = np.einsum("...i,...j->...ij", ref, out).reshape(ref.shape[:-1] + (-1,))
    return out


def decoded_fidelity(encoded: QuantumState, error: Sequence[CircuitOp], decode: Circuit,
                     reference, data_qubits: Sequence[int] = (0,)):
    """Run error then decode; return (fidelity, purity) of the data qubits."""
    out = run_quantum(decode, run_quantum(error, encoded))
    rho = reduced_density(out, list(data_qubits))
    return fidelity_with(rho, reference), purity(rho)


# -- verification ----------------------------------------------------------

@dataclass
class VerifyReport:
    t: int
    weight: int
    n_error_cases: int
    n_inputs: int
    max_infidelity: float
    min_purity: float
    witness: list[CircuitOp]
    witness_input: tuple[complex, complex]
    witness_fidelity: float
    witness_plus_fidelity: float
    witness_zero_fidelity: float

    @property
    def passed(self) -> bool:
        return self.max_infidelity < VERIFY_TOL

    def format(self) -> str:
        lines = [
            f"verify t={self.t} weight<={self.weight}: {self.n_error_cases} error cases x "
            f"{self.n_inputs} inputs",
            f"max infidelity {self.max_infidelity:.3e}, min data purity {self.min_purity:.15f}",
        ]
        if self.passed:
            lines.append("PASS")
        else:
            a, b = self.witness_input
            lines += [
                "FAIL witness error:",
                *("  " + op.to_text() for op in self.witness),
                f"  worst input alpha={a:.6g} beta={b:.6g} -> fidelity {self.witness_fidelity:.12f}",
                f"  input |+> -> fidelity {self.witness_plus_fidelity:.12f}",
                f"  input |0> -> fidelity {self.witness_zero_fidelity:.12f}",
            ]
        return "\n".join(lines)


def phase_grid(n_points: int = 20) -> np.ndarray:
    return 2 * np.pi * np.arange(n_points) / n_points


def verify_code(t: int, weight: int | None = None, n_inputs: int = 100, n_grid: int = 20,
                seed: int = 0) -> VerifyReport:
    """Exhaustive Z patterns up to ``weight`` plus a phase grid on every placement.

    Grid case ``g`` on a placement gives its first qubit the phase
    ``2 pi g / n_grid`` and every further qubit an independent uniform phase.
    """
    weight = t if weight is None else weight
    spec = CodeSpec(t)
    n = spec.width
    encode, decode = multi_block_encode(spec)
    rng = trial_rng(seed, 0)
    inputs = random_qubit_states(rng, n_inputs)
    encoded = run_quantum(encode, embed_state(n, inputs, [0]))

    errors: list[list[CircuitOp]] = list(enumerate_pauli_z(n, weight))
    for w in range(1, weight + 1):
        for combo in itertools.combinations(range(n), w):
            for phi in phase_grid(n_grid):
                extra = rng.uniform(0, 2 * np.pi, w - 1)
                phis = (phi, *extra)
                errors.append([dephase(q, 0.0, float(p)) for q, p in zip(combo, phis)])

    worst = (-1.0, None, None, None)
    min_pur = 1.0
    for err in errors:
        fid, pur = decoded_fidelity(encoded, err, decode, inputs)
        min_pur = min(min_pur, float(np.min(pur)))
        i = int(np.argmin(fid))
        infid = 1.0 - float(fid[i])
        if infid > worst[0]:
            worst = (infid, err, tuple(complex(z) for z in inputs[i]), float(fid[i]))

    infid, err, worst_in, worst_fid = worst

    def single(data):
        st = run_quantum(encode, embed_state(n, data, [0]))
        return decoded_fidelity(st, err, decode, data)[0]

    return VerifyReport(t, weight, len(errors), n_inputs, max(infid, 0.0), min_pur, err,
                        worst_in, worst_fid, single(PLUS), single((1.0, 0.0)))


# -- conversion identity ---------------------------------------------------

def identity_deviation(phi0: float, phi1: float) -> float:
    diff = gates.conjugate_dephase_identity(phi0, phi1) - gates.conjugate_dephase_closed_form(phi0, phi1)
    return float(np.linalg.norm(diff, 2))


def identity_check(samples: int, seed: int = 0, phases: tuple[float, float] | None = None) -> float:
    """Max operator-norm deviation over ``samples`` phase pairs.

    With ``phases`` given every sample uses that pair; otherwise pairs are
    uniform on [0, 2 pi)^2.
    """
    if samples < 1:
        raise InvalidArgumentError(f"samples must be >= 1, got {samples}")
    if phases is not None:
        return identity_deviation(*phases)
    rng = trial_rng(seed, 1)
    pairs = rng.uniform(0, 2 * np.pi, size=(samples, 2))
    return max(identity_deviation(p0, p1) for p0, p1 in pairs)


# -- sweeps ----------------------------------------------------------------

@dataclass
class ExperimentRecord:
    code: str
    t: int
    k: int
    model: str
    sigma: float
    trials: int
    mean_fidelity: float
    min_fidelity: float
    std_error: float

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> list[str]:
        return [repr(v) if isinstance(v, float) else str(v) for v in astuple(self)]


def summarize(fids: np.ndarray) -> tuple[float, float, float]:
    """(mean, min, standard error); the mean is kept inside [min, 1] against rounding."""
    fids = np.clip(np.asarray(fids, dtype=float), 0.0, 1.0)
    lo = float(np.min(fids))
    mean = math.fsum(fids) / len(fids)
    std_err = float(np.std(fids, ddof=1) / math.sqrt(len(fids))) if len(fids) > 1 else 0.0
    return min(max(mean, lo), 1.0), lo, std_err


def _chunk_fidelities(encoded: QuantumState, decode: Circuit | None, model: DephasingModel | None,
                      reference: np.ndarray, data_qubits: list[int], size: int,
                      rng: np.random.Generator) -> np.ndarray:
    if model is None:
        return np.ones(size)
    batch = QuantumState(encoded.n_qubits, np.broadcast_to(encoded.amplitudes, (size, encoded.amplitudes.shape[-1])))
    state = apply_error_batch(batch, model, rng)
    if decode is not None:
        state = run_quantum(decode, state)
    rho = reduced_density(state, data_qubits)
    return fidelity_with(rho, reference)


def monte_carlo_fidelities(spec: CodeSpec | None, model: DephasingModel, trials: int, seed: int,
                           stream: Sequence[int] = (), data=GENERIC_INPUT,
                           threads: int = 1, chunk: int = CHUNK) -> np.ndarray:
    """Per-trial fidelities, ordered by trial index.

    ``spec=None`` is a bare unencoded qubit.  Chunk ``j`` of the trials draws
    from stream ``(seed, *stream, j)`` whatever the thread count.
    """
    if trials < 1:
        raise InvalidArgumentError(f"trials must be >= 1, got {trials}")
    data = as_qubit_vector(data)
    if spec is None:
        width, decode, data_qubits, k = 1, None, [0], 1
        model = restrict_to_single_qubit(model)
        encoded = QuantumState(1, data)
    else:
        encode, decode = multi_block_encode(spec)
        width, data_qubits, k = spec.width, spec.data_qubits, spec.k
        encoded = run_quantum(encode, embed_state(width, logical_reference(data, k), data_qubits))
    if model is not None:
        validate_model(model, width)
    reference = logical_reference(data, k)

    starts = list(range(0, trials, chunk))

    def job(j):
        size = min(chunk, trials - starts[j])
        return _chunk_fidelities(encoded, decode, model, reference, data_qubits, size,
                                 trial_rng(seed, *stream, j))

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, range(len(starts))))
    else:
        parts = [job(j) for j in range(len(starts))]
    return np.concatenate(parts)


def run_sweep(specs: Sequence[CodeSpec], model: DephasingModel, sigmas: Sequence[float],
              trials: int, seed: int = 0, data=GENERIC_INPUT, threads: int = 1,
              chunk: int = CHUNK) -> list[ExperimentRecord]:
    """One record per (sigma, code), the unencoded baseline first for each sigma."""
    records = []
    for i, sigma in enumerate(sigmas):
        m = with_sigma(model, sigma)
        for c, spec in enumerate([None, *specs]):
            fids = monte_carlo_fidelities(spec, m, trials, seed, (i, c), data, threads, chunk)
            mean, lo, se = summarize(fids)
            if spec is None:
                label, t, k = "unencoded", 0, 1
            else:
                label, t, k = spec.label, spec.t, spec.k
            records.append(ExperimentRecord(label, t, k, m.label, float(sigma), trials, mean, lo, se))
    return records


def records_to_csv(records: Sequence[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ExperimentRecord.header())
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def loglog_slope(sigmas: Sequence[float], infidelities: Sequence[float]) -> float:
    """Least-squares slope of log(infidelity) against log(sigma)."""
    x = np.log(np.asarray(sigmas, dtype=float))
    y = np.log(np.asarray(infidelities, dtype=float))
    return float(np.polyfit(x, y, 1)[0])
