"""Dephasing error models.

Sampled models fix ``phi0 = 0`` and draw only the relative phase.  Random
streams are keyed by ``(seed, *counters)`` through ``numpy.random.SeedSequence``
so a trial's errors do not depend on which worker happens to run it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

from .circuit import CircuitOp, cphase, dephase, parse_phase
from .errors import InvalidArgumentError
from .statevector import QuantumState, apply_controlled_phase, apply_phase

DISTRIBUTIONS = ("gauss", "uniform")


@dataclass(frozen=True)
class FixedPhases:
    entries: tuple[tuple[int, float, float], ...]

    @property
    def label(self) -> str:
        return "fixed"


@dataclass(frozen=True)
class IID:
    """Independent relative phase on every listed qubit (all qubits if None)."""

    sigma: float
    distribution: str = "gauss"
    qubits: tuple[int, ...] | None = None

    @property
    def label(self) -> str:
        return f"iid:{self.distribution}"


@dataclass(frozen=True)
class SingleRandomQubit:
    """One qubit, chosen uniformly, receives a random relative phase."""

    sigma: float
    distribution: str = "gauss"
    qubits: tuple[int, ...] | None = None

    @property
    def label(self) -> str:
        return f"single:{self.distribution}"


@dataclass(frozen=True)
class PauliZEnumeration:
    max_weight: int

    @property
    def label(self) -> str:
        return f"enum:w={self.max_weight}"


@dataclass(frozen=True)
class Correlated:
    qubits: tuple[int, int]
    phi: float

    @property
    def label(self) -> str:
        return "corr"


DephasingModel = Union[FixedPhases, IID, SingleRandomQubit, PauliZEnumeration, Correlated]


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for stream ``key`` under ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def _draw(distribution: str, sigma: float, rng: np.random.Generator, size) -> np.ndarray:
    if distribution == "gauss":
        return rng.normal(0.0, sigma, size)
    if distribution == "uniform":
        return rng.uniform(-sigma, sigma, size)
    raise InvalidArgumentError(f"unknown distribution {distribution!r}")


def _targets(qubits, width: int) -> tuple[int, ...]:
    return tuple(range(width)) if qubits is None else tuple(qubits)


def validate_model(model: DephasingModel, width: int) -> None:
    def in_range(qs):
        for q in qs:
            if not 0 <= q < width:
                raise InvalidArgumentError(f"qubit {q} outside a {width}-qubit register")

    if isinstance(model, FixedPhases):
        in_range(q for q, _, _ in model.entries)
        for _, p0, p1 in model.entries:
            if not (math.isfinite(p0) and math.isfinite(p1)):
                raise InvalidArgumentError("fixed phases must be finite")
    elif isinstance(model, (IID, SingleRandomQubit)):
        if not model.sigma >= 0:
            raise InvalidArgumentError(f"sigma must be >= 0, got {model.sigma}")
        if model.distribution not in DISTRIBUTIONS:
            raise InvalidArgumentError(f"unknown distribution {model.distribution!r}")
        qs = _targets(model.qubits, width)
        if not qs:
            raise InvalidArgumentError("model targets no qubits")
        in_range(qs)
    elif isinstance(model, PauliZEnumeration):
        if not 0 <= model.max_weight <= width:
            raise InvalidArgumentError(f"weight {model.max_weight} not in [0, {width}]")
    elif isinstance(model, Correlated):
        a, b = model.qubits
        if a == b:
            raise InvalidArgumentError("correlated dephasing needs two distinct qubits")
        in_range(model.qubits)
        if not math.isfinite(model.phi):
            raise InvalidArgumentError("correlated phase must be finite")
    else:
        raise InvalidArgumentError(f"not a dephasing model: {model!r}")


def enumerate_pauli_z(width: int, max_weight: int, qubits: Sequence[int] | None = None) -> list[list[CircuitOp]]:
    """Every placement of at most ``max_weight`` Z errors, lightest first.

    Z is written as ``dephase(q, 0, pi)``.  The empty error comes first.
    """
    qs = _targets(qubits, width)
    if not 0 <= max_weight <= len(qs):
        raise InvalidArgumentError(f"weight {max_weight} not in [0, {len(qs)}]")
    return [
        [dephase(q, 0.0, math.pi) for q in combo]
        for w in range(max_weight + 1)
        for combo in itertools.combinations(qs, w)
    ]


def sample_error(model: DephasingModel, width: int, rng: np.random.Generator) -> list[CircuitOp]:
    """Draw one error realisation as DEPHASE / CPHASE ops."""
    validate_model(model, width)
    if isinstance(model, FixedPhases):
        return [dephase(q, p0, p1) for q, p0, p1 in model.entries]
    if isinstance(model, IID):
        qs = _targets(model.qubits, width)
        phis = _draw(model.distribution, model.sigma, rng, len(qs))
        return [dephase(q, 0.0, float(p)) for q, p in zip(qs, phis)]
    if isinstance(model, SingleRandomQubit):
        qs = _targets(model.qubits, width)
        q = qs[int(rng.integers(len(qs)))]
        phi = float(_draw(model.distribution, model.sigma, rng, None))
        return [dephase(q, 0.0, phi)]
    if isinstance(model, PauliZEnumeration):
        patterns = enumerate_pauli_z(width, model.max_weight)
        return patterns[int(rng.integers(len(patterns)))]
    a, b = model.qubits
    return [cphase(a, b, model.phi)]


def apply_error_batch(state: QuantumState, model: DephasingModel, rng: np.random.Generator) -> QuantumState:
    """Apply an independent error draw to every member of a 1-D batch of states.

    Uses the same distributions as :func:`sample_error` but draws for the
    whole batch at once, so the streams differ from per-trial sampling.
    """
    width = state.n_qubits
    validate_model(model, width)
    (n_trials,) = state.batch_shape
    if isinstance(model, FixedPhases):
        for q, p0, p1 in model.entries:
            state = apply_phase(state, q, p0, p1)
        return state
    if isinstance(model, IID):
        qs = _targets(model.qubits, width)
        phis = _draw(model.distribution, model.sigma, rng, (n_trials, len(qs)))
        for i, q in enumerate(qs):
            state = apply_phase(state, q, 0.0, phis[:, i])
        return state
    if isinstance(model, SingleRandomQubit):
        qs = _targets(model.qubits, width)
        choice = rng.integers(len(qs), size=n_trials)
        phis = _draw(model.distribution, model.sigma, rng, n_trials)
        for i, q in enumerate(qs):
            state = apply_phase(state, q, 0.0, np.where(choice == i, phis, 0.0))
        return state
    if isinstance(model, PauliZEnumeration):
        patterns = enumerate_pauli_z(width, model.max_weight)
        mask = np.zeros((len(patterns), width))
        for i, pattern in enumerate(patterns):
            for op in pattern:
                mask[i, op.target] = math.pi
        picked = mask[rng.integers(len(patterns), size=n_trials)]
        for q in range(width):
            state = apply_phase(state, q, 0.0, picked[:, q])
        return state
    a, b = model.qubits
    return apply_controlled_phase(state, a, b, model.phi)


def expected_cos(sigma: float, distribution: str = "gauss") -> float:
    """E[cos phi] for the zero-mean phase distribution of strength sigma."""
    if sigma < 0:
        raise InvalidArgumentError(f"sigma must be >= 0, got {sigma}")
    if distribution == "gauss":
        return math.exp(-sigma * sigma / 2)
    if distribution == "uniform":
        return 1.0 if sigma == 0 else math.sin(sigma) / sigma
    raise InvalidArgumentError(f"unknown distribution {distribution!r}")


def unencoded_mean_fidelity(sigma: float, distribution: str, data) -> float:
    """Mean fidelity of a bare qubit whose relative phase is randomised.

    |<psi| D(0, phi) |psi>|^2 = 1 - 2|a|^2|b|^2 (1 - cos phi), averaged over phi.
    """
    alpha, beta = data
    p0, p1 = abs(alpha) ** 2, abs(beta) ** 2
    return 1.0 - 2.0 * p0 * p1 * (1.0 - expected_cos(sigma, distribution))


def with_sigma(model: DephasingModel, sigma: float) -> DephasingModel:
    if isinstance(model, (IID, SingleRandomQubit)):
        return replace(model, sigma=float(sigma))
    return model


def restrict_to_single_qubit(model: DephasingModel) -> DephasingModel | None:
    """The same noise acting on a lone unencoded qubit; None when nothing is left."""
    if isinstance(model, (IID, SingleRandomQubit)):
        return replace(model, qubits=(0,))
    if isinstance(model, FixedPhases):
        kept = tuple(e for e in model.entries if e[0] == 0)
        return FixedPhases(kept) if kept else None
    if isinstance(model, PauliZEnumeration):
        return PauliZEnumeration(min(model.max_weight, 1))
    return None


# -- mini-syntax -----------------------------------------------------------

def _split_kv(body: str) -> tuple[list[str], dict[str, list[str]]]:
    """``gauss,sigma=0.1,q=1,2`` -> (['gauss'], {'sigma': ['0.1'], 'q': ['1', '2']})."""
    flags: list[str] = []
    kv: dict[str, list[str]] = {}
    current = None
    for tok in filter(None, (t.strip() for t in body.split(","))):
        if "=" in tok:
            key, value = tok.split("=", 1)
            current = key.strip().lower()
            kv[current] = [value.strip()]
        elif current is not None:
            kv[current].append(tok)
        else:
            flags.append(tok.lower())
    return flags, kv


def _one(kv, key, default=None):
    if key not in kv:
        if default is None:
            raise InvalidArgumentError(f"missing '{key}='")
        return default
    if len(kv[key]) != 1:
        raise InvalidArgumentError(f"'{key}' takes one value")
    return kv[key][0]


def parse_model(text: str) -> DephasingModel:
    """Parse ``fixed:``, ``iid:``, ``single:``, ``enum:`` or ``corr:`` specs."""
    mode, _, body = text.strip().partition(":")
    mode = mode.lower()
    try:
        if mode == "fixed":
            entries = []
            for chunk in filter(None, body.split(";")):
                _, kv = _split_kv(chunk)
                entries.append((
                    int(_one(kv, "q")),
                    parse_phase(_one(kv, "phi0", "0")),
                    parse_phase(_one(kv, "phi1")),
                ))
            if not entries:
                raise InvalidArgumentError("fixed model needs at least one q=..,phi1=.. entry")
            return FixedPhases(tuple(entries))
        if mode in ("iid", "single"):
            flags, kv = _split_kv(body)
            dist = flags[0] if flags else "gauss"
            if dist not in DISTRIBUTIONS or len(flags) > 1:
                raise InvalidArgumentError(f"unknown distribution in {text!r}")
            sigma = float(_one(kv, "sigma", "0"))
            qubits = tuple(int(q) for q in kv["q"]) if "q" in kv else None
            cls = IID if mode == "iid" else SingleRandomQubit
            model = cls(sigma, dist, qubits)
            if sigma < 0:
                raise InvalidArgumentError("sigma must be >= 0")
            return model
        if mode == "enum":
            _, kv = _split_kv(body)
            return PauliZEnumeration(int(_one(kv, "w")))
        if mode == "corr":
            _, kv = _split_kv(body)
            qs = kv.get("q", [])
            if len(qs) != 2:
                raise InvalidArgumentError("corr model needs q=<a>,<b>")
            return Correlated((int(qs[0]), int(qs[1])), parse_phase(_one(kv, "phi")))
    except ValueError as exc:
        if isinstance(exc, InvalidArgumentError):
            raise
        raise InvalidArgumentError(f"bad model spec {text!r}: {exc}") from None
    raise InvalidArgumentError(f"unknown noise mode {mode!r} in {text!r}")
