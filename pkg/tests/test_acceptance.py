"""Exit criteria, one test per criterion.

Each test prints a single ``[criterion N] PASS|FAIL ...`` line to the terminal
(even without ``-s``) before asserting.
"""

import itertools
import math
import re
import time

import numpy as np
import pytest

from dephasecode.circuit import cphase, dephase, eval_classical, parse_circuit, run_quantum, serialize_circuit
from dephasecode.cli import main
from dephasecode.codes import CodeSpec, classical_repetition, multi_block_encode, quantum_dephasing_code
from dephasecode.experiments import GENERIC_INPUT, loglog_slope, run_sweep, summarize, monte_carlo_fidelities
from dephasecode.gates import conjugate_dephase_identity
from dephasecode.noise import IID, enumerate_pauli_z
from dephasecode.statevector import embed_state, fidelity_with, init_state, purity, reduced_density

from oracle import U_REF
from strategies import random_states

S2 = 1 / math.sqrt(2)
PLUS = (S2, S2)
X = np.array([[0, 1], [1, 0]])


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'} {detail}")
    return emit


def decoded(t, error, data):
    encode, decode = quantum_dephasing_code(t)
    out = run_quantum(decode, run_quantum(error, run_quantum(encode, init_state(2 * t + 1, data))))
    return reduced_density(out, 0)


def test_c1_conversion_identity(report):
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for p0, p1 in rng.uniform(0, 2 * np.pi, size=(1000, 2)):
        a, b = np.exp(1j * p0), np.exp(1j * p1)
        closed = 0.5 * ((b + a) * np.eye(2) + (b - a) * X)
        worst = max(worst, np.linalg.norm(conjugate_dephase_identity(p0, p1) - closed, 2))
    flip = np.abs(conjugate_dephase_identity(0.0, math.pi) + X).max()
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and flip < 1e-15 and elapsed < 1.0
    report(1, ok, f"max dev {worst:.2e}, |(0,pi) + X| {flip:.2e}, {elapsed:.3f}s")
    assert ok


def test_c2_classical_oracle(report):
    start = time.perf_counter()
    results = {}
    for t in (1, 2):
        encode, decode = classical_repetition(t)
        n = 2 * t + 1
        good = total = 0
        for psi in (0, 1):
            for flips in (c for w in range(t + 1) for c in itertools.combinations(range(n), w)):
                word = list(eval_classical(encode, (psi,) + (0,) * (n - 1)))
                for q in flips:
                    word[q] ^= 1
                good += eval_classical(decode, word)[0] == psi
                total += 1
        results[t] = (good, total)
    elapsed = time.perf_counter() - start
    ok = results == {1: (8, 8), 2: (32, 32)} and elapsed < 1.0
    report(2, ok, f"t=1 {results[1][0]}/{results[1][1]}, t=2 {results[2][0]}/{results[2][1]}, {elapsed:.3f}s")
    assert ok


def test_c3_exact_single_dephasing(report):
    start = time.perf_counter()
    states = random_states(np.random.default_rng(3), 100)
    encode, decode = quantum_dephasing_code(1)
    encoded = run_quantum(encode, embed_state(3, states, [0]))
    min_fid = min_pur = 1.0
    cases = 0
    for q in range(3):
        for phi in 2 * np.pi * np.arange(20) / 20:
            rho = reduced_density(run_quantum(decode, run_quantum([dephase(q, 0.0, phi)], encoded)), 0)
            min_fid = min(min_fid, float(np.min(fidelity_with(rho, states))))
            min_pur = min(min_pur, float(np.min(purity(rho))))
            cases += len(states)
    elapsed = time.perf_counter() - start
    ok = cases == 6000 and min_fid >= 1 - 1e-10 and min_pur >= 1 - 1e-10 and elapsed < 5
    report(3, ok, f"{cases} cases, min fidelity {min_fid:.15f}, min purity {min_pur:.15f}, {elapsed:.2f}s")
    assert ok


def test_c4_exact_two_dephasing(report):
    start = time.perf_counter()
    states = random_states(np.random.default_rng(4), 100)
    encode, decode = quantum_dephasing_code(2)
    encoded = run_quantum(encode, embed_state(5, states, [0]))
    patterns = enumerate_pauli_z(5, 2)
    min_fid = 1.0
    for err in patterns:
        rho = reduced_density(run_quantum(decode, run_quantum(err, encoded)), 0)
        min_fid = min(min_fid, float(np.min(fidelity_with(rho, states))))
    elapsed = time.perf_counter() - start
    ok = len(patterns) == 16 and min_fid >= 1 - 1e-10 and elapsed < 10
    report(4, ok, f"{len(patterns)} patterns x 100 inputs, min fidelity {min_fid:.15f}, {elapsed:.2f}s")
    assert ok


def test_c5_design_distance_failure(report, capsys):
    status = main(["verify", "--t", "1", "--weight", "2"])
    out = capsys.readouterr().out
    witness = [
        dephase(int(m[1]), float(m[2]), float(m[3]))
        for m in re.finditer(r"^\s+dephase (\d+) (\S+) (\S+)$", out, re.M)
    ]
    plus_fid = fidelity_with(decoded(1, witness, PLUS), PLUS) if witness else float("nan")
    zero_fid = fidelity_with(decoded(1, witness, (1.0, 0.0)), (1.0, 0.0)) if witness else float("nan")
    ok = status == 1 and len(witness) == 2 and plus_fid < 1 - 1e-3
    report(5, ok, f"exit {status}, witness {[op.to_text() for op in witness]}, "
                  f"|+> fidelity {plus_fid:.15f} (|0> fidelity {zero_fid:.3g})")
    assert ok


def test_c6_correlated_dephasing_failure(report):
    fid = fidelity_with(decoded(1, [cphase(1, 2, math.pi)], PLUS), PLUS)
    # a drop must exceed the 1e-10 end-to-end tolerance to count as a failure of correction
    ok = fid < 1 - 1e-10
    report(6, ok, f"cphase(pi) on qubits 1,2, input |+>: fidelity {fid!r}")
    assert ok


def test_c7_unencoded_baseline(report):
    rows = []
    ok = True
    for i, sigma in enumerate((0.1, 0.3, 0.5)):
        fids = monte_carlo_fidelities(None, IID(sigma), 10_000, seed=7, stream=(i,), data=PLUS)
        mean, _, se = summarize(fids)
        expected = (1 + math.exp(-sigma ** 2 / 2)) / 2
        z = abs(mean - expected) / se
        ok &= z < 3
        rows.append(f"sigma={sigma}: {z:.2f} SE")
    report(7, ok, "; ".join(rows))
    assert ok


def test_c8_scaling_law(report):
    start = time.perf_counter()
    sigmas = np.geomspace(0.05, 0.4, 6)
    records = run_sweep([CodeSpec(1)], IID(0.1), sigmas, 100_000, seed=8, data=GENERIC_INPUT)
    bare = [1 - r.mean_fidelity for r in records if r.code == "unencoded"]
    coded = [1 - r.mean_fidelity for r in records if r.code == "rep3"]
    s_bare, s_coded = loglog_slope(sigmas, bare), loglog_slope(sigmas, coded)
    elapsed = time.perf_counter() - start
    ok = abs(s_bare - 2.0) <= 0.2 and abs(s_coded - 4.0) <= 0.3 and elapsed < 120
    report(8, ok, f"unencoded slope {s_bare:.3f}, t=1 slope {s_coded:.3f}, {elapsed:.1f}s")
    assert ok


def test_c9_multi_block_bell(report):
    bell = np.array([S2, 0, 0, S2])
    encode, decode = multi_block_encode(CodeSpec(1, 2))
    encoded = run_quantum(encode, embed_state(6, bell, [0, 3]))
    rng = np.random.default_rng(9)
    min_fid = 1.0
    for qa in range(3):
        for qb in range(3, 6):
            for p in rng.uniform(0, 2 * np.pi, size=(10, 2)):
                err = [dephase(qa, 0.0, p[0]), dephase(qb, 0.0, p[1])]
                rho = reduced_density(run_quantum(decode, run_quantum(err, encoded)), [0, 3])
                min_fid = min(min_fid, fidelity_with(rho, bell))
    ok = min_fid >= 1 - 1e-10
    report(9, ok, f"min joint fidelity {min_fid:.15f}")
    assert ok


def test_c10_round_trips(report, tmp_path, capsys):
    n_files = 0
    stable = True
    for t, k in itertools.product((1, 2, 3), (1, 2)):
        sub = tmp_path / f"t{t}k{k}"
        assert main(["emit", "--t", str(t), "--k", str(k), "--out", str(sub)]) == 0
        for path in sub.glob("*.circ"):
            text = path.read_text()
            once = parse_circuit(text)
            stable &= serialize_circuit(once) == text and parse_circuit(serialize_circuit(once)) == once
            stable &= once in multi_block_encode(CodeSpec(t, k))
            n_files += 1
    capsys.readouterr()
    a, b = 0.6, 0.8j
    status = main(["run", str(tmp_path / "t1k1" / "rep3_encode.circ"), "--alpha", "0.6,0", "--beta", "0,0.8"])
    out = capsys.readouterr().out
    rows = [line.split() for line in out.splitlines() if re.match(r"^\d", line)]
    amps = np.array([float(r[2]) + 1j * float(r[3]) for r in rows])
    codeword = np.zeros(8, dtype=complex)
    codeword[0], codeword[7] = a, b
    dev = np.abs(amps - np.kron(np.kron(U_REF, U_REF), U_REF) @ codeword).max()
    ok = stable and n_files == 12 and status == 0 and dev < 1e-12
    report(10, ok, f"{n_files} files round-trip {'ok' if stable else 'BROKEN'}, run deviation {dev:.2e}")
    assert ok
