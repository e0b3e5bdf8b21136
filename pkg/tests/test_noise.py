import math

import numpy as np
import pytest
from scipy import integrate

from dephasecode.circuit import cphase, dephase, run_quantum
from dephasecode.errors import InvalidArgumentError
from dephasecode.gates import GateKind
from dephasecode.noise import (
    IID,
    Correlated,
    FixedPhases,
    PauliZEnumeration,
    SingleRandomQubit,
    apply_error_batch,
    enumerate_pauli_z,
    parse_model,
    restrict_to_single_qubit,
    sample_error,
    trial_rng,
    unencoded_mean_fidelity,
    with_sigma,
)
from dephasecode.statevector import QuantumState, init_state

S2 = 1 / math.sqrt(2)


class TestSampleError:
    def test_fixed_pass_through(self):
        ops = sample_error(FixedPhases(((1, 0.0, math.pi),)), 3, trial_rng(0))
        assert ops == [dephase(1, 0.0, math.pi)]

    def test_iid_zero_strength(self):
        ops = sample_error(IID(0.0), 5, trial_rng(3))
        assert [op.target for op in ops] == list(range(5))
        assert all(op.params == (0.0, 0.0) for op in ops)

    def test_single_qubit_frequencies(self):
        rng = trial_rng(11)
        counts = np.zeros(3)
        for _ in range(10_000):
            (op,) = sample_error(SingleRandomQubit(0.1), 3, rng)
            counts[op.target] += 1
        np.testing.assert_allclose(counts / 10_000, 1 / 3, atol=0.02)

    def test_correlated(self):
        assert sample_error(Correlated((0, 2), 1.0), 3, trial_rng(0)) == [cphase(0, 2, 1.0)]

    def test_enum_draws_a_pattern(self):
        ops = sample_error(PauliZEnumeration(2), 5, trial_rng(0))
        assert ops in enumerate_pauli_z(5, 2)

    def test_only_phase_ops(self):
        rng = trial_rng(5)
        for model in (IID(0.3), SingleRandomQubit(0.3, "uniform"), PauliZEnumeration(1),
                      Correlated((0, 1), 0.2), FixedPhases(((0, 0.1, 0.2),))):
            for op in sample_error(model, 3, rng):
                assert op.kind in (GateKind.DEPHASE, GateKind.CPHASE)

    @pytest.mark.parametrize("model", [IID(0.2), SingleRandomQubit(0.2), PauliZEnumeration(2),
                                       IID(0.2, "uniform")])
    def test_reproducible(self, model):
        a = [sample_error(model, 5, trial_rng(42, i)) for i in range(20)]
        b = [sample_error(model, 5, trial_rng(42, i)) for i in range(20)]
        assert a == b
        c = [sample_error(model, 5, trial_rng(43, i)) for i in range(20)]
        assert a != c

    @pytest.mark.parametrize("model,width", [
        (IID(-0.1), 3),
        (IID(0.1, "cauchy"), 3),
        (IID(0.1, qubits=(3,)), 3),
        (PauliZEnumeration(4), 3),
        (Correlated((1, 1), 0.5), 3),
        (FixedPhases(((0, 0.0, math.inf),)), 3),
    ])
    def test_invalid(self, model, width):
        with pytest.raises(InvalidArgumentError):
            sample_error(model, width, trial_rng(0))


class TestEnumeration:
    @pytest.mark.parametrize("n,w", [(3, 1), (5, 2), (4, 0), (6, 3), (5, 5)])
    def test_counts(self, n, w):
        assert len(enumerate_pauli_z(n, w)) == sum(math.comb(n, j) for j in range(w + 1))

    def test_width3_weight1(self):
        patterns = enumerate_pauli_z(3, 1)
        assert patterns[0] == []
        assert [p[0].target for p in patterns[1:]] == [0, 1, 2]
        assert all(p[0].params == (0.0, math.pi) for p in patterns[1:])

    def test_distinct(self):
        patterns = enumerate_pauli_z(5, 2)
        keys = {tuple(op.target for op in p) for p in patterns}
        assert len(keys) == len(patterns)


class TestUnencodedBaseline:
    def test_zero_strength(self):
        assert unencoded_mean_fidelity(0.0, "gauss", (S2, S2)) == 1.0

    def test_basis_state_immune(self):
        assert unencoded_mean_fidelity(0.7, "gauss", (1.0, 0.0)) == 1.0

    @pytest.mark.parametrize("sigma", [0.1, 0.3, 0.5, 1.2])
    def test_plus_gaussian_against_quadrature(self, sigma):
        def integrand(phi):
            density = math.exp(-phi * phi / (2 * sigma * sigma)) / (sigma * math.sqrt(2 * math.pi))
            return math.cos(phi / 2) ** 2 * density

        expected, _ = integrate.quad(integrand, -12 * sigma, 12 * sigma)
        got = unencoded_mean_fidelity(sigma, "gauss", (S2, S2))
        assert got == pytest.approx(expected, abs=1e-12)
        assert got == pytest.approx((1 + math.exp(-sigma ** 2 / 2)) / 2, abs=1e-15)

    @pytest.mark.parametrize("sigma", [0.1, 0.8, 2.0])
    def test_uniform_against_quadrature(self, sigma):
        a, b = 0.6, 0.8j
        expected, _ = integrate.quad(
            lambda phi: abs(abs(a) ** 2 + abs(b) ** 2 * np.exp(1j * phi)) ** 2 / (2 * sigma), -sigma, sigma)
        assert unencoded_mean_fidelity(sigma, "uniform", (a, b)) == pytest.approx(expected, abs=1e-12)

    def test_monte_carlo_uniform(self):
        sigma, n = 0.6, 10_000
        rng = trial_rng(9)
        batch = QuantumState(1, np.tile([S2, S2], (n, 1)))
        out = apply_error_batch(batch, IID(sigma, "uniform"), rng)
        fids = np.abs(out.amplitudes @ np.array([S2, S2])) ** 2
        se = fids.std(ddof=1) / math.sqrt(n)
        assert abs(fids.mean() - unencoded_mean_fidelity(sigma, "uniform", (S2, S2))) < 3 * se


class TestBatch:
    def test_fixed_matches_ops(self):
        model = FixedPhases(((0, 0.2, 1.0), (2, -0.4, 0.3)))
        st = init_state(3, (0.6, 0.8))
        batch = QuantumState(3, np.tile(st.amplitudes, (4, 1)))
        out = apply_error_batch(batch, model, trial_rng(0))
        single = run_quantum(sample_error(model, 3, trial_rng(0)), st)
        for row in out.amplitudes:
            np.testing.assert_allclose(row, single.amplitudes, atol=1e-15)

    def test_single_random_touches_one_qubit(self):
        n = 200
        batch = QuantumState(3, np.full((n, 8), 1 / math.sqrt(8), dtype=complex))
        out = apply_error_batch(batch, SingleRandomQubit(1.0), trial_rng(1))
        phases = np.angle(out.amplitudes * math.sqrt(8))
        for row in phases:
            touched = [q for q in range(3) if abs(row[1 << q]) > 1e-12]
            assert len(touched) <= 1

    def test_enum_batch_patterns(self):
        batch = QuantumState(3, np.full((500, 8), 1 / math.sqrt(8), dtype=complex))
        out = apply_error_batch(batch, PauliZEnumeration(1), trial_rng(2))
        signs = np.round((out.amplitudes * math.sqrt(8)).real).astype(int)
        flipped = [(signs[:, 1 << q] == -1) for q in range(3)]
        weight = sum(f.astype(int) for f in flipped)
        assert weight.max() <= 1
        assert all(f.any() for f in flipped) and (weight == 0).any()


class TestModelSyntax:
    def test_fixed(self):
        assert parse_model("fixed:q=1,phi0=0,phi1=3.14159") == FixedPhases(((1, 0.0, 3.14159),))

    def test_fixed_multiple_and_pi(self):
        m = parse_model("fixed:q=1,phi1=pi;q=2,phi0=0.1,phi1=-pi/2")
        assert m == FixedPhases(((1, 0.0, math.pi), (2, 0.1, -math.pi / 2)))

    def test_iid(self):
        assert parse_model("iid:gauss,sigma=0.1") == IID(0.1, "gauss")
        assert parse_model("iid:uniform,sigma=0.2,q=0,2") == IID(0.2, "uniform", (0, 2))

    def test_single(self):
        assert parse_model("single:gauss,sigma=0.1") == SingleRandomQubit(0.1, "gauss")

    def test_enum(self):
        assert parse_model("enum:w=2") == PauliZEnumeration(2)

    def test_corr(self):
        assert parse_model("corr:q=1,2,phi=3.14159") == Correlated((1, 2), 3.14159)
        assert parse_model("corr:q=0,1,phi=pi").phi == math.pi

    @pytest.mark.parametrize("text", ["bogus:x=1", "iid:cauchy,sigma=1", "iid:gauss,sigma=-1",
                                      "corr:q=1,phi=1", "enum:", "fixed:", "fixed:q=a,phi1=1",
                                      "iid:gauss,sigma=abc"])
    def test_rejects(self, text):
        with pytest.raises(InvalidArgumentError):
            parse_model(text)

    def test_helpers(self):
        assert with_sigma(IID(0.1), 0.5) == IID(0.5)
        assert with_sigma(PauliZEnumeration(1), 0.5) == PauliZEnumeration(1)
        assert restrict_to_single_qubit(IID(0.1)) == IID(0.1, qubits=(0,))
        assert restrict_to_single_qubit(Correlated((0, 1), 1.0)) is None
        assert restrict_to_single_qubit(FixedPhases(((1, 0.0, 1.0),))) is None
        assert restrict_to_single_qubit(PauliZEnumeration(2)) == PauliZEnumeration(1)
