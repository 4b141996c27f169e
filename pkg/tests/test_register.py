import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zenokit import (
    ConstantOverlap,
    DensityMatrix2,
    QubitRegister,
    ValidationError,
    apply_cnot,
    make_rabi_unitary,
    partial_trace_to_system,
    propagate_projected,
    recoherence_demo,
)
from zenokit.register import make_register


def basis_state(k, index):
    amps = np.zeros(2**k, dtype=complex)
    amps[index] = 1.0
    return QubitRegister(k=k, amplitudes=amps)


class TestCnot:
    def test_truth_table(self):
        # qubit 0 controls qubit 1; index = q0 + 2*q1
        assert np.argmax(np.abs(apply_cnot(basis_state(2, 1), 0, 1).amplitudes)) == 3
        assert np.argmax(np.abs(apply_cnot(basis_state(2, 0), 0, 1).amplitudes)) == 0
        assert np.argmax(np.abs(apply_cnot(basis_state(2, 3), 0, 1).amplitudes)) == 1

    def test_entangles_superposition_into_bell_state(self):
        plus = make_register([1 / math.sqrt(2), 1 / math.sqrt(2), 0, 0])
        bell = apply_cnot(plus, 0, 1)
        expected = np.array([1, 0, 0, 1]) / math.sqrt(2)
        assert np.allclose(bell.amplitudes, expected, atol=1e-15)

    def test_norm_preserved(self):
        rng = np.random.default_rng(3)
        amps = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        amps /= np.linalg.norm(amps)
        out = apply_cnot(make_register(amps), 2, 0)
        assert abs(np.sum(np.abs(out.amplitudes) ** 2) - 1.0) <= 1e-12

    def test_index_validation(self):
        state = basis_state(2, 0)
        with pytest.raises(ValidationError):
            apply_cnot(state, 0, 0)
        with pytest.raises(ValidationError):
            apply_cnot(state, 0, 2)


class TestPartialTrace:
    def test_bell_state_marginal_is_maximally_mixed(self):
        bell = make_register(np.array([1, 0, 0, 1]) / math.sqrt(2))
        rho = partial_trace_to_system(bell, 0)
        assert np.allclose(rho.matrix, np.eye(2) / 2, atol=1e-15)

    def test_product_state_marginal_is_pure(self):
        alpha, beta = 0.6, 0.8j
        env = np.array([0.3 + 0.1j, 0.5, 0.2 - 0.4j, 0.1])
        env /= np.linalg.norm(env)
        joint = np.zeros(8, dtype=complex)
        for e in range(4):
            joint[0 + 2 * e] = alpha * env[e]
            joint[1 + 2 * e] = beta * env[e]
        rho = partial_trace_to_system(make_register(joint), 0)
        assert rho.rho_01 == pytest.approx(alpha * np.conj(beta), abs=1e-12)
        assert np.trace(rho.matrix @ rho.matrix).real == pytest.approx(1.0, abs=1e-12)

    def test_needs_two_qubits(self):
        with pytest.raises(ValidationError):
            partial_trace_to_system(basis_state(1, 0), 0)

    @given(st.integers(0, 2**31 - 1))
    def test_output_is_valid_density_matrix(self, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(2, 5))
        amps = rng.standard_normal(2**k) + 1j * rng.standard_normal(2**k)
        amps /= np.linalg.norm(amps)
        q = int(rng.integers(0, k))
        rho = partial_trace_to_system(make_register(amps), q)
        # DensityMatrix2 construction already enforces Hermitian/trace/PSD
        assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-12)


class TestDensityMatrix2:
    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            DensityMatrix2(matrix=np.array([[0.5, 0.1], [0.3, 0.5]]) + 0j)

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValidationError):
            DensityMatrix2(matrix=np.array([[0.9, 0.0], [0.0, 0.9]]) + 0j)

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValidationError):
            DensityMatrix2(matrix=np.array([[1.2, 0.0], [0.0, -0.2]]) + 0j)


class TestRecoherence:
    def test_three_stages(self):
        stages = recoherence_demo()
        labels = [label for label, _, _ in stages]
        assert labels == ["initial", "after_cnot_env1", "after_cnot_env2"]

    def test_initial_coherence(self):
        _, rho, coherence = recoherence_demo()[0]
        assert coherence == pytest.approx(0.5, abs=1e-12)

    def test_first_cnot_fully_decoheres(self):
        _, rho, coherence = recoherence_demo()[1]
        assert np.abs(rho.matrix - np.eye(2) / 2).max() <= 1e-12
        assert coherence <= 1e-12

    def test_second_cnot_revives_coherence(self):
        _, rho, coherence = recoherence_demo()[2]
        assert np.abs(rho.matrix - np.full((2, 2), 0.5)).max() <= 1e-12
        assert coherence == pytest.approx(0.5, abs=1e-12)


class TestConsistencyWithProjectedChain:
    @pytest.mark.parametrize("eta", [0.0, 0.25, 0.7, 1.0])
    def test_single_step_matches_register_simulation(self, eta):
        # free step on the system, then a fresh environment qubit records
        # the state with overlap eta: |E_0> = (1, 0), |E_1> = (eta, sqrt(1-eta^2))
        u = make_rabi_unitary(1.0, 0.3)
        joint = np.zeros(4, dtype=complex)
        e0 = np.array([1.0, 0.0])
        e1 = np.array([eta, math.sqrt(1 - eta**2)])
        for e in (0, 1):
            joint[0 + 2 * e] += u.c_eq_0 * e0[e]
            joint[1 + 2 * e] += u.c_neq_1 * e1[e]
        # project onto <0, E_0|
        amp = joint[0] * np.conj(e0[0]) + joint[2] * np.conj(e0[1])
        p_register = abs(amp) ** 2
        p_chain = propagate_projected(u, ConstantOverlap(eta=eta), 1).p_exact
        assert abs(p_register - p_chain) <= 1e-12
