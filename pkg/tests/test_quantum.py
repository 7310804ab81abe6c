import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from whichway.quantum import (
    Basis2,
    I2,
    I4,
    SIGMA_X,
    apply,
    check_density_matrix,
    check_state,
    check_unitary,
    density_matrix,
    partial_trace,
    phase_aligned_fidelity,
    tensor,
    von_neumann_entropy,
)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

KET_00 = np.array([1, 0, 0, 0], dtype=complex)
KET_10 = np.array([0, 0, 1, 0], dtype=complex)


def random_pure_states(seed=0, count=50):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        yield psi / np.linalg.norm(psi)


def test_tensor_identity():
    assert np.allclose(tensor(I2, I2), I4)


def test_tensor_acts_on_observed_spin_only():
    # bit flip on B: |00> -> |10>
    assert np.allclose(apply(tensor(SIGMA_X, I2), KET_00), KET_10)


def test_tensor_hadamard_on_b():
    expected = (KET_00 + KET_10) / math.sqrt(2)
    assert np.allclose(apply(tensor(HADAMARD, I2), KET_00), expected)


def test_apply_identity():
    psi = next(iter(random_pure_states(seed=1, count=1)))
    assert np.allclose(apply(I4, psi), psi)


def test_apply_involution():
    assert np.allclose(apply(tensor(SIGMA_X, I2), KET_10), KET_00)


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(I2, KET_00)


def test_full_constructive_interference_at_zero_phase():
    # merge operator at phase 0, identical markers: all population on path 0
    u2_zero = np.array([[1, 1], [-1, 1]], dtype=complex) / math.sqrt(2)
    psi = (KET_00 + KET_10) / math.sqrt(2)
    out = apply(tensor(u2_zero, I2), psi)
    population_path0 = abs(out[0]) ** 2 + abs(out[1]) ** 2
    assert abs(population_path0 - 1.0) < 1e-12


def test_partial_trace_product_state():
    rho = density_matrix(KET_00)
    reduced = partial_trace(rho, keep="B")
    assert np.allclose(reduced, np.array([[1, 0], [0, 0]]))


def test_partial_trace_maximally_entangled():
    bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    reduced = partial_trace(density_matrix(bell), keep="B")
    assert np.allclose(reduced, I2 / 2, atol=1e-12)


def test_partial_trace_partial_entanglement_eigenvalues():
    # marker angle pi/3: reduced eigenvalues are (1 -/+ cos(pi/3)) / 2
    phi = math.pi / 3
    psi = np.array([1, 0, math.cos(phi), math.sin(phi)], dtype=complex) / math.sqrt(2)
    reduced = partial_trace(density_matrix(psi), keep="B")
    eigs = np.linalg.eigvalsh(reduced)
    assert np.allclose(sorted(eigs), [0.25, 0.75], atol=1e-12)


def test_partial_trace_bad_subsystem():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, keep="C")


def test_entropy_pure_state():
    assert von_neumann_entropy(np.array([[1, 0], [0, 0]])) == 0.0


def test_entropy_maximally_mixed():
    assert abs(von_neumann_entropy(I2 / 2) - 1.0) < 1e-12


def test_entropy_frozen_value():
    # independent arithmetic: -(0.25 log2 0.25 + 0.75 log2 0.75)
    rho = np.diag([0.25, 0.75]).astype(complex)
    assert abs(von_neumann_entropy(rho) - 0.8112781244591328) < 1e-12


def test_phase_aligned_fidelity_trivials():
    psi = next(iter(random_pure_states(seed=2, count=1)))
    assert abs(phase_aligned_fidelity(psi, psi) - 1.0) < 1e-12
    assert abs(phase_aligned_fidelity(psi, np.exp(0.37j) * psi) - 1.0) < 1e-12
    assert phase_aligned_fidelity(KET_00, KET_10) == 0.0


def test_phase_aligned_fidelity_dimension_mismatch():
    with pytest.raises(ValueError):
        phase_aligned_fidelity(KET_00, np.array([1.0, 0.0]))


@given(st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
def test_phase_aligned_fidelity_symmetric_and_phase_invariant(alpha, beta):
    rng = np.random.default_rng(11)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    chi = rng.normal(size=4) + 1j * rng.normal(size=4)
    chi /= np.linalg.norm(chi)
    f = phase_aligned_fidelity(psi, chi)
    assert abs(phase_aligned_fidelity(chi, psi) - f) < 1e-12
    assert abs(phase_aligned_fidelity(np.exp(1j * alpha) * psi, np.exp(1j * beta) * chi) - f) < 1e-12


def test_reduced_states_are_valid_density_matrices():
    for psi in random_pure_states(seed=3):
        rho = density_matrix(psi)
        for keep in ("A", "B"):
            reduced = partial_trace(rho, keep)
            check_density_matrix(reduced)


def test_reduced_entropies_agree_for_pure_states():
    for psi in random_pure_states(seed=4):
        rho = density_matrix(psi)
        s_a = von_neumann_entropy(partial_trace(rho, "A"))
        s_b = von_neumann_entropy(partial_trace(rho, "B"))
        assert abs(s_a - s_b) < 1e-10


def test_partial_trace_of_mixed_states():
    rng = np.random.default_rng(5)
    for _ in range(20):
        weights = rng.dirichlet(np.ones(3))
        rho = np.zeros((4, 4), dtype=complex)
        for w in weights:
            psi = rng.normal(size=4) + 1j * rng.normal(size=4)
            psi /= np.linalg.norm(psi)
            rho += w * density_matrix(psi)
        for keep in ("A", "B"):
            reduced = check_density_matrix(partial_trace(rho, keep))
            assert abs(np.trace(reduced).real - 1.0) < 1e-12


def test_validators_reject_bad_inputs():
    with pytest.raises(ValueError):
        check_state(np.array([1.0, 1.0], dtype=complex))
    with pytest.raises(ValueError):
        check_unitary(np.array([[1, 1], [0, 1]], dtype=complex))
    with pytest.raises(ValueError):
        check_density_matrix(np.diag([0.8, 0.8]).astype(complex))
    with pytest.raises(ValueError):
        check_density_matrix(np.diag([1.5, -0.5]).astype(complex))


@given(st.floats(-10, 10, allow_nan=False))
def test_basis2_orthonormal(angle):
    basis = Basis2(angle)
    assert abs(np.vdot(basis.plus, basis.minus)) < 1e-12
    assert abs(np.vdot(basis.plus, basis.plus) - 1.0) < 1e-12
    assert abs(np.vdot(basis.minus, basis.minus) - 1.0) < 1e-12
