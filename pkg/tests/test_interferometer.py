import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from whichway.interferometer import MarkerPair, PhaseSetting, population, psi1, psi2, u2

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False, allow_infinity=False)


def closed_form_output(markers, phase):
    # direct expansion of the merged state:
    # (|0>(m+ + e^{i phase} m-) + |1>(m- - e^{-i phase} m+)) / 2
    m_plus, m_minus = markers.plus_state, markers.minus_state
    out = np.empty(4, dtype=complex)
    out[0:2] = m_plus + np.exp(1j * phase.phase) * m_minus
    out[2:4] = m_minus - np.exp(-1j * phase.phase) * m_plus
    return out / 2.0


def test_psi1_identical_markers():
    expected = np.array([1, 0, 1, 0]) / math.sqrt(2)
    assert np.allclose(psi1(MarkerPair(0.0, 0.0)), expected)


def test_psi1_orthogonal_markers():
    expected = np.array([1, 0, 0, 1]) / math.sqrt(2)
    assert np.allclose(psi1(MarkerPair(0.0, math.pi / 2)), expected, atol=1e-15)


def test_psi1_hand_expanded_amplitudes():
    state = psi1(MarkerPair(math.pi / 2, 3 * math.pi / 4))
    expected = np.array([0.0, 1 / math.sqrt(2), -0.5, 0.5])
    assert np.allclose(state, expected, atol=1e-15)


def test_u2_at_zero_phase():
    expected = np.array([[1, 1], [-1, 1]]) / math.sqrt(2)
    assert np.allclose(u2(PhaseSetting(0.0)), expected)


def test_u2_at_quarter_turn():
    expected = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
    assert np.allclose(u2(PhaseSetting(math.pi / 2)), expected, atol=1e-15)


@given(angles)
def test_u2_unitary(phase):
    u = u2(PhaseSetting(phase))
    assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-12


def test_psi2_identical_markers_constructive():
    out = psi2(MarkerPair(0.3, 0.3), PhaseSetting(0.0))
    # all population on path 0, marker state intact
    assert abs(out[0]) ** 2 + abs(out[1]) ** 2 == pytest.approx(1.0, abs=1e-12)
    assert abs(out[2]) < 1e-12 and abs(out[3]) < 1e-12


def test_psi2_identical_markers_destructive():
    out = psi2(MarkerPair(0.3, 0.3), PhaseSetting(math.pi))
    assert abs(out[2]) ** 2 + abs(out[3]) ** 2 == pytest.approx(1.0, abs=1e-12)


@given(angles)
def test_psi2_orthogonal_markers_balanced(phase):
    out = psi2(MarkerPair(0.0, math.pi / 2), PhaseSetting(phase))
    assert abs(out[0]) ** 2 + abs(out[1]) ** 2 == pytest.approx(0.5, abs=1e-12)


@given(angles, angles, angles)
def test_psi2_matches_closed_form(phi_plus, marker_angle, phase):
    markers = MarkerPair(phi_plus, phi_plus + marker_angle)
    setting = PhaseSetting(phase)
    assert np.max(np.abs(psi2(markers, setting) - closed_form_output(markers, setting))) < 1e-12


def test_population_examples():
    assert population(MarkerPair(0.2, 0.2), PhaseSetting(0.0), 0) == pytest.approx(1.0, abs=1e-12)
    assert population(MarkerPair(0.0, math.pi / 2), PhaseSetting(1.234), 0) == pytest.approx(0.5, abs=1e-12)
    assert population(MarkerPair(0.0, math.pi / 3), PhaseSetting(0.0), 0) == pytest.approx(0.75, abs=1e-12)


def test_population_rejects_bad_path():
    with pytest.raises(ValueError):
        population(MarkerPair(0.0, 0.0), PhaseSetting(0.0), 2)


@given(angles, angles, angles)
def test_populations_sum_to_one(phi_plus, phi_minus, phase):
    markers = MarkerPair(phi_plus, phi_minus)
    setting = PhaseSetting(phase)
    total = population(markers, setting, 0) + population(markers, setting, 1)
    assert abs(total - 1.0) < 1e-12


@given(angles, angles, angles)
def test_population_is_periodic_in_phase(phi_plus, phi_minus, phase):
    markers = MarkerPair(phi_plus, phi_minus)
    assert population(markers, PhaseSetting(phase), 0) == pytest.approx(
        population(markers, PhaseSetting(phase + 2 * math.pi), 0), abs=1e-12
    )


@given(angles, angles, angles, angles)
def test_population_depends_only_on_marker_difference(phi_plus, marker_angle, shift, phase):
    setting = PhaseSetting(phase)
    base = population(MarkerPair(phi_plus, phi_plus + marker_angle), setting, 0)
    shifted = population(MarkerPair(phi_plus + shift, phi_plus + shift + marker_angle), setting, 0)
    assert abs(base - shifted) < 1e-12


def test_population_agrees_with_merged_state():
    rng = np.random.default_rng(9)
    for _ in range(25):
        markers = MarkerPair(*rng.uniform(-4, 4, 2))
        setting = PhaseSetting(rng.uniform(0, 2 * math.pi))
        out = psi2(markers, setting)
        assert population(markers, setting, 0) == pytest.approx(
            abs(out[0]) ** 2 + abs(out[1]) ** 2, abs=1e-12
        )
