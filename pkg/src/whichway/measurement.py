"""Emulation of the measurement procedure and the experimental noise model.

Joint probabilities are measured in two parts: first a rotation of the
marker spin that carries the balanced marker basis onto the
computational basis, then a projective measurement mimicked by a
gradient pulse, i.e. exact truncation of the density matrix to its
diagonal.  Populations are read ensemble-averaged by default; an
optional shot-sampling mode draws a seeded multinomial instead.

The noise model covers RF pulse-angle miscalibration (each rotation
pulse angle is scaled by 1 + eps * u with u uniform in [-1, 1], drawn
per pulse; coupling evolutions are clock-timed delays and stay exact)
and transverse relaxation of both spins during the scalar-coupling
evolution, whose duration is t = phi / (pi * J).  With a fixed
``rng_seed`` every noisy output is bit-identical across runs.  Sweep
points may run concurrently: point i of a sweep derives its own seed
via ``subseed(rng_seed, i, stream)``, which hashes the tuple through
``numpy.random.SeedSequence([rng_seed, i, stream])``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import JointProbs
from .interferometer import MarkerPair, PhaseSetting, psi1, u2
from .pulses import (
    PHASE_MERGE_PROGRAM,
    SPLIT_MARK_PROGRAM,
    Pulse,
    PulseSequence,
    parse,
    pulse_matrix,
    u2_pulse_params,
)
from .quantum import I2, density_matrix, tensor

_SPLIT_MARK = parse(SPLIT_MARK_PROGRAM)
_PHASE_MERGE = parse(PHASE_MERGE_PROGRAM)


@dataclass(frozen=True)
class NoiseModel:
    """RF pulse miscalibration plus transverse relaxation during coupling.

    t2_a is the marker spin (proton) and t2_b the observed spin (carbon);
    j_coupling converts coupling phase to evolution time.  ``shots``
    switches population readout from ensemble-averaged to a seeded
    multinomial sample of that many shots.
    """

    miscalibration_fraction: float = 0.0
    t2_a: float = 3.3
    t2_b: float = 0.35
    j_coupling: float = 214.95
    rng_seed: int = 0
    shots: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.miscalibration_fraction <= 0.2:
            raise ValueError(f"miscalibration_fraction must be in [0, 0.2], got {self.miscalibration_fraction}")
        if not self.t2_a > 0 or not self.t2_b > 0:
            raise ValueError("T2 times must be positive")
        if not self.j_coupling > 0:
            raise ValueError("j_coupling must be positive")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be non-negative")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be a positive count or None")


@dataclass(frozen=True)
class MeasurementRecord:
    """Computational-basis populations reconstructed from one experiment."""

    diagonal: np.ndarray

    def __post_init__(self):
        if self.diagonal.shape != (4,):
            raise ValueError("expected 4 populations")
        if self.diagonal.min() < -1e-9:
            raise ValueError(f"negative population {self.diagonal.min():.3g}")
        if abs(float(self.diagonal.sum()) - 1.0) > 1e-9:
            raise ValueError(f"populations sum to {self.diagonal.sum()}, expected 1")


def subseed(seed: int, *key: int) -> int:
    """Deterministic child seed for sweep point / stream derivation."""
    return int(np.random.SeedSequence([seed, *key]).generate_state(1, dtype=np.uint64)[0])


def marker_rotation(markers: MarkerPair) -> np.ndarray:
    """Rotation carrying the balanced marker basis onto the computational one.

    R = [[cos a, -sin a], [sin a, cos a]] with a = pi/4 - (phi+ + phi-)/2;
    it maps the basis vector beta+ to |0> and beta- to -|1>.
    """
    a = math.pi / 4.0 - (markers.phi_plus + markers.phi_minus) / 2.0
    return np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]], dtype=complex)


def dephase(rho: np.ndarray) -> np.ndarray:
    """Gradient-pulse mimic of projective measurement: keep the diagonal."""
    return np.diag(np.diagonal(np.asarray(rho, dtype=complex)))


def t2_dephasing_weight(duration: float, t2: float) -> float:
    """Coherence survival factor exp(-duration / t2)."""
    return math.exp(-duration / t2)


def read_diagonal(rho: np.ndarray, shots: int | None = None, rng: np.random.Generator | None = None) -> MeasurementRecord:
    diagonal = np.real(np.diagonal(rho)).copy()
    if shots is not None:
        if rng is None:
            raise ValueError("shot sampling needs a seeded generator")
        p = np.clip(diagonal, 0.0, None)
        p = p / p.sum()
        diagonal = rng.multinomial(shots, p) / shots
    return MeasurementRecord(diagonal=diagonal)


def _evolve(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    return u @ rho @ u.conj().T


def _coupling_relaxation(rho: np.ndarray, coupling_angle: float, noise: NoiseModel) -> np.ndarray:
    duration = abs(coupling_angle) / (math.pi * noise.j_coupling)
    w_a = t2_dephasing_weight(duration, noise.t2_a)
    w_b = t2_dephasing_weight(duration, noise.t2_b)
    weights = np.kron(
        np.array([[1.0, w_b], [w_b, 1.0]]),
        np.array([[1.0, w_a], [w_a, 1.0]]),
    )
    return rho * weights


def _run_noisy(rho: np.ndarray, seq: PulseSequence, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    for pulse in seq.pulses:
        angle = pulse.angle.evaluate(seq.params)
        if pulse.kind == "rotation":
            angle *= 1.0 + noise.miscalibration_fraction * rng.uniform(-1.0, 1.0)
        rho = _evolve(rho, pulse_matrix(pulse, angle))
        if pulse.kind == "coupling":
            rho = _coupling_relaxation(rho, angle, noise)
    return rho


def _prepare_marked_noisy(markers: MarkerPair, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1.0
    seq = _SPLIT_MARK.bind(phi_p=markers.phi_plus, phi_m=markers.phi_minus)
    return _run_noisy(rho, seq, noise, rng)


def joint_probabilities(markers: MarkerPair, noise: NoiseModel | None = None) -> JointProbs:
    """Joint probabilities of (marker basis outcome, observed path).

    Noiseless operation prepares the marked superposition analytically;
    with a noise model the preparation, readout rotation and measurement
    run through the pulse pipeline.
    """
    if noise is None:
        rho = density_matrix(psi1(markers))
        rotate = tensor(I2, marker_rotation(markers))
        record = read_diagonal(dephase(_evolve(rho, rotate)))
    else:
        rng = np.random.default_rng(noise.rng_seed)
        rho = _prepare_marked_noisy(markers, noise, rng)
        a = math.pi / 4.0 - (markers.phi_plus + markers.phi_minus) / 2.0
        readout = PulseSequence((Pulse.rotation("Y", "A", 2.0 * a),))
        rho = dephase(_run_noisy(rho, readout, noise, rng))
        record = read_diagonal(rho, shots=noise.shots, rng=rng)
    d = record.diagonal
    return JointProbs(p_bp_0=float(d[0]), p_bm_0=float(d[1]), p_bp_1=float(d[2]), p_bm_1=float(d[3]))


def simulate_fringe(markers: MarkerPair, phase_grid, noise: NoiseModel | None = None) -> list[tuple[float, float]]:
    """Population of path 0 versus interferometer phase.

    Each grid point is a full experimental run: state preparation, the
    merge pulses, gradient dephasing and population readout.
    """
    phase_grid = list(phase_grid)
    if not phase_grid:
        raise ValueError("phase grid must be non-empty")
    samples = []
    if noise is None:
        base = density_matrix(psi1(markers))
        for phase in phase_grid:
            merge = tensor(u2(PhaseSetting(phase)), I2)
            record = read_diagonal(dephase(_evolve(base, merge)))
            samples.append((float(phase), float(record.diagonal[0] + record.diagonal[1])))
    else:
        rng = np.random.default_rng(noise.rng_seed)
        for phase in phase_grid:
            rho = _prepare_marked_noisy(markers, noise, rng)
            merge = _PHASE_MERGE.bind(**u2_pulse_params(phase))
            rho = dephase(_run_noisy(rho, merge, noise, rng))
            record = read_diagonal(rho, shots=noise.shots, rng=rng)
            samples.append((float(phase), float(record.diagonal[0] + record.diagonal[1])))
    return samples
