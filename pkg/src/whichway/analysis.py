"""Visibility, which-way distinguishability, entanglement and the duality sum.

Two independent routes to the distinguishability are provided: the
geometric route (probability differences in the balanced marker basis)
and the likelihood route (best guess of the path from a marker
measurement).  For ideal inputs both equal |sin(marker angle)| and the
duality sum D^2 + V^2 is exactly 1.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .interferometer import MarkerPair
from .quantum import Basis2

log = logging.getLogger(__name__)

_PROB_SLACK = 1e-9


@dataclass(frozen=True)
class JointProbs:
    """Joint probabilities of (marker basis outcome, observed path)."""

    p_bp_0: float  # (beta+, path 0)
    p_bm_0: float  # (beta-, path 0)
    p_bp_1: float  # (beta+, path 1)
    p_bm_1: float  # (beta-, path 1)

    def __post_init__(self):
        values = (self.p_bp_0, self.p_bm_0, self.p_bp_1, self.p_bm_1)
        for v in values:
            if not (-_PROB_SLACK <= v <= 1.0 + _PROB_SLACK):
                raise ValueError(f"joint probability {v} outside [0, 1]")
        total = sum(values)
        if abs(total - 1.0) > _PROB_SLACK:
            raise ValueError(f"joint probabilities sum to {total}, expected 1")


@dataclass(frozen=True)
class DecompositionCoeffs:
    """Real amplitudes of the marker states in the balanced basis."""

    gamma_plus: float
    gamma_minus: float
    delta_plus: float
    delta_minus: float

    def __post_init__(self):
        if abs(self.gamma_plus**2 + self.gamma_minus**2 - 1.0) > 1e-12:
            raise ValueError("gamma coefficients are not normalized")
        if abs(self.delta_plus**2 + self.delta_minus**2 - 1.0) > 1e-12:
            raise ValueError("delta coefficients are not normalized")


@dataclass(frozen=True)
class DualityRecord:
    """One sweep row: marker angle plus the five derived quantities."""

    phi: float
    V: float
    D_geo: float
    D_lik: float
    E: float
    duality_sum: float


def _clamp_unit(value: float, name: str) -> float:
    if value < 0.0 or value > 1.0:
        clamped = min(max(value, 0.0), 1.0)
        if abs(value - clamped) > 1e-15:
            log.info("clamping %s from %.6g to %.6g", name, value, clamped)
        return clamped
    return value


def visibility_analytic(markers: MarkerPair) -> float:
    """Ideal fringe contrast |<m+|m->| = |cos(marker angle)|."""
    return abs(markers.overlap)


def visibility_from_fringe(samples, method: str = "fit") -> float:
    """Extract the fringe contrast from (phase, population) samples.

    ``method="fit"`` least-squares fits a + b*cos(phase + c) and returns
    |b|/a, which is unbiased under noise; ``method="extrema"`` uses the
    raw (max - min) / (max + min) of the samples.
    Both results are clamped to [0, 1].
    """
    phases = np.array([s[0] for s in samples], dtype=float)
    values = np.array([s[1] for s in samples], dtype=float)
    if method == "extrema":
        hi, lo = values.max(), values.min()
        return _clamp_unit((hi - lo) / (hi + lo), "V")
    if method != "fit":
        raise ValueError(f"unknown method {method!r}")
    if len(values) < 3:
        raise ValueError(f"need at least 3 samples to fit a sinusoid, got {len(values)}")
    design = np.column_stack([np.ones_like(phases), np.cos(phases), np.sin(phases)])
    coef, _, rank, _ = np.linalg.lstsq(design, values, rcond=None)
    if rank < 3:
        raise ValueError("fringe fit failed: singular normal equations (degenerate phase grid)")
    mean, amplitude = coef[0], math.hypot(coef[1], coef[2])
    return _clamp_unit(amplitude / mean, "V")


def beta_basis(markers: MarkerPair) -> Basis2:
    """Marker basis that balances the two path-probability differences."""
    return Basis2(angle=(markers.phi_plus + markers.phi_minus) / 2.0 - math.pi / 4.0)


def decompose(markers: MarkerPair) -> DecompositionCoeffs:
    """Marker-state amplitudes in the balanced basis.

    Closed form: gamma+ = delta- = cos(pi/4 - phi/2) and
    gamma- = delta+ = sin(pi/4 - phi/2) with phi the marker angle.  The
    direct inner products against :func:`beta_basis` agree up to the
    sign of the second basis vector, which never enters the
    distinguishability (only squared moduli do).
    """
    half = math.pi / 4.0 - markers.marker_angle / 2.0
    return DecompositionCoeffs(
        gamma_plus=math.cos(half),
        gamma_minus=math.sin(half),
        delta_plus=math.sin(half),
        delta_minus=math.cos(half),
    )


def distinguishability_geometric(jp: JointProbs) -> float:
    """Average of the two path-probability differences in the balanced basis."""
    gamma_plus_sq = 2.0 * jp.p_bp_0
    gamma_minus_sq = 2.0 * jp.p_bm_0
    delta_plus_sq = 2.0 * jp.p_bp_1
    delta_minus_sq = 2.0 * jp.p_bm_1
    raw = 0.5 * (abs(gamma_plus_sq - delta_plus_sq) + abs(delta_minus_sq - gamma_minus_sq))
    return _clamp_unit(raw, "D_geo")


def likelihood(jp: JointProbs) -> float:
    """Probability of guessing the path right from the marker outcome."""
    return max(jp.p_bp_0, jp.p_bp_1) + max(jp.p_bm_0, jp.p_bm_1)


def distinguishability_likelihood(likelihood_value: float) -> float:
    """D = 2 L - 1 for a guessing likelihood L in [1/2, 1]."""
    if not (0.5 - _PROB_SLACK <= likelihood_value <= 1.0 + _PROB_SLACK):
        raise ValueError(f"likelihood {likelihood_value} outside [1/2, 1]")
    return _clamp_unit(2.0 * likelihood_value - 1.0, "D_lik")


def optimal_observable_search(markers: MarkerPair, grid_size: int) -> tuple[float, float]:
    """Brute-force scan for the marker observable maximizing the likelihood.

    Scans the basis angle over [0, pi) in ``grid_size`` steps and returns
    (best angle, best likelihood).  Relabeling the two outcomes maps the
    angle to angle + pi/2 without changing the likelihood, so the
    maximizer is only defined modulo pi/2; the returned angle is the
    representative in [0, pi/2).
    """
    if grid_size < 64:
        raise ValueError(f"grid_size must be at least 64, got {grid_size}")
    thetas = math.pi * np.arange(grid_size) / grid_size
    w_plus = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    w_minus = np.stack([np.sin(thetas), -np.cos(thetas)], axis=1)
    m_plus = markers.plus_state
    m_minus = markers.minus_state
    # joint probabilities carry the 1/2 path weight of the split input
    likelihoods = (
        np.maximum((w_plus @ m_plus) ** 2, (w_plus @ m_minus) ** 2)
        + np.maximum((w_minus @ m_plus) ** 2, (w_minus @ m_minus) ** 2)
    ) / 2.0
    best = int(np.argmax(likelihoods))
    return float(thetas[best] % (math.pi / 2)), float(likelihoods[best])


def _binary_entropy(p: float) -> float:
    total = 0.0
    for q in (p, 1.0 - p):
        if q > 1e-12:
            total -= q * math.log2(q)
    return total


def entanglement(markers: MarkerPair) -> float:
    """Entropy of either reduced spin of the marked superposition, in bits."""
    return _binary_entropy((1.0 - markers.overlap) / 2.0)


def duality_sum(visibility: float, distinguishability: float) -> float:
    return distinguishability**2 + visibility**2
