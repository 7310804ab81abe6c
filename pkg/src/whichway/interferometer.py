"""Analytic states and operators of the two-path marking scheme.

The observed spin B is split over paths |0>_B and |1>_B while the marker
spin A labels the paths with real marker states |m+> and |m->.  Two
distinct angles drive everything: the marker angle (difference between
the two marker directions, written phi elsewhere in the package) and the
interferometer phase applied between the paths before they merge.  They
are kept as separate types because both are conventionally called "phi".
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quantum import I2, apply, tensor


@dataclass(frozen=True)
class MarkerPair:
    """Marker directions for path 0 (phi_plus) and path 1 (phi_minus)."""

    phi_plus: float
    phi_minus: float

    @property
    def marker_angle(self) -> float:
        return self.phi_minus - self.phi_plus

    @property
    def plus_state(self) -> np.ndarray:
        return np.array([math.cos(self.phi_plus), math.sin(self.phi_plus)])

    @property
    def minus_state(self) -> np.ndarray:
        return np.array([math.cos(self.phi_minus), math.sin(self.phi_minus)])

    @property
    def overlap(self) -> float:
        """<m+|m->, real for real marker states."""
        return math.cos(self.marker_angle)


@dataclass(frozen=True)
class PhaseSetting:
    """Relative phase between the two paths before the beam merge."""

    phase: float


def psi1(markers: MarkerPair) -> np.ndarray:
    """Marked superposition (|0>_B |m+>_A + |1>_B |m->_A) / sqrt(2)."""
    out = np.empty(4, dtype=complex)
    out[0:2] = markers.plus_state
    out[2:4] = markers.minus_state
    return out / math.sqrt(2.0)


def u2(phase: PhaseSetting) -> np.ndarray:
    """Phase-shift and beam-merge operator on the observed spin."""
    p = np.exp(1j * phase.phase)
    return np.array([[1.0, p], [-p.conjugate(), 1.0]], dtype=complex) / math.sqrt(2.0)


def psi2(markers: MarkerPair, phase: PhaseSetting) -> np.ndarray:
    """Output state after the merge: u2 on B applied to psi1."""
    return apply(tensor(u2(phase), I2), psi1(markers))


def population(markers: MarkerPair, phase: PhaseSetting, path: int) -> float:
    """Output population of the observed spin on path 0 or 1.

    (1 +/- Re(<m+|m-> e^(i phase))) / 2; the two paths sum to 1 exactly.
    """
    if path not in (0, 1):
        raise ValueError(f"path must be 0 or 1, got {path!r}")
    sign = 1.0 if path == 0 else -1.0
    return (1.0 + sign * markers.overlap * math.cos(phase.phase)) / 2.0
