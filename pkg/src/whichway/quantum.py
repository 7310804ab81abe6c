"""Exact complex linear algebra for one- and two-qubit objects.

The joint Hilbert space is ordered observed (B) x marker (A), with the
observed spin as the leftmost label: the basis is |00>, |01>, |10>, |11>
where the first digit is spin B and the second is spin A.  Every 4x4
index computation in the package derives from this one convention.

All values are plain numpy arrays and every operation is a pure
function, so results can be shared freely across sweep workers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
UNITARY_TOL = 1e-10
# slightly negative eigenvalues are roundoff from noise channels; anything
# more negative than this is a genuinely broken density matrix
PSD_TOL = -1e-10
# eigenvalues below this are treated as exactly zero before the logarithm
ENTROPY_EIG_CLAMP = 1e-12


def check_state(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError("state vector must be one-dimensional")
    if not np.all(np.isfinite(psi.real)) or not np.all(np.isfinite(psi.imag)):
        raise ValueError("state vector has non-finite amplitudes")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > NORM_TOL * 10:
        raise ValueError(f"state vector is not normalized (|psi|^2 = {norm})")
    return psi


def check_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("unitary must be a square matrix")
    if not np.all(np.isfinite(u.real)) or not np.all(np.isfinite(u.imag)):
        raise ValueError("unitary has non-finite entries")
    defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if defect > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary (max |U^dag U - I| = {defect:.3g})")
    return u


def check_density_matrix(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not np.all(np.isfinite(rho.real)) or not np.all(np.isfinite(rho.imag)):
        raise ValueError("density matrix has non-finite entries")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL * 10:
        raise ValueError("density matrix is not Hermitian")
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > TRACE_TOL * 10:
        raise ValueError(f"density matrix trace is {tr}, expected 1")
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < PSD_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {eigs.min():.3g}")
    return rho


def tensor(b_op: np.ndarray, a_op: np.ndarray) -> np.ndarray:
    """Joint-space operator acting as b_op on spin B and a_op on spin A."""
    return np.kron(np.asarray(b_op, dtype=complex), np.asarray(a_op, dtype=complex))


def apply(u: np.ndarray, state: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    state = np.asarray(state, dtype=complex)
    if u.ndim != 2 or u.shape[1] != state.shape[0]:
        raise ValueError(
            f"dimension mismatch: operator {u.shape} applied to state {state.shape}"
        )
    return u @ state


def density_matrix(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Reduced 2x2 state of one spin; ``keep`` is "A" or "B"."""
    rho4 = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if keep == "B":
        return np.trace(rho4, axis1=1, axis2=3)
    if keep == "A":
        return np.trace(rho4, axis1=0, axis2=2)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits, -sum(lam * log2(lam)) with 0*log2(0) == 0."""
    eigs = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    eigs = eigs[eigs > ENTROPY_EIG_CLAMP]
    return float(-np.sum(eigs * np.log2(eigs)))


def phase_aligned_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|: equals 1 exactly when the states agree up to global phase."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(abs(np.vdot(a, b)))


@dataclass(frozen=True)
class Basis2:
    """Orthonormal real basis of the marker plane at angle ``angle``."""

    angle: float

    @property
    def plus(self) -> np.ndarray:
        return np.array([np.cos(self.angle), np.sin(self.angle)], dtype=complex)

    @property
    def minus(self) -> np.ndarray:
        return np.array([np.sin(self.angle), -np.cos(self.angle)], dtype=complex)
