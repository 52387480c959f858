"""Qubit state representation and the scalar metrics used everywhere else.

The emitter state lives on the Bloch sphere, ``rho = (1 + x s1 + y s2 + z s3)/2``
with ``s3 = |e><e| - |g><g|``, so the ground state sits at the south pole
``(0, 0, -1)``.  Matrices use the ``{|g>, |e>}`` basis ordering throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Bloch-norm slack: absorbs integrator round-off without admitting
# non-physical states.
BLOCH_EPS = 1e-9

SIGMA_1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_2 = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
SIGMA_3 = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class QubitState:
    """Emitter density matrix as a Bloch vector (x, y, z)."""

    x: float
    y: float
    z: float

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @property
    def d(self) -> complex:
        """Transverse coherence d = x + iy."""
        return complex(self.x, self.y)

    @property
    def dipole_phase(self) -> float:
        """arg(d); 0 for a state with no transverse coherence."""
        return math.atan2(self.y, self.x)

    def is_physical(self, eps: float = BLOCH_EPS) -> bool:
        return self.norm <= 1.0 + eps


def pure_state(theta: float, gamma: float) -> QubitState:
    """Bloch vector of cos(theta)|g> + sin(theta) e^{i gamma}|e>."""
    rho_ge = math.cos(theta) * math.sin(theta) * complex(math.cos(gamma), -math.sin(gamma))
    d = 2.0 * rho_ge
    return QubitState(d.real, d.imag, -math.cos(2.0 * theta))


def bloch_to_density(s: QubitState) -> np.ndarray:
    """Map a Bloch vector to the 2x2 density matrix in the {|g>, |e>} basis."""
    if not s.is_physical():
        raise ValueError(f"Bloch vector norm {s.norm:.12g} exceeds 1 (non-physical state)")
    return 0.5 * (IDENTITY_2 + s.x * SIGMA_1 + s.y * SIGMA_2 + s.z * SIGMA_3)


def check_density(rho: np.ndarray, tol: float = 1e-12) -> None:
    """Validate Hermiticity, unit trace and positivity of a 2x2 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol or abs(np.trace(rho).imag) > tol:
        raise ValueError("density matrix trace is not 1")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise ValueError("density matrix has a negative eigenvalue")


def density_to_bloch(rho: np.ndarray, validate: bool = True) -> QubitState:
    """Inverse of :func:`bloch_to_density`: x = Tr(rho s1) etc."""
    rho = np.asarray(rho, dtype=complex)
    if validate:
        check_density(rho)
    x = np.trace(rho @ SIGMA_1).real
    y = np.trace(rho @ SIGMA_2).real
    z = np.trace(rho @ SIGMA_3).real
    return QubitState(float(x), float(y), float(z))


def purity(s: QubitState) -> float:
    """P = sqrt(2 Tr(rho^2) - 1) = |r|; 1 for pure states, 0 at maximal mixing."""
    return s.norm


def concurrence_from_reduced(reduced_purity_trace: float) -> float:
    """Concurrence of a bipartite pure state from Tr(rho_reduced^2).

    C = sqrt(2 (1 - Tr rho^2)), clipped against round-off at the ends of
    the physical range [1/2, 1].
    """
    if not 0.0 <= reduced_purity_trace <= 1.0 + 1e-12:
        raise ValueError(f"Tr(rho^2) = {reduced_purity_trace} outside [0, 1]")
    return math.sqrt(max(0.0, 2.0 * (1.0 - min(reduced_purity_trace, 1.0))))
