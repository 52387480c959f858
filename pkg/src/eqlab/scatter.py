"""Single electron-emitter scattering events.

The closed-form scattering matrix ``S = cos(|b|) - i (s+ b + s b+) sin(|b|)``
acts on joint states living on (QE level) x (sideband window).  The module
provides both the explicit joint-state route and the closed-form reduced
update of the emitter, which the tests hold against each other.

Convention note: the paper-form overlap integrals entering the reduced
update are the wavevector autocorrelations ``int B(k) B*(k + j q) dk``,
which are the conjugates of the literal operator expectations
``<b^j>`` returned by :func:`eqlab.electron.overlap_integral` (fixed once
against the brute-force joint evolution).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import (
    QubitState,
    SIGMA_1,
    SIGMA_2,
    bloch_to_density,
    concurrence_from_reduced,
    density_to_bloch,
    purity,
)
from .electron import ElectronComb, overlap_integral

NORM_TOL = 1e-12
SUPPORT_TOL = 1e-14


@dataclass(frozen=True)
class CouplingStrength:
    """Integrated interaction strength |beta| and its complex phase."""

    beta_abs: float
    beta_phase: float = 0.0

    def __post_init__(self):
        if self.beta_abs < 0.0:
            raise ValueError("beta_abs must be non-negative")
        if self.beta_abs >= math.pi:
            warnings.warn(
                "beta >= pi: outside the validity range of the second-order "
                "Magnus propagator (error O(beta^3))",
                stacklevel=2,
            )

    @property
    def value(self) -> complex:
        return self.beta_abs * cmath.exp(1j * self.beta_phase)


@dataclass
class JointState:
    """Amplitudes over (QE level in {g, e}) x (sideband index window).

    ``branches`` is a classical mixture of pure joint states: a list of
    (weight, amps) with amps of shape (2, K); row 0 is |g>, row 1 is |e>.
    ``offset`` is the sideband index of column 0.
    """

    branches: list[tuple[float, np.ndarray]]
    offset: int

    def __post_init__(self):
        total = sum(w for w, _ in self.branches)
        if abs(total - 1.0) > 1e-9:
            raise ValueError("mixture weights must sum to 1")
        for _, amps in self.branches:
            if amps.ndim != 2 or amps.shape[0] != 2:
                raise ValueError("branch amplitudes must have shape (2, K)")

    @classmethod
    def from_pure(cls, qe: np.ndarray, comb: ElectronComb, pad: int = 2) -> "JointState":
        amps = np.zeros((2, comb.amplitudes.size + 2 * pad), dtype=complex)
        amps[0, pad:pad + comb.amplitudes.size] = qe[0] * comb.amplitudes
        amps[1, pad:pad + comb.amplitudes.size] = qe[1] * comb.amplitudes
        return cls([(1.0, amps)], comb.n_min - pad)

    @classmethod
    def from_qubit(cls, s: QubitState, comb: ElectronComb, pad: int = 2) -> "JointState":
        """Mixed QE input split into <= 2 pure branches (exact for a qubit)."""
        rho = bloch_to_density(s)
        evals, evecs = np.linalg.eigh(rho)
        branches = []
        for w, v in zip(evals, evecs.T):
            if w > 1e-14:
                branches.append((float(w), v))
        total = sum(w for w, _ in branches)
        joint = cls.from_pure(branches[0][1], comb, pad)
        joint.branches = [
            (w / total, cls.from_pure(v, comb, pad).branches[0][1]) for w, v in branches
        ]
        return joint

    @property
    def norm(self) -> float:
        return math.fsum(
            w * float(np.sum(np.abs(amps) ** 2)) for w, amps in self.branches
        )

    def qe_density(self) -> np.ndarray:
        """Reduced 2x2 emitter density matrix."""
        rho = np.zeros((2, 2), dtype=complex)
        for w, amps in self.branches:
            rho += w * (amps @ amps.conj().T)
        return rho

    def qe_state(self) -> QubitState:
        return density_to_bloch(self.qe_density(), validate=False)

    def electron_populations(self) -> dict[int, float]:
        """Occupation per sideband index n (wavevector k0 - n q)."""
        pops = np.zeros(self.branches[0][1].shape[1])
        for w, amps in self.branches:
            pops += w * np.sum(np.abs(amps) ** 2, axis=0)
        return {int(self.offset + i): float(p) for i, p in enumerate(pops)}

    def qe_purity_trace(self) -> float:
        rho = self.qe_density()
        return float(np.trace(rho @ rho).real)


def apply_smatrix(j: JointState, beta: CouplingStrength) -> JointState:
    """Apply S = cos|b| - i sin|b| (e^{i arg b} s+ b + e^{-i arg b} s b+).

    The ladder operator b shifts the electron one site down in wavevector,
    n -> n + 1.  Requires at least one empty column of padding on each
    side of the support.
    """
    c = math.cos(beta.beta_abs)
    s = math.sin(beta.beta_abs)
    phase = cmath.exp(1j * beta.beta_phase)
    out_branches = []
    for w, amps in j.branches:
        support = np.abs(amps).max(axis=0) > SUPPORT_TOL
        if support[0] or support[-1]:
            raise ValueError("sideband window underflow: support touches the boundary")
        g, e = amps[0], amps[1]
        g_out = c * g
        e_out = c * e.copy()
        e_out[1:] += -1j * s * phase * g[:-1]
        g_out[:-1] += -1j * s * np.conj(phase) * e[1:]
        out_branches.append((w, np.vstack([g_out, e_out])))
    return JointState(out_branches, j.offset)


def paper_overlaps(c: ElectronComb) -> tuple[complex, complex]:
    """(I1, I2) in the wavevector-autocorrelation convention of the
    reduced closed forms: I_j = conj(<b^j>)."""
    return (
        np.conj(overlap_integral(c, 1)),
        np.conj(overlap_integral(c, 2)),
    )


def _reduced_map_real_beta(rho0: np.ndarray, I1: complex, I2: complex,
                           beta_abs: float) -> np.ndarray:
    s2 = math.sin(beta_abs) ** 2
    t = math.sin(2.0 * beta_abs)
    a_op = I1.real * SIGMA_1 + I1.imag * SIGMA_2
    rho = rho0 + 0.5j * t * (rho0 @ a_op - a_op @ rho0)
    s1rs1 = SIGMA_1 @ rho0 @ SIGMA_1
    s2rs2 = SIGMA_2 @ rho0 @ SIGMA_2
    cross = SIGMA_1 @ rho0 @ SIGMA_2 + SIGMA_2 @ rho0 @ SIGMA_1
    rho = rho + 0.5 * s2 * (
        (s1rs1 + s2rs2 - 2.0 * rho0)
        + I2.real * (s1rs1 - s2rs2)
        + I2.imag * cross
    )
    return rho


def qe_after_interaction(rho0: QubitState, c: ElectronComb,
                         beta: CouplingStrength) -> QubitState:
    """Closed-form reduced emitter state after one scattering event.

    A complex coupling phase is absorbed into the ground state: the real-
    |beta| map is applied in the rotated basis and rotated back.
    """
    I1, I2 = paper_overlaps(c)
    rho_in = bloch_to_density(rho0)
    v = np.diag([cmath.exp(-1j * beta.beta_phase), 1.0])
    rho_in = v.conj().T @ rho_in @ v
    rho_out = _reduced_map_real_beta(rho_in, I1, I2, beta.beta_abs)
    rho_out = v @ rho_out @ v.conj().T
    return density_to_bloch(rho_out, validate=False)


def bloch_linear_map(c: ElectronComb, beta_abs: float) -> np.ndarray:
    """3x3 linear Bloch-vector map of a single event (real beta; unital)."""
    cols = []
    for unit in np.eye(3):
        rho = 0.5 * (np.eye(2, dtype=complex)
                     + unit[0] * SIGMA_1 + unit[1] * SIGMA_2 + unit[2] * np.diag([-1.0 + 0j, 1.0]))
        I1, I2 = paper_overlaps(c)
        out = _reduced_map_real_beta(rho, I1, I2, beta_abs)
        cols.append(density_to_bloch(out, validate=False).vector)
    return np.array(cols).T


def ground_state_prob_ideal(theta: float, gamma: float, phi: float, beta: float) -> float:
    """Final ground-state population for an ideally modulated electron.

    cos^2(theta) - sin^2(beta) cos(2 theta)
    + (1/2) sin(phi - gamma) sin(2 theta) sin(2 beta);
    the initial emitter state is cos(theta)|g> + sin(theta) e^{-i gamma}|e>.
    """
    p = (
        math.cos(theta) ** 2
        - math.sin(beta) ** 2 * math.cos(2.0 * theta)
        + 0.5 * math.sin(phi - gamma) * math.sin(2.0 * theta) * math.sin(2.0 * beta)
    )
    if p < -1e-12 or p > 1.0 + 1e-12:
        raise AssertionError(f"probability {p} escaped [0, 1]")
    return min(max(p, 0.0), 1.0)


def purity_loss_bound(N: int, beta: float) -> float:
    """Purity loss at the maximal-dipole initial condition, equal-peak comb.

    1 - (1/N) sqrt((N - 2 sin^2 b)^2 + sin^2 2b); tends to 2 sin^2(b)/N
    for large N.
    """
    if N < 1:
        raise ValueError("comb size must be >= 1")
    s2 = math.sin(beta) ** 2
    return 1.0 - math.sqrt((N - 2.0 * s2) ** 2 + math.sin(2.0 * beta) ** 2) / N


def max_purity_loss(N: int, beta: float, grid: int = 64, exact: bool = True) -> float:
    """Worst-case purity loss over initial pure states for an equal comb.

    Grid-scans (theta, gamma); with ``exact`` the scan is polished to the
    smallest singular value of the linear Bloch map, which is the true
    optimum over the sphere of pure states.
    """
    m = bloch_linear_map(equal_comb_cached(N), beta)
    if exact:
        smin = np.linalg.svd(m, compute_uv=False)[-1]
        return 1.0 - float(smin)
    thetas = np.linspace(0.0, math.pi, grid)
    gammas = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    tt, gg = np.meshgrid(thetas, gammas, indexing="ij")
    r0 = np.stack([
        np.sin(tt) * np.cos(gg),
        np.sin(tt) * np.sin(gg),
        np.cos(tt),
    ])
    rf = np.einsum("ij,jab->iab", m, r0)
    return float((1.0 - np.sqrt((rf ** 2).sum(axis=0))).max())


_EQUAL_COMB_CACHE: dict[int, ElectronComb] = {}


def equal_comb_cached(N: int) -> ElectronComb:
    from .electron import equal_comb

    if N not in _EQUAL_COMB_CACHE:
        _EQUAL_COMB_CACHE[N] = equal_comb(N)
    return _EQUAL_COMB_CACHE[N]


def concurrence_after(rho0: QubitState, c: ElectronComb, beta: float,
                      phi: float = 0.0) -> float:
    """Closed-form electron-emitter concurrence after one event (pure input).

    Uses the C^2 expansion in the real comb magnitudes f_n with linear
    phase phi; the real lag autocorrelations of f_n play the role of the
    overlap magnitudes.
    """
    if abs(purity(rho0) - 1.0) > 1e-9:
        raise ValueError("the closed-form concurrence assumes a pure emitter state")
    f = np.abs(c.amplitudes)
    norm = float(np.sum(f * f))
    i1 = float(np.sum(f[1:] * f[:-1])) / norm
    i2 = float(np.sum(f[2:] * f[:-2])) / norm if f.size > 2 else 0.0
    z = rho0.z
    d = rho0.d
    dabs = abs(d)
    phi_d = cmath.phase(d) if dabs > 0.0 else 0.0
    cb2 = math.cos(beta) ** 2
    sb2 = math.sin(beta) ** 2
    t = math.sin(2.0 * beta)
    c2 = sb2 * (
        2.0 * (2.0 - dabs ** 2) * (1.0 - i1 ** 2) * cb2
        + (1.0 - z ** 2) * (1.0 - i2 ** 2) * sb2
        + 2.0 * z * dabs * math.sin(phi - phi_d) * t * i1 * (i2 - 1.0)
        + 2.0 * (i1 ** 2 - i2) * dabs ** 2 * math.cos(2.0 * (phi - phi_d)) * cb2
    )
    return math.sqrt(max(c2, 0.0))


def concurrence_after_joint(rho0: QubitState, c: ElectronComb, beta: float) -> float:
    """Oracle route: apply the S-matrix and evaluate the concurrence from
    the reduced purity trace (valid for pure emitter inputs)."""
    if abs(purity(rho0) - 1.0) > 1e-9:
        raise ValueError("concurrence of the bipartite pure state needs a pure input")
    joint = JointState.from_qubit(rho0, c)
    joint = apply_smatrix(joint, CouplingStrength(beta))
    return concurrence_from_reduced(joint.qe_purity_trace())
