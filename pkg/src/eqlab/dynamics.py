"""Continuous driving by a train of modulated electrons.

The emitter Bloch vector obeys an affine-linear master equation built from
the per-event coupling beta, the electron arrival rate gamma_e, the
radiative decay rate gamma_0 and the comb overlap integrals I1, I2 (in the
wavevector-autocorrelation convention, see :mod:`eqlab.scatter`).  Shorthand
rates: g1 = gamma_e sin^2(beta) (electron-induced dephasing) and
g2 = gamma_e sin(2 beta) (coherent drive).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.stats import qmc

from .core import BLOCH_EPS, QubitState
from .electron import ElectronComb


class NoSteadyStateError(RuntimeError):
    """The generator is singular: no unique steady state exists."""


@dataclass(frozen=True)
class DriveParams:
    """Parameters of the electron-train master equation."""

    beta: float
    gamma_e: float
    gamma_0: float
    I1: complex = 0.0
    I2: complex = 0.0

    def __post_init__(self):
        if self.beta < 0.0 or self.gamma_e <= 0.0 or self.gamma_0 < 0.0:
            raise ValueError("need beta >= 0, gamma_e > 0, gamma_0 >= 0")
        if abs(self.I1) > 1.0 + 1e-9 or abs(self.I2) > 1.0 + 1e-9:
            raise ValueError("overlap integrals must satisfy |I_n| <= 1")

    @classmethod
    def from_comb(cls, beta: float, gamma_e: float, gamma_0: float,
                  comb: ElectronComb) -> "DriveParams":
        from .scatter import paper_overlaps

        i1, i2 = paper_overlaps(comb)
        return cls(beta, gamma_e, gamma_0, i1, i2)

    @property
    def g1(self) -> float:
        return self.gamma_e * math.sin(self.beta) ** 2

    @property
    def g2(self) -> float:
        return self.gamma_e * math.sin(2.0 * self.beta)


@dataclass(frozen=True)
class BlochGenerator:
    """dr/dt = M r + drift for the Bloch vector r = (x, y, z)."""

    M: np.ndarray
    drift: np.ndarray

    def augmented(self) -> np.ndarray:
        """Homogeneous 4x4 form acting on (x, y, z, 1)."""
        a = np.zeros((4, 4))
        a[:3, :3] = self.M
        a[:3, 3] = self.drift
        return a


def generator(p: DriveParams) -> BlochGenerator:
    """Master-equation generator for the Bloch vector."""
    i1r, i1i = p.I1.real, p.I1.imag
    i2r, i2i = p.I2.real, p.I2.imag
    g1, g2 = p.g1, p.g2
    m = np.array([
        [g1 * i2r, g1 * i2i, g2 * i1i],
        [g1 * i2i, -g1 * i2r, -g2 * i1r],
        [-g2 * i1i, g2 * i1r, -g1],
    ])
    m -= (p.gamma_0 + g1) * np.eye(3)
    return BlochGenerator(m, np.array([0.0, 0.0, -p.gamma_0]))


def steady_state(p: DriveParams) -> QubitState:
    """Unique fixed point of the generator (raises if singular)."""
    gen = generator(p)
    try:
        r = np.linalg.solve(gen.M, -gen.drift)
    except np.linalg.LinAlgError:
        raise NoSteadyStateError("no unique steady state: singular generator")
    if np.linalg.cond(gen.M) > 1e12:
        raise NoSteadyStateError("no unique steady state: singular generator")
    return QubitState(*r)


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues (sorted: real part descending, imaginary ascending)
    and the matching right eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray
    degenerate: bool


def eigensystem(p: DriveParams) -> EigenSystem:
    gen = generator(p)
    vals, vecs = np.linalg.eig(gen.M)
    order = np.lexsort((vals.imag, -vals.real))
    vals = vals[order]
    vecs = vecs[:, order]
    degenerate = bool(np.linalg.cond(vecs) > 1e8)
    return EigenSystem(vals, vecs, degenerate)


def weak_coupling_eigenvalues(p: DriveParams) -> np.ndarray:
    """Leading small-beta asymptotics of the three eigenvalues.

    With I_n = |I_n| e^{i theta_n} and b = beta:
    lambda_1 = -gamma_0 - gamma_e b^2 [1 - |I2| cos(2 theta_1 - theta_2)],
    lambda_2,3 = -gamma_0 - gamma_e b^2 (3 + |I2| cos(2 theta_1 - theta_2)) / 2
                 +- 2 i |I1| gamma_e b.
    """
    b = p.beta
    th1 = cmath.phase(p.I1)
    c = abs(p.I2) * math.cos(2.0 * th1 - cmath.phase(p.I2))
    l1 = -p.gamma_0 - p.gamma_e * b * b * (1.0 - c)
    re23 = -p.gamma_0 - p.gamma_e * b * b * (3.0 + c) / 2.0
    im = 2.0 * abs(p.I1) * p.gamma_e * b
    vals = np.array([l1, complex(re23, -im), complex(re23, im)])
    order = np.lexsort((vals.imag, -vals.real))
    return vals[order]


@dataclass(frozen=True)
class I2DecayModes:
    """Anisotropic xy-plane decay under pure I2 driving (I1 = 0, gamma_0 = 0)."""

    lambda_slow: float
    lambda_fast: float
    v_slow: np.ndarray
    v_fast: np.ndarray
    preserved_phase: float


def i2_decay_modes(p: DriveParams) -> I2DecayModes:
    """Decay rates lambda_-+ = -g1 (1 -+ |I2|) and the xy eigendirections.

    The slow direction sits at the half phase of I2; the preserved
    coherence phase is theta_2 / 2 modulo pi.
    """
    if p.I1 != 0 or p.gamma_0 != 0.0:
        raise ValueError("pure I2 decay modes need I1 = 0 and gamma_0 = 0")
    th2 = cmath.phase(p.I2)
    g1 = p.g1
    a2 = abs(p.I2)
    half = th2 / 2.0
    return I2DecayModes(
        lambda_slow=-g1 * (1.0 - a2),
        lambda_fast=-g1 * (1.0 + a2),
        v_slow=np.array([math.cos(half), math.sin(half)]),
        v_fast=np.array([-math.sin(half), math.cos(half)]),
        preserved_phase=half % math.pi,
    )


def _check_dt(p: DriveParams, dt: float) -> None:
    es = eigensystem(p)
    scale = max(float(np.abs(es.values).max()), p.gamma_0, abs(p.g2))
    if scale > 0.0 and dt > 0.01 / scale:
        raise ValueError(f"dt={dt:g} too coarse: need dt <= {0.01 / scale:g}")


def integrate(p: DriveParams, s0: QubitState, t_end: float,
              dt: float) -> list[tuple[float, QubitState]]:
    """Trajectory under constant drive parameters.

    Propagates with the matrix exponential of the 4x4 affine augmentation,
    so each sample is exact up to round-off (no step-size error
    accumulation).
    """
    _check_dt(p, dt)
    n = int(round(t_end / dt))
    step = expm(generator(p).augmented() * dt)
    v = np.array([s0.x, s0.y, s0.z, 1.0])
    out = [(0.0, s0)]
    for i in range(n):
        v = step @ v
        s = QubitState(v[0], v[1], v[2])
        if s.norm > 1.0 + 1e3 * BLOCH_EPS:
            raise RuntimeError(f"Bloch norm {s.norm} escaped the sphere")
        out.append(((i + 1) * dt, s))
    return out


def integrate_time_dependent(p_of_t, s0: QubitState, t_end: float,
                             dt: float) -> list[tuple[float, QubitState]]:
    """Classical 4-stage integration for time-dependent drive parameters.

    ``p_of_t(t)`` returns the DriveParams at time t.
    """
    n = int(round(t_end / dt))

    def rate(t: float, r: np.ndarray) -> np.ndarray:
        gen = generator(p_of_t(t))
        return gen.M @ r + gen.drift

    r = np.array([s0.x, s0.y, s0.z])
    out = [(0.0, s0)]
    for i in range(n):
        t = i * dt
        k1 = rate(t, r)
        k2 = rate(t + 0.5 * dt, r + 0.5 * dt * k1)
        k3 = rate(t + 0.5 * dt, r + 0.5 * dt * k2)
        k4 = rate(t + dt, r + dt * k3)
        r = r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out.append(((i + 1) * dt, QubitState(*r)))
    return out


def rabi_window(p: DriveParams) -> tuple[float, float]:
    """Coupling-strength window (beta_min, beta_max) for Rabi oscillations.

    Lower edge: drive beats radiative decay, 2 |I1| beta gamma_e > gamma_0.
    Upper edge: drive beats electron-induced dephasing, |I1| > beta.
    The window is empty when beta_min >= beta_max.
    """
    a1 = abs(p.I1)
    if a1 == 0.0:
        raise ValueError("no Rabi window without first-order modulation (I1 = 0)")
    return (p.gamma_0 / (2.0 * a1 * p.gamma_e), a1)


def rabi_frequency(p: DriveParams) -> float:
    """Omega_R = gamma_e |I1| |sin(2 beta)|; tends to 2 |I1| gamma_e beta
    for weak coupling."""
    if abs(p.I1) == 0.0:
        raise ValueError("no Rabi frequency without first-order modulation")
    return p.gamma_e * abs(p.I1) * abs(math.sin(2.0 * p.beta))


def z_oscillates(p: DriveParams, s0: QubitState, t_end: float, dt: float) -> bool:
    """True if z(t) shows at least one more extremum after its first one."""
    traj = integrate(p, s0, t_end, dt)
    z = np.array([s.z for _, s in traj])
    dz = np.diff(z)
    dz = dz[np.abs(dz) > 1e-14]
    if dz.size < 2:
        return False
    flips = np.nonzero(np.diff(np.sign(dz)) != 0)[0]
    return flips.size >= 2


def inscribed_sphere(gamma_ratio: float) -> tuple[float, float]:
    """(radius, center z) of the sphere inscribed in the steady-state
    region, r_s = gamma_e / (2 gamma_e + gamma_0), z_s = r_s - 1."""
    if gamma_ratio < 0.0:
        raise ValueError("gamma_0 / gamma_e must be non-negative")
    r_s = 1.0 / (2.0 + gamma_ratio)
    return r_s, r_s - 1.0


@dataclass(frozen=True)
class RegionSample:
    """Steady states reachable by modulation, plus inscribed-sphere audit."""

    points: np.ndarray
    r_s: float
    z_s: float
    sphere_gap: float

    def covers_sphere(self, tol: float = 0.02) -> bool:
        return self.sphere_gap <= tol


def accessible_region(gamma_ratio: float, grid: int = 4096, *,
                      n_sphere: int = 200, seed: int = 7) -> RegionSample:
    """Sample the steady states over (beta, |I1|, |I2|, theta1, theta2).

    Uses a seeded Sobol sequence so the point cloud is reproducible.  The
    sphere audit exploits the azimuthal symmetry of the set: distances are
    measured in the (sqrt(x^2 + y^2), z) half-plane.
    """
    sampler = qmc.Sobol(d=5, scramble=True, seed=seed)
    n_qmc = grid - grid // 4
    u = sampler.random_base2(max(math.ceil(math.log2(max(n_qmc, 2))), 1))[:n_qmc]
    betas = u[:, 0] * (math.pi / 2.0)
    a1 = u[:, 1]
    a2 = u[:, 2]
    th1 = u[:, 3] * 2.0 * math.pi
    th2 = u[:, 4] * 2.0 * math.pi
    # Structured slice along the ideal-comb boundary (|I1| = |I2| = 1,
    # theta2 = 2 theta1), whose steady states sit on the inscribed sphere.
    n_edge = grid // 4
    # Half the edge points log-spaced to resolve the small-beta (south
    # pole) end, half linear for the rest of the arc.
    bb = np.concatenate([
        np.geomspace(1e-5, math.pi / 2.0, n_edge - n_edge // 2),
        np.linspace(1e-3, math.pi / 2.0, n_edge // 2),
    ])
    pp = np.tile(np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False),
                 (n_edge + 7) // 8)[:n_edge]
    betas = np.concatenate([betas, bb])
    a1 = np.concatenate([a1, np.ones(n_edge)])
    a2 = np.concatenate([a2, np.ones(n_edge)])
    th1 = np.concatenate([th1, pp])
    th2 = np.concatenate([th2, 2.0 * pp])
    grid = betas.size
    pts = np.empty((grid, 3))
    for i in range(grid):
        try:
            s = steady_state(DriveParams(betas[i], 1.0, gamma_ratio,
                                         a1[i] * np.exp(1j * th1[i]),
                                         a2[i] * np.exp(1j * th2[i])))
        except NoSteadyStateError:
            s = QubitState(0.0, 0.0, -1.0)
        pts[i] = (s.x, s.y, s.z)
    r_s, z_s = inscribed_sphere(gamma_ratio)
    rho = np.hypot(pts[:, 0], pts[:, 1])
    ang = np.linspace(0.0, math.pi, n_sphere)
    gap = 0.0
    for a in ang:
        target_rho = r_s * math.sin(a)
        target_z = z_s + r_s * math.cos(a)
        d = np.min(np.hypot(rho - target_rho, pts[:, 2] - target_z))
        gap = max(gap, float(d))
    return RegionSample(pts, r_s, z_s, gap)


@dataclass(frozen=True)
class HardwarePreset:
    """Named (gamma_e, gamma_0) pair for a feasible QE platform."""

    name: str
    gamma_e: float
    gamma_0: float

    def drive(self, beta: float, I1: complex = 1.0, I2: complex = 1.0) -> DriveParams:
        return DriveParams(beta, self.gamma_e, self.gamma_0, I1, I2)


# Electron repetition rate 40 MHz; exciton lifetime 200 ns and
# superconducting-qubit lifetime 500 us set gamma_0.  For |I1| = 1 the
# Rabi windows evaluate to (0.05, 1) and (2.5e-5, 1) respectively.
PRESETS = {
    "wse2_hbn": HardwarePreset("wse2_hbn", 40e6, 4e6),
    "sc_qubit": HardwarePreset("sc_qubit", 40e6, 2e3),
}
