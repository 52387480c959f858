"""Electron wavefunctions on the sideband lattice and their overlap integrals.

A comb stores complex amplitudes ``c_n`` on the lattice of wavevectors
``k0 - n q`` (positive ``n``: the electron has lost ``n`` recoil quanta).
The modulation figures of merit are the lag-``j`` autocorrelations
``I_j = <b^j> = sum_n conj(c_{n+j}) c_n``, where ``b`` shifts the comb one
lattice site down in wavevector (``n -> n + 1``).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ElectronComb",
    "OverlapIntegrals",
    "PinemParams",
    "bessel_j",
    "bessel_j_array",
    "equal_comb",
    "two_sideband_comb",
    "overlap_integral",
    "overlap_integrals",
    "pinem_drift_integral",
    "pinem_I1_max",
]

NORM_TOL = 1e-12


@dataclass(frozen=True)
class ElectronComb:
    """Normalized amplitudes on a finite window of sideband indices."""

    n_min: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("comb needs a non-empty 1-d amplitude array")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes: dict[int, complex]) -> "ElectronComb":
        if not amplitudes:
            raise ValueError("empty comb")
        n_min = min(amplitudes)
        n_max = max(amplitudes)
        amps = np.zeros(n_max - n_min + 1, dtype=complex)
        for n, a in amplitudes.items():
            amps[n - n_min] = a
        return cls._normalized(n_min, amps)

    @classmethod
    def _normalized(cls, n_min: int, amps: np.ndarray) -> "ElectronComb":
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise ValueError("all-zero comb amplitudes")
        return cls(n_min, amps / norm)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_min + self.amplitudes.size)

    def as_dict(self) -> dict[int, complex]:
        return {int(n): complex(a) for n, a in zip(self.indices, self.amplitudes)}

    def to_json_obj(self) -> list[dict]:
        return [
            {"n": int(n), "re": float(a.real), "im": float(a.imag)}
            for n, a in zip(self.indices, self.amplitudes)
        ]

    def shifted(self, offset: int) -> "ElectronComb":
        return ElectronComb(self.n_min + offset, self.amplitudes.copy())


@dataclass(frozen=True)
class OverlapIntegrals:
    """The modulation figures of merit (I1, I2) = (<b>, <b^2>)."""

    I1: complex
    I2: complex

    def __post_init__(self):
        if abs(self.I1) > 1.0 + 1e-9 or abs(self.I2) > 1.0 + 1e-9:
            raise ValueError("overlap integrals must satisfy |I_j| <= 1")


def equal_comb(N: int, phi: float = 0.0) -> ElectronComb:
    """Comb of N identical peaks with per-peak phase e^{i n phi}."""
    if N < 1:
        raise ValueError("comb needs at least one peak")
    n = np.arange(1, N + 1)
    amps = np.exp(1j * phi * n) / math.sqrt(N)
    return ElectronComb(1, amps)


def two_sideband_comb(f0: float, f1: float, phi: float = 0.0) -> ElectronComb:
    """Three peaks at n in {-1, 0, 1} with real magnitudes (f1, f0, f1)."""
    if f0 < 0 or f1 < 0:
        raise ValueError("peak magnitudes must be non-negative")
    amps = np.array([f1, f0, f1], dtype=complex) * np.exp(1j * phi * np.arange(-1, 2))
    return ElectronComb._normalized(-1, amps)


def comb_alphas(f0: float, f1: float) -> tuple[float, float]:
    """(alpha0, alpha1) weights of the zero-loss and sideband components."""
    norm = math.sqrt(f0 * f0 + 2.0 * f1 * f1)
    if norm == 0.0:
        raise ValueError("all-zero comb amplitudes")
    return f0 / norm, math.sqrt(2.0) * f1 / norm


def overlap_integral(c: ElectronComb, j: int) -> complex:
    """<b^j> of the comb: autocorrelation of the amplitudes at lag j."""
    if j < 1:
        raise ValueError("lag must be a positive integer")
    amps = c.amplitudes
    if amps.size <= j:
        return 0.0 + 0.0j
    return complex(np.vdot(amps[j:], amps[:-j]))


def overlap_integrals(c: ElectronComb) -> OverlapIntegrals:
    return OverlapIntegrals(overlap_integral(c, 1), overlap_integral(c, 2))


def bessel_j_array(n_max: int, x: float) -> np.ndarray:
    """J_0(x) .. J_{n_max}(x) by Miller's downward recurrence.

    Normalized with J_0 + 2 sum_k J_{2k} = 1; good to ~1e-12 for
    |n| <= 60 and |x| <= 10.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if x == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    sign = -1.0 if x < 0.0 else 1.0
    x = abs(x)
    # Start the recurrence well above both the order and the argument.
    m_start = int(n_max + 2 * math.sqrt(max(n_max, 1)) + int(2.5 * x) + 40)
    if m_start % 2:
        m_start += 1
    j_hi = 0.0
    j_lo = 1e-300
    out = np.zeros(n_max + 1)
    norm = 0.0
    for m in range(m_start, 0, -1):
        j_prev = (2.0 * m / x) * j_lo - j_hi
        j_hi = j_lo
        j_lo = j_prev
        if m - 1 <= n_max:
            out[m - 1] = j_prev
        if (m - 1) % 2 == 0:
            norm += (1.0 if m == 1 else 2.0) * j_prev
        # Rescale to dodge overflow of the unnormalized recurrence.
        if abs(j_lo) > 1e250:
            j_lo *= 1e-250
            j_hi *= 1e-250
            norm *= 1e-250
            out *= 1e-250
    out /= norm
    if sign < 0.0:
        out[1::2] *= -1.0
    return out


def bessel_j(n: int, x: float) -> float:
    """J_n(x) for integer n (J_{-n} = (-1)^n J_n)."""
    value = bessel_j_array(abs(n), x)[abs(n)]
    if n < 0 and n % 2:
        value = -value
    return value


@dataclass(frozen=True)
class PinemParams:
    """PINEM-plus-drift preparation parameters.

    gL_abs: PINEM coupling magnitude |g_L|; theta: quadratic drift phase
    (radians); sigma_ratio: initial wavevector spread over the recoil,
    sigma_k / q0; phi0: linear phase offset (PINEM phase plus drift phase).
    """

    gL_abs: float
    theta: float
    sigma_ratio: float = 0.0
    phi0: float = 0.0

    def __post_init__(self):
        if self.gL_abs < 0.0 or self.sigma_ratio < 0.0:
            raise ValueError("gL_abs and sigma_ratio must be non-negative")
        if self.sigma_ratio >= 0.5:
            warnings.warn(
                "sigma_k/q0 >= 0.5: the drift model assumes a narrow initial "
                "wavevector spread",
                stacklevel=2,
            )


def pinem_drift_integral(p: PinemParams, n: int, m_cutoff: int = 80) -> complex:
    """Overlap integral I_n of a drifted PINEM electron.

    Bessel sum sum_m J_m(2|gL|) J_{m+n}(2|gL|) e^{-i m n theta} times the
    drift prefactor exp[-i n phi0 - i n^2 theta/2 - (n sigma theta/sqrt(2))^2].
    """
    if n < 1:
        raise ValueError("sideband order n must be a positive integer")
    x = 2.0 * p.gL_abs
    # Tail bound |J_m(x)| <= (x/2)^m / m!; reject cutoffs that truncate
    # a non-negligible tail.
    tail = (x / 2.0) ** (m_cutoff + 1) / math.factorial(m_cutoff + 1) if x > 0 else 0.0
    if tail >= 1e-16:
        raise ValueError(f"m_cutoff={m_cutoff} too small for |g_L|={p.gL_abs}")
    j = bessel_j_array(m_cutoff + n, x)

    def jm(m: int) -> float:
        a = abs(m)
        v = j[a] if a < j.size else 0.0
        return -v if (m < 0 and m % 2) else v

    total = 0.0 + 0.0j
    for m in range(-m_cutoff - n, m_cutoff + 1):
        total += jm(m) * jm(m + n) * np.exp(-1j * m * n * p.theta)
    damp = (n * p.sigma_ratio * p.theta / math.sqrt(2.0)) ** 2
    prefactor = np.exp(-1j * n * p.phi0 - 0.5j * n * n * p.theta - damp)
    return complex(prefactor * total)


def pinem_I1_max(sigma_ratio: float = 0.0) -> float:
    """Largest |I_1| attainable by PINEM-plus-drift at theta = pi.

    Scans the coupling magnitude on a fine grid and polishes with golden
    section; the optimum sits at the first maximum of J_1.
    """
    from scipy.optimize import minimize_scalar

    def neg(gl: float) -> float:
        return -abs(pinem_drift_integral(PinemParams(gl, math.pi, sigma_ratio), 1))

    grid = np.linspace(0.05, 2.0, 80)
    best = min(grid, key=neg)
    res = minimize_scalar(
        neg, bounds=(max(best - 0.1, 0.0), best + 0.1), method="bounded",
        options={"xatol": 1e-10},
    )
    return float(-res.fun)
