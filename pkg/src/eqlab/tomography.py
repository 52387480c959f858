"""Forward electron-spectrum models and emitter state reconstruction.

The sideband occupations of the scattered electron encode the emitter
Bloch components: the zero-loss depletion gives the coupling strength,
the first-sideband imbalance mixes population and coherence, and the
second sidebands isolate the population.  Measuring at two modulation
phases separates the coherence d = x + iy from the population z.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .core import QubitState
from .electron import ElectronComb, comb_alphas, two_sideband_comb
from .scatter import CouplingStrength, JointState, apply_smatrix

__all__ = [
    "DegeneratePhaseError",
    "NoCouplingSignalError",
    "Reconstruction",
    "Spectrum",
    "purity_from_reconstruction",
    "reconstruct",
    "sample_spectrum",
    "spectrum_general",
    "spectrum_monochromatic",
    "spectrum_two_sideband",
    "sym_antisym",
]

SUM_TOL = 1e-12


class DegeneratePhaseError(ValueError):
    """The two modulation phases coincide modulo pi."""


class NoCouplingSignalError(ValueError):
    """Second-sideband signal absent; beta cannot be inferred."""


@dataclass(frozen=True)
class Spectrum:
    """Occupations per sideband index j (peak at wavevector k0 + j q)."""

    peaks: dict[int, float] = field(repr=False)

    def __post_init__(self):
        vals = np.array(list(self.peaks.values()), dtype=float)
        if vals.size == 0:
            raise ValueError("empty spectrum")
        if vals.min() < -SUM_TOL:
            raise ValueError(f"negative occupation {vals.min():g}")
        if abs(vals.sum() - 1.0) > 1e-9:
            raise ValueError(f"occupations sum to {vals.sum():.15g}, not 1")

    def __getitem__(self, j: int) -> float:
        return self.peaks.get(j, 0.0)

    def items(self) -> list[tuple[int, float]]:
        return sorted(self.peaks.items())

    def to_rows(self) -> list[tuple[int, float]]:
        """CSV rows (j, occupation) in ascending j."""
        return self.items()


def _comb_form(c: ElectronComb) -> tuple[np.ndarray, float] | None:
    """Extract (real magnitudes f_n, linear phase phi) if the comb has the
    form f_n e^{i n phi} (up to a global phase); None otherwise."""
    a = c.amplitudes
    mags = np.abs(a)
    nz = mags > 1e-14
    pairs = np.flatnonzero(nz[:-1] & nz[1:])
    if pairs.size:
        best = pairs[np.argmax(mags[pairs] * mags[pairs + 1])]
        phi = float(np.angle(a[best + 1] / a[best]))
    else:
        phi = 0.0
    n = c.indices
    ref = int(np.argmax(mags))
    global_phase = np.angle(a[ref]) - n[ref] * phi
    f = a * np.exp(-1j * (phi * n + global_phase))
    if np.abs(f.imag).max() > 1e-9:
        return None
    return f.real, phi


def _spectrum_oracle(rho: QubitState, c: ElectronComb,
                     beta: CouplingStrength) -> Spectrum:
    joint = apply_smatrix(JointState.from_qubit(rho, c), beta)
    pops = joint.electron_populations()
    peaks = {-n: p for n, p in pops.items() if p > 0.0 or -2 <= n <= 2}
    return Spectrum(peaks)


def spectrum_general(rho: QubitState, c: ElectronComb,
                     beta: float) -> Spectrum:
    """Scattered spectrum for a comb of real magnitudes and linear phase.

    Combs outside that family are routed through the joint-evolution
    path (scattering matrix, partial trace, diagonal).
    """
    form = _comb_form(c)
    if form is None:
        return _spectrum_oracle(rho, c, CouplingStrength(beta))
    f, phi = form
    d = complex(rho.x, rho.y)
    phi_d = cmath.phase(d) if d != 0.0 else 0.0
    cos2 = math.cos(beta) ** 2
    sin2 = math.sin(beta) ** 2
    cross = 0.5 * abs(d) * math.sin(2.0 * beta) * math.sin(phi_d - phi)
    fp = np.concatenate(([0.0], f, [0.0]))  # padded: fp[i] = f at n_min+i-1
    peaks: dict[int, float] = {}
    for i in range(fp.size):
        n = c.n_min - 1 + i
        f_n = fp[i]
        f_up = fp[i + 1] if i + 1 < fp.size else 0.0
        f_dn = fp[i - 1] if i >= 1 else 0.0
        val = (cos2 * f_n ** 2
               + 0.5 * sin2 * (f_up ** 2 + f_dn ** 2
                               + rho.z * (f_up ** 2 - f_dn ** 2))
               - cross * f_n * (f_up - f_dn))
        if val != 0.0 or -2 <= n <= 2:
            peaks[-n] = val
    return Spectrum(peaks)


def spectrum_monochromatic(z: float, beta: float) -> Spectrum:
    """Three-peak spectrum of a single-wavevector electron; the result
    depends on the emitter only through z (coherence blindness)."""
    if abs(z) > 1.0 + 1e-12:
        raise ValueError("|z| must not exceed 1")
    sin2 = math.sin(beta) ** 2
    return Spectrum({
        0: math.cos(beta) ** 2,
        1: 0.5 * sin2 * (1.0 + z),
        -1: 0.5 * sin2 * (1.0 - z),
    })


def spectrum_two_sideband(rho: QubitState, alpha0: float, alpha1: float,
                          beta: float, phi: float) -> Spectrum:
    """Five-peak spectrum of the comb with components at {k0, k0 +- q}.

    alpha0 and alpha1 are the zero-loss and (combined) sideband weights,
    alpha0^2 + alpha1^2 = 1.
    """
    if abs(alpha0 ** 2 + alpha1 ** 2 - 1.0) > SUM_TOL:
        raise ValueError("need alpha0^2 + alpha1^2 = 1")
    d = complex(rho.x, rho.y)
    phi_d = cmath.phase(d) if d != 0.0 else 0.0
    cos2 = math.cos(beta) ** 2
    sin2 = math.sin(beta) ** 2
    inter = (abs(d) / (2.0 * math.sqrt(2.0)) * math.sin(2.0 * beta)
             * math.sin(phi_d - phi) * alpha0 * alpha1)
    return Spectrum({
        0: cos2 * alpha0 ** 2 + 0.5 * sin2 * alpha1 ** 2,
        1: 0.5 * cos2 * alpha1 ** 2 + 0.5 * sin2 * (1.0 + rho.z) * alpha0 ** 2
           - inter,
        -1: 0.5 * cos2 * alpha1 ** 2 + 0.5 * sin2 * (1.0 - rho.z) * alpha0 ** 2
            + inter,
        2: 0.25 * sin2 * alpha1 ** 2 * (1.0 + rho.z),
        -2: 0.25 * sin2 * alpha1 ** 2 * (1.0 - rho.z),
    })


def sym_antisym(s: Spectrum, j: int) -> tuple[float, float]:
    """(n_j^S, n_j^A): sum and difference of the +-j sideband occupations."""
    if j <= 0:
        raise ValueError("sideband index must be positive")
    return s[j] + s[-j], s[j] - s[-j]


def _gamma_estimate(s: Spectrum, alpha0: float, alpha1: float) -> float:
    """|d| sin(2 beta) sin(phi - phi_d) inferred from one spectrum."""
    n1s, n1a = sym_antisym(s, 1)
    n2s, n2a = sym_antisym(s, 2)
    return (math.sqrt(2.0) / (alpha0 * alpha1)
            * (n1a - 2.0 * (alpha0 / alpha1) ** 2 * n2a))


@dataclass(frozen=True)
class Reconstruction:
    """Emitter state inferred from a pair of two-sideband spectra."""

    z: float
    d: complex
    beta0: float
    beta_candidates: tuple[float, float, float, float]
    purity: float

    def __post_init__(self):
        if self.purity > 1.0 + 1e-3:
            raise ValueError(f"reconstructed purity {self.purity:g} > 1")

    def to_json_obj(self) -> dict:
        return {
            "z": self.z,
            "d_re": self.d.real,
            "d_im": self.d.imag,
            "beta0": self.beta0,
            "candidates": list(self.beta_candidates),
            "purity": self.purity,
        }


def reconstruct(s1: Spectrum, s2: Spectrum, phi1: float, phi2: float,
                alpha0: float, alpha1: float,
                beta_interval: tuple[float, float] | None = None,
                ) -> Reconstruction:
    """Invert the two-sideband forward model from spectra at two phases.

    The coupling strength is determined only up to the four candidates
    {beta0, pi - beta0, pi + beta0, 2 pi - beta0}; by default the
    weak-interaction branch beta0 in [0, pi/2] is selected, or the
    candidate inside ``beta_interval`` when one is supplied.
    """
    if abs(math.sin(phi1 - phi2)) < 1e-9:
        raise DegeneratePhaseError("modulation phases coincide modulo pi")
    n2s = 0.5 * (sym_antisym(s1, 2)[0] + sym_antisym(s2, 2)[0])
    n2a = 0.5 * (sym_antisym(s1, 2)[1] + sym_antisym(s2, 2)[1])
    if n2s <= 0.0:
        raise NoCouplingSignalError("no second-sideband occupation")
    z = n2a / n2s
    arg = math.sqrt(2.0 * n2s) / abs(alpha1)
    beta0 = math.asin(min(arg, 1.0))
    candidates = (beta0, math.pi - beta0, math.pi + beta0,
                  2.0 * math.pi - beta0)
    beta_sel = beta0
    if beta_interval is not None:
        lo, hi = beta_interval
        matches = [b for b in candidates if lo <= b <= hi]
        if not matches:
            raise ValueError("no beta candidate inside the prior interval")
        beta_sel = matches[0]
    g1 = _gamma_estimate(s1, alpha0, alpha1)
    g2 = _gamma_estimate(s2, alpha0, alpha1)
    d = ((g1 * cmath.exp(1j * phi2) - g2 * cmath.exp(1j * phi1))
         / (math.sin(2.0 * beta_sel) * math.sin(phi1 - phi2)))
    purity = math.hypot(z, abs(d))
    return Reconstruction(z, d, beta_sel, candidates, purity)


def purity_from_reconstruction(r: Reconstruction) -> float:
    """sqrt(z^2 + |d|^2); invariant under phase shifts of d."""
    return math.hypot(r.z, abs(r.d))


def sample_spectrum(s: Spectrum, shots: int, seed: int) -> Spectrum:
    """Finite-shot spectrum: multinomial counts over the peaks.

    Expectation-valued spectra are the default everywhere; this helper
    exists for noise studies only.
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    rng = np.random.default_rng(seed)
    items = s.items()
    probs = np.array([max(p, 0.0) for _, p in items])
    counts = rng.multinomial(shots, probs / probs.sum())
    return Spectrum({j: c / shots for (j, _), c in zip(items, counts)})
