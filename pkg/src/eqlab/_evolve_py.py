"""Pure-numpy reference implementation of the lattice evolution kernel.

Semantics shared with the compiled extension ``eqlab._evolve_c``: fixed-step
4-stage Runge-Kutta integration of ``dpsi/dt = -i * scale_b * A(t) psi`` for a
batch of joint states ``psi[b, level, site]``, where

    (A(t) psi)[1, m + shift_j] += c_j(t) * psi[0, m]
    (A(t) psi)[0, m]          += conj(c_j(t)) * psi[1, m + shift_j]

``coeffs[s, j]`` samples ``c_j`` on the half-step grid ``t_s = s * dt / 2``;
step ``i`` uses rows ``2i``, ``2i + 1`` and ``2i + 2``.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _apply(psi: np.ndarray, c: np.ndarray, shifts: np.ndarray,
           scales: np.ndarray, out: np.ndarray) -> np.ndarray:
    out[:] = 0.0
    K = psi.shape[2]
    for j, s in enumerate(shifts):
        out[:, 1, s:] += c[j] * psi[:, 0, :K - s]
        out[:, 0, :K - s] += np.conj(c[j]) * psi[:, 1, s:]
    out *= -1j * scales[:, None, None]
    return out


def rk4_channels(psi: np.ndarray, scales: np.ndarray, shifts: np.ndarray,
                 coeffs: np.ndarray, dt: float) -> None:
    """Evolve psi in place over (coeffs.shape[0] - 1) // 2 steps."""
    n_steps = (coeffs.shape[0] - 1) // 2
    k1 = np.empty_like(psi)
    k2 = np.empty_like(psi)
    k3 = np.empty_like(psi)
    k4 = np.empty_like(psi)
    tmp = np.empty_like(psi)
    for i in range(n_steps):
        c0 = coeffs[2 * i]
        ch = coeffs[2 * i + 1]
        c1 = coeffs[2 * i + 2]
        _apply(psi, c0, shifts, scales, k1)
        np.multiply(k1, 0.5 * dt, out=tmp)
        tmp += psi
        _apply(tmp, ch, shifts, scales, k2)
        np.multiply(k2, 0.5 * dt, out=tmp)
        tmp += psi
        _apply(tmp, ch, shifts, scales, k3)
        np.multiply(k3, dt, out=tmp)
        tmp += psi
        _apply(tmp, c1, shifts, scales, k4)
        k2 += k3
        k2 *= 2.0
        k1 += k4
        k1 += k2
        k1 *= dt / 6.0
        psi += k1
