"""Entrainment of the emitter coherence phase to a swept comb phase.

With I1 = 0 and gamma_0 = 0 the xy-plane dynamics reduces to polar
equations for (r, theta): the radial decay is slowest along the half phase
of I2, and sweeping theta_2 linearly at rate omega drags the coherence
phase along whenever kappa = omega / (2 g1 |I2|) <= 1.  The coordinate
singularity at r = 0 is avoided by integrating Cartesian (x, y) internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DriveParams, integrate_time_dependent
from .core import QubitState


@dataclass(frozen=True)
class LockParams:
    """Dephasing rate g1 = gamma_e sin^2(beta), modulation magnitude |I2|,
    sweep rate omega of theta_2, and the initial comb phase theta_2(0)."""

    g1: float
    I2_abs: float
    omega: float
    theta2_0: float = 0.0

    def __post_init__(self):
        if self.g1 <= 0.0 or not 0.0 < self.I2_abs <= 1.0:
            raise ValueError("need g1 > 0 and |I2| in (0, 1]")

    def theta2(self, t: float) -> float:
        return self.theta2_0 + self.omega * t


def polar_rates(r: float, theta: float, p: LockParams,
                theta2: float) -> tuple[float, float]:
    """(dr/dt, dtheta/dt) of the polar equations of motion."""
    if r < 0.0:
        raise ValueError("radius must be non-negative")
    dr = p.g1 * r * (-1.0 + p.I2_abs * math.cos(theta2 - 2.0 * theta))
    dtheta = p.g1 * p.I2_abs * math.sin(theta2 - 2.0 * theta)
    return dr, dtheta


def fixed_points(theta2: float) -> list[tuple[float, str]]:
    """Phase fixed points theta = (n pi + theta2) / 2 in [0, 2 pi):
    even n stable (slowed decay), odd n unstable (accelerated)."""
    out = []
    for n in range(4):
        theta = ((n * math.pi + theta2) / 2.0) % (2.0 * math.pi)
        out.append((theta, "stable" if n % 2 == 0 else "unstable"))
    return sorted(out)


def kappa(p: LockParams) -> float:
    """kappa = omega / (2 g1 |I2|); locking is possible iff kappa <= 1."""
    return p.omega / (2.0 * p.g1 * p.I2_abs)


def locked_offset(p: LockParams) -> float:
    """Fixed point of the phase difference, Delta theta_0 = asin(kappa)."""
    k = kappa(p)
    if k > 1.0:
        raise ValueError(f"kappa = {k:g} > 1: no phase locking")
    return math.asin(k)


def relaxation_time(p: LockParams) -> float:
    """1 / (2 g1 |I2| sqrt(1 - kappa^2)), the lock-in time constant."""
    k = kappa(p)
    if k >= 1.0:
        raise ValueError("no finite relaxation time at kappa >= 1")
    return 1.0 / (2.0 * p.g1 * p.I2_abs * math.sqrt(1.0 - k * k))


def locked_transient(p: LockParams, r0: float, delta0: float,
                     t: float) -> tuple[float, float, float]:
    """Closed-form (r, delta, theta), valid for kappa << 1 and |I2| near 1.

    delta is the deviation of the phase difference from its fixed point;
    the initial coherence phase is theta(0) = (theta2(0) - asin(kappa)
    - delta0) / 2.  The radial exponent keeps the exact locked secular
    rate g1 (1 - |I2| sqrt(1 - kappa^2)), which tends to g1 kappa^2 / 2
    in the |I2| -> 1 limit.
    """
    k = kappa(p)
    rate = 2.0 * p.g1 * p.I2_abs
    decay = math.exp(-rate * t)
    # locked secular rate; reduces to g1 kappa^2 / 2 as |I2| -> 1
    secular = p.g1 * (1.0 - p.I2_abs * math.sqrt(max(0.0, 1.0 - k * k)))
    if k > 0.0:
        r = r0 * math.exp(-secular * t - 0.5 * p.g1 * k * delta0
                          / (2.0 * rate) * (1.0 - decay))
    else:
        r = r0 * math.exp(-secular * t)
    delta = delta0 * decay
    theta = (0.5 * p.omega * t - 0.5 * k
             + 0.5 * (p.theta2_0 - delta0 * decay))
    return r, delta, theta


def drive_of_t(p: LockParams):
    """DriveParams factory with the swept I2 phase (I1 = 0, gamma_0 = 0)."""

    def at(t: float) -> DriveParams:
        return DriveParams(math.pi / 2.0, p.g1, 0.0, 0.0,
                           p.I2_abs * np.exp(1j * p.theta2(t)))

    return at


def simulate(p: LockParams, r0: float, theta0: float, t_end: float,
             dt: float) -> list[tuple[float, float, float, float, float]]:
    """Numerical trajectory rows (t, r, theta, theta2, delta_theta).

    theta is unwrapped; delta_theta = theta2 - 2 theta.  Internally the
    Cartesian components are integrated (the polar form is singular at
    r = 0).
    """
    s0 = QubitState(r0 * math.cos(theta0), r0 * math.sin(theta0), 0.0)
    traj = integrate_time_dependent(drive_of_t(p), s0, t_end, dt)
    t = np.array([ti for ti, _ in traj])
    x = np.array([s.x for _, s in traj])
    y = np.array([s.y for _, s in traj])
    r = np.hypot(x, y)
    two_theta = np.unwrap(np.arctan2(y, x) * 2.0)
    theta = two_theta / 2.0
    theta = theta + (theta0 - theta[0])  # anchor the unwrapped branch
    theta2 = p.theta2_0 + p.omega * t
    delta = theta2 - 2.0 * theta
    return list(zip(t, r, theta, theta2, delta))


def lock_detected(p: LockParams, r0: float = 0.9, theta0: float | None = None,
                  n_relax: float = 20.0, tol: float = 1e-3) -> bool:
    """Integrates the sweep and tests for entrainment.

    Locked: |delta_theta(t) - asin(kappa)| < tol sustained over the last 5
    relaxation times of a 20-relaxation-time run.  For kappa > 1 the phase
    difference winds without bound and the test reports False.
    """
    k = kappa(p)
    if theta0 is None:
        theta0 = (p.theta2_0 - math.asin(min(k, 1.0))) / 2.0
    if k < 1.0:
        horizon = n_relax * relaxation_time(p)
    else:
        horizon = n_relax / (2.0 * p.g1 * p.I2_abs)
    dt = min(0.01 / (p.g1 * (1.0 + abs(p.omega) / p.g1)), horizon / 2000.0)
    rows = simulate(p, r0, theta0, horizon, dt)
    t = np.array([row[0] for row in rows])
    delta = np.array([row[4] for row in rows])
    if k > 1.0 or np.ptp(delta) > 2.0 * math.pi:
        return False
    tail = delta[t >= t[-1] - 5.0 * relaxation_time(p)]
    return bool(np.all(np.abs(tail - math.asin(k)) < tol))
