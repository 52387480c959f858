import cmath
import math

import numpy as np
import pytest

from eqlab import core, dynamics, electron, scatter


def random_drive(rng, beta_max=1.5):
    a1 = rng.uniform(0.0, 1.0)
    a2 = rng.uniform(0.0, 1.0)
    return dynamics.DriveParams(
        rng.uniform(0.0, beta_max), rng.uniform(0.1, 10.0),
        rng.uniform(0.0, 1.0),
        a1 * np.exp(1j * rng.uniform(-math.pi, math.pi)),
        a2 * np.exp(1j * rng.uniform(-math.pi, math.pi)))


def test_generator_matches_single_event_map():
    # gamma_e (B - 1) - gamma_0, with B the linear Bloch map of one
    # scattering event, reproduces the master-equation generator exactly.
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = rng.integers(1, 8)
        amps = rng.normal(size=n) + 1j * rng.normal(size=n)
        c = electron.ElectronComb.from_amplitudes(
            {i: amps[i] for i in range(n)})
        beta = rng.uniform(0.0, math.pi / 2.0)
        gamma_e = rng.uniform(0.1, 5.0)
        gamma_0 = rng.uniform(0.0, 1.0)
        p = dynamics.DriveParams.from_comb(beta, gamma_e, gamma_0, c)
        b = scatter.bloch_linear_map(c, beta)
        expect = gamma_e * (b - np.eye(3)) - gamma_0 * np.eye(3)
        assert np.abs(dynamics.generator(p).M - expect).max() < 1e-12


def test_steady_state_is_fixed_point():
    rng = np.random.default_rng(1)
    for _ in range(300):
        p = random_drive(rng)
        if p.gamma_0 < 1e-3:
            continue
        gen = dynamics.generator(p)
        s = dynamics.steady_state(p)
        assert np.abs(gen.M @ s.vector + gen.drift).max() < 1e-10
        assert s.is_physical()


def test_monochromatic_steady_state():
    rng = np.random.default_rng(2)
    for _ in range(100):
        beta = rng.uniform(1e-3, math.pi / 2.0)
        gamma_e = rng.uniform(0.1, 10.0)
        gamma_0 = rng.uniform(1e-3, 10.0)
        p = dynamics.DriveParams(beta, gamma_e, gamma_0, 0.0, 0.0)
        s = dynamics.steady_state(p)
        expect = -gamma_0 / (gamma_0 + 2.0 * gamma_e * math.sin(beta) ** 2)
        assert s.z == pytest.approx(expect, abs=1e-12)
        assert 0.5 * (1.0 + s.z) <= 0.5 + 1e-12


def test_steady_state_rejects_singular_generator():
    with pytest.raises(dynamics.NoSteadyStateError):
        dynamics.steady_state(dynamics.DriveParams(0.0, 1.0, 0.0))


def test_eigenvalues_never_amplify():
    rng = np.random.default_rng(3)
    worst = -np.inf
    for _ in range(10_000):
        p = random_drive(rng)
        worst = max(worst, float(dynamics.eigensystem(p).values.real.max()))
    assert worst <= 1e-12


def test_eigenvalue_ordering():
    p = dynamics.DriveParams(0.3, 2.0, 0.1, 0.5 * np.exp(0.4j),
                             0.7 * np.exp(1.1j))
    vals = dynamics.eigensystem(p).values
    assert vals[0].real >= vals[1].real >= vals[2].real - 1e-15
    paired = sorted(vals[1:], key=lambda v: v.imag)
    assert paired[0].imag <= paired[1].imag


def test_weak_coupling_eigenvalues():
    rng = np.random.default_rng(4)
    beta, gamma_e = 1e-2, 1.0
    for _ in range(50):
        p = dynamics.DriveParams(
            beta, gamma_e, rng.uniform(0.0, 1e-4),
            rng.uniform(0.3, 1.0) * np.exp(1j * rng.uniform(-3.0, 3.0)),
            rng.uniform(0.3, 1.0) * np.exp(1j * rng.uniform(-3.0, 3.0)))
        approx = dynamics.weak_coupling_eigenvalues(p)
        exact = dynamics.eigensystem(p).values
        resid = np.abs(np.sort_complex(approx) - np.sort_complex(exact)).max()
        assert resid <= 10.0 * gamma_e * beta ** 3


def test_i2_decay_modes():
    th2 = 1.3
    p = dynamics.DriveParams(0.4, 2.0, 0.0, 0.0, 0.9 * np.exp(1j * th2))
    modes = dynamics.i2_decay_modes(p)
    g1 = 2.0 * math.sin(0.4) ** 2
    assert modes.lambda_slow == pytest.approx(-g1 * (1.0 - 0.9))
    assert modes.lambda_fast == pytest.approx(-g1 * (1.0 + 0.9))
    angle = math.atan2(modes.v_slow[1], modes.v_slow[0]) % math.pi
    assert angle == pytest.approx(th2 / 2.0, abs=1e-12)
    with pytest.raises(ValueError):
        dynamics.i2_decay_modes(dynamics.DriveParams(0.4, 2.0, 0.0, 0.5, 0.9))


def test_integrate_matches_eigen_decay():
    p = dynamics.DriveParams(0.2, 3.0, 0.5, 0.8, 0.6)
    s0 = core.QubitState(0.0, 0.0, -1.0)
    traj = dynamics.integrate(p, s0, 2.0, 1e-3)
    t_end, s_end = traj[-1]
    assert t_end == pytest.approx(2.0)
    # compare against direct expm of the affine system
    from scipy.linalg import expm
    gen = dynamics.generator(p).augmented()
    v = expm(gen * 2.0) @ np.array([0.0, 0.0, -1.0, 1.0])
    assert np.allclose(s_end.vector, v[:3], atol=1e-9)


def test_integrate_time_dependent_matches_constant():
    p = dynamics.DriveParams(0.2, 3.0, 0.5, 0.8, 0.6)
    s0 = core.QubitState(0.3, -0.1, -0.7)
    a = dynamics.integrate(p, s0, 1.0, 1e-3)[-1][1]
    b = dynamics.integrate_time_dependent(lambda t: p, s0, 1.0, 1e-3)[-1][1]
    assert np.allclose(a.vector, b.vector, atol=1e-9)


def test_rabi_frequency_and_window():
    p = dynamics.PRESETS["wse2_hbn"].drive(0.1)
    lo, hi = dynamics.rabi_window(p)
    assert lo == pytest.approx(0.05)
    assert hi == pytest.approx(1.0)
    lo, hi = dynamics.rabi_window(dynamics.PRESETS["sc_qubit"].drive(0.1))
    assert lo == pytest.approx(2.5e-5)
    assert hi == pytest.approx(1.0)
    assert dynamics.rabi_frequency(p) == pytest.approx(
        40e6 * abs(math.sin(0.2)))
    with pytest.raises(ValueError):
        dynamics.rabi_window(dynamics.DriveParams(0.1, 1.0, 0.1, 0.0, 0.5))


def test_rabi_frequency_from_fft():
    p = dynamics.DriveParams(0.05, 1.0, 1e-4, 1.0, 1.0)
    omega = dynamics.rabi_frequency(p)
    period = 2.0 * math.pi / omega
    dt = period / 1000.0
    traj = dynamics.integrate(p, core.QubitState(0, 0, -1), 40.0 * period, dt)
    z = np.array([s.z for _, s in traj])
    z = z - z.mean()
    freqs = np.fft.rfftfreq(z.size, dt) * 2.0 * math.pi
    peak = freqs[np.argmax(np.abs(np.fft.rfft(z)))]
    assert peak == pytest.approx(omega, rel=0.01)


def _safe_dt(p, period):
    scale = max(float(np.abs(dynamics.eigensystem(p).values).max()),
                p.gamma_0, abs(p.g2))
    return min(period / 1000.0, 0.009 / scale)


def test_z_oscillates_detection():
    hw = dynamics.PRESETS["wse2_hbn"]
    inside = hw.drive(0.3)
    period = 2.0 * math.pi / dynamics.rabi_frequency(inside)
    assert dynamics.z_oscillates(inside, core.QubitState(0, 0, -1),
                                 6.0 * period, _safe_dt(inside, period))
    outside = hw.drive(0.001)
    period = 2.0 * math.pi / dynamics.rabi_frequency(outside)
    assert not dynamics.z_oscillates(outside, core.QubitState(0, 0, -1),
                                     6.0 * period, _safe_dt(outside, period))


def test_inscribed_sphere_and_ideal_comb():
    r_s, z_s = dynamics.inscribed_sphere(0.0)
    assert (r_s, z_s) == (0.5, -0.5)
    # ideal-comb steady states sit exactly on the inscribed sphere
    rng = np.random.default_rng(5)
    for ratio in (0.03, 0.3, 3.0):
        r_s, z_s = dynamics.inscribed_sphere(ratio)
        for _ in range(30):
            beta = rng.uniform(1e-3, math.pi / 2.0)
            phi = rng.uniform(-math.pi, math.pi)
            p = dynamics.DriveParams(beta, 1.0, ratio,
                                     cmath.exp(1j * phi),
                                     cmath.exp(2j * phi))
            s = dynamics.steady_state(p)
            dist = math.sqrt(s.x ** 2 + s.y ** 2 + (s.z - z_s) ** 2)
            assert dist == pytest.approx(r_s, abs=1e-12)


def test_accessible_region_covers_sphere_quickly():
    sample = dynamics.accessible_region(0.3, 2048, n_sphere=100, seed=7)
    assert sample.covers_sphere(tol=0.03)


def test_drive_params_validation():
    with pytest.raises(ValueError):
        dynamics.DriveParams(-0.1, 1.0, 0.0)
    with pytest.raises(ValueError):
        dynamics.DriveParams(0.1, 1.0, 0.0, 1.5, 0.0)
