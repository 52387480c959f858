import math

import numpy as np
import pytest

from eqlab import core, electron, scatter


def random_comb(rng, max_peaks=8):
    n = rng.integers(1, max_peaks + 1)
    amps = rng.normal(size=n) + 1j * rng.normal(size=n)
    n0 = int(rng.integers(-4, 4))
    return electron.ElectronComb.from_amplitudes(
        {n0 + i: amps[i] for i in range(n)})


def random_state(rng, pure=False):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    if not pure:
        v *= rng.uniform(0.0, 1.0)
    return core.QubitState(*v)


def test_smatrix_preserves_norm():
    rng = np.random.default_rng(1)
    for _ in range(50):
        c = random_comb(rng)
        s = random_state(rng)
        j = scatter.JointState.from_qubit(s, c)
        out = scatter.apply_smatrix(j, scatter.CouplingStrength(
            rng.uniform(0.0, math.pi / 2.0), rng.uniform(-math.pi, math.pi)))
        assert out.norm == pytest.approx(1.0, abs=1e-12)


def test_smatrix_underflow_detected():
    c = electron.equal_comb(2)
    j = scatter.JointState.from_pure(np.array([1.0, 0.0]), c, pad=0)
    with pytest.raises(ValueError):
        scatter.apply_smatrix(j, scatter.CouplingStrength(0.3))


def test_smatrix_zero_beta_is_identity():
    rng = np.random.default_rng(2)
    c = random_comb(rng)
    s = random_state(rng)
    j = scatter.JointState.from_qubit(s, c)
    out = scatter.apply_smatrix(j, scatter.CouplingStrength(0.0))
    assert np.allclose(out.qe_state().vector, s.vector, atol=1e-14)


def test_reduced_map_matches_joint_partial_trace():
    # The closed-form reduced map must agree with applying the scattering
    # matrix to the joint state and tracing out the electron.
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(300):
        c = random_comb(rng)
        s = random_state(rng, pure=bool(rng.integers(0, 2)))
        beta = scatter.CouplingStrength(rng.uniform(0.0, math.pi / 2.0),
                                        rng.uniform(-math.pi, math.pi))
        closed = scatter.qe_after_interaction(s, c, beta)
        joint = scatter.apply_smatrix(scatter.JointState.from_qubit(s, c),
                                      beta)
        worst = max(worst, float(np.abs(
            closed.vector - joint.qe_state().vector).max()))
    assert worst < 1e-12


def test_bloch_linear_map_consistency():
    rng = np.random.default_rng(4)
    c = random_comb(rng)
    m = scatter.bloch_linear_map(c, 0.4)
    for _ in range(20):
        s = random_state(rng)
        closed = scatter.qe_after_interaction(s, c,
                                              scatter.CouplingStrength(0.4))
        assert np.allclose(m @ s.vector, closed.vector, atol=1e-12)
    # the map is unital: the maximally mixed state is a fixed point
    mixed = scatter.qe_after_interaction(core.QubitState(0, 0, 0), c,
                                         scatter.CouplingStrength(0.4))
    assert np.abs(mixed.vector).max() < 1e-14


def test_ground_state_prob_ideal_formula():
    # Ideal modulation: I1 = e^{i phi}, I2 = e^{2 i phi}. The reduced map
    # with those overlaps must reproduce the printed ground probability for
    # the emitter cos(theta)|g> + sin(theta) e^{-i gamma}|e>.
    rng = np.random.default_rng(5)
    for _ in range(100):
        theta = rng.uniform(0.0, math.pi)
        gamma = rng.uniform(-math.pi, math.pi)
        phi = rng.uniform(-math.pi, math.pi)
        beta = rng.uniform(0.0, math.pi / 2.0)
        rho0 = core.bloch_to_density(core.pure_state(theta, -gamma))
        rho1 = scatter._reduced_map_real_beta(
            rho0, np.exp(1j * phi), np.exp(2j * phi), beta)
        pg = 0.5 * (1.0 - core.density_to_bloch(rho1).z)
        assert pg == pytest.approx(
            scatter.ground_state_prob_ideal(theta, gamma, phi, beta),
            abs=1e-12)


def test_ideal_comb_preserves_purity_in_the_limit():
    s = core.pure_state(0.8, 0.3)
    beta = scatter.CouplingStrength(1.1)
    losses = []
    for n in (10, 100, 1000):
        after = scatter.qe_after_interaction(s, scatter.equal_comb_cached(n),
                                             beta)
        losses.append(1.0 - core.purity(after))
    assert losses[0] > losses[1] > losses[2]
    assert losses[2] < 5e-3


def test_purity_loss_bound_values():
    assert scatter.purity_loss_bound(2000, math.pi / 2.0) == pytest.approx(
        1e-3)
    # the printed bound describes N > 1; at N = 1 it degenerates to 0
    # while the actual worst-case loss approaches 1
    assert scatter.purity_loss_bound(1, math.pi / 2.0) == 0.0
    assert scatter.max_purity_loss(1, math.pi / 2.0) == pytest.approx(
        1.0, abs=1e-9)


def test_max_purity_loss_equals_bound_at_max_coupling():
    for n in (2, 10, 100):
        worst = scatter.max_purity_loss(n, math.pi / 2.0)
        assert worst == pytest.approx(scatter.purity_loss_bound(
            n, math.pi / 2.0), abs=1e-9)


def test_max_purity_loss_exceeds_dipole_slice_at_weak_coupling():
    # The printed bound tracks the maximal-dipole initial condition; for
    # beta < pi/4 other initial states lose more purity, so the bound is
    # not a pointwise-in-beta envelope. The acceptance criteria hold at
    # the argmax beta = pi/2 where the worst case and the bound coincide.
    n, beta = 2, 0.2
    assert scatter.max_purity_loss(n, beta) > scatter.purity_loss_bound(
        n, beta)


def test_concurrence_closed_form_vs_joint():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(200):
        n = rng.integers(1, 7)
        f = rng.uniform(0.05, 1.0, size=n)
        phi = rng.uniform(-math.pi, math.pi)
        n0 = int(rng.integers(-3, 3))
        c = electron.ElectronComb.from_amplitudes(
            {n0 + i: f[i] * np.exp(1j * phi * (n0 + i)) for i in range(n)})
        s = random_state(rng, pure=True)
        beta = rng.uniform(0.0, math.pi / 2.0)
        closed = scatter.concurrence_after(s, c, beta, phi)
        joint = scatter.concurrence_after_joint(s, c, beta)
        worst = max(worst, abs(closed - joint))
    assert worst < 1e-10


def test_concurrence_single_peak_closed_form():
    rng = np.random.default_rng(7)
    c = electron.ElectronComb.from_amplitudes({0: 1.0})
    for _ in range(50):
        s = random_state(rng, pure=True)
        beta = rng.uniform(0.0, math.pi / 2.0)
        d2 = s.x ** 2 + s.y ** 2
        sb = math.sin(beta)
        expect = sb * math.sqrt(max(
            4.0 - 2.0 * d2 - (3.0 + s.z ** 2 - 2.0 * d2) * sb * sb, 0.0))
        assert scatter.concurrence_after_joint(s, c, beta) == pytest.approx(
            expect, abs=1e-12)


def test_concurrence_vanishes_for_large_combs():
    s = core.pure_state(0.8, 0.1)
    vals = [scatter.concurrence_after(s, scatter.equal_comb_cached(n), 0.9)
            for n in (1, 10, 100, 1000)]
    assert vals[0] > vals[1] > vals[2] > vals[3]
    assert vals[3] < 0.1


def test_coupling_strength_validation():
    with pytest.raises(ValueError):
        scatter.CouplingStrength(-0.1)
    with pytest.warns(UserWarning):
        scatter.CouplingStrength(3.5)


def test_paper_overlaps_conjugation():
    rng = np.random.default_rng(8)
    c = random_comb(rng)
    i1, i2 = scatter.paper_overlaps(c)
    assert i1 == pytest.approx(np.conj(electron.overlap_integral(c, 1)),
                               abs=1e-14)
    assert i2 == pytest.approx(np.conj(electron.overlap_integral(c, 2)),
                               abs=1e-14)
