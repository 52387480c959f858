import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import jv

from eqlab import electron


def random_comb(rng, max_peaks=10):
    n = rng.integers(1, max_peaks + 1)
    amps = rng.normal(size=n) + 1j * rng.normal(size=n)
    n0 = int(rng.integers(-5, 5))
    return electron.ElectronComb.from_amplitudes(
        {n0 + i: amps[i] for i in range(n)})


def test_equal_comb_normalization_and_phases():
    c = electron.equal_comb(4, 0.5)
    assert np.linalg.norm(c.amplitudes) == pytest.approx(1.0)
    assert c.n_min == 1
    assert np.allclose(np.angle(c.amplitudes),
                       0.5 * np.arange(1, 5), atol=1e-14)


def test_equal_comb_overlaps_closed_form():
    # I_j of N identical peaks with phase step phi: (1 - j/N) e^{-i j phi}
    for N in (1, 2, 5, 20):
        for phi in (0.0, 0.9, -2.2):
            c = electron.equal_comb(N, phi)
            for j in (1, 2, 3):
                expect = max(1.0 - j / N, 0.0) * np.exp(-1j * j * phi)
                assert electron.overlap_integral(c, j) == pytest.approx(
                    expect, abs=1e-12)


def test_overlap_integral_rejects_bad_lag():
    c = electron.equal_comb(3)
    with pytest.raises(ValueError):
        electron.overlap_integral(c, 0)


def test_overlap_bounded_many_random_combs():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        n = rng.integers(1, 9)
        amps = rng.normal(size=n) + 1j * rng.normal(size=n)
        amps /= np.linalg.norm(amps)
        for j in (1, 2):
            if n > j:
                val = np.vdot(amps[j:], amps[:-j])
                assert abs(val) <= 1.0 + 1e-12


@settings(max_examples=200)
@given(st.integers(1, 8), st.integers(-4, 4), st.floats(-3.0, 3.0),
       st.integers(0, 2 ** 32 - 1))
def test_overlap_invariances(n_peaks, shift, global_phase, seed):
    rng = np.random.default_rng(seed)
    c = random_comb(rng, n_peaks)
    shifted = c.shifted(shift)
    rotated = electron.ElectronComb(
        c.n_min, c.amplitudes * np.exp(1j * global_phase))
    for j in (1, 2):
        base = electron.overlap_integral(c, j)
        assert electron.overlap_integral(shifted, j) == pytest.approx(
            base, abs=1e-12)
        assert electron.overlap_integral(rotated, j) == pytest.approx(
            base, abs=1e-12)


def test_overlap_integrals_pair():
    c = electron.equal_comb(3)
    pair = electron.overlap_integrals(c)
    assert pair.I1 == pytest.approx(2.0 / 3.0)
    assert pair.I2 == pytest.approx(1.0 / 3.0)


def test_overlap_integrals_rejects_superunit():
    with pytest.raises(ValueError):
        electron.OverlapIntegrals(1.2, 0.0)


def test_two_sideband_comb():
    c = electron.two_sideband_comb(0.8, 0.5, 0.3)
    assert c.n_min == -1
    assert np.linalg.norm(c.amplitudes) == pytest.approx(1.0)
    a0, a1 = electron.comb_alphas(0.8, 0.5)
    assert a0 ** 2 + a1 ** 2 == pytest.approx(1.0)
    assert abs(c.amplitudes[1]) == pytest.approx(a0)


def test_bessel_against_scipy():
    for x in (0.0, 0.3, 2.7, 9.5, -4.2):
        ours = electron.bessel_j_array(30, x)
        ref = jv(np.arange(31), x)
        assert np.abs(ours - ref).max() < 1e-12


def test_bessel_negative_order():
    assert electron.bessel_j(-3, 1.7) == pytest.approx(-jv(3, 1.7), abs=1e-13)


def test_pinem_vanishes_at_full_revival():
    # theta = 2 pi N: the Bessel cross sum collapses to sum J_m J_{m+1} = 0
    for theta in (2.0 * math.pi, 4.0 * math.pi):
        val = electron.pinem_drift_integral(
            electron.PinemParams(0.23, theta), 1)
        assert abs(val) <= 1e-12


def test_pinem_i1_max_window():
    best = electron.pinem_I1_max()
    assert 0.580 <= best <= 0.583


def test_pinem_spread_damps_overlap():
    narrow = abs(electron.pinem_drift_integral(
        electron.PinemParams(0.3, math.pi, 0.0), 1))
    wide = abs(electron.pinem_drift_integral(
        electron.PinemParams(0.3, math.pi, 0.3), 1))
    assert wide < narrow
