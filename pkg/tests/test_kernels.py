import numpy as np

from eqlab import _evolve_py, _kernels


def make_inputs(seed=0, batch=3, sites=24, steps=40, channels=3):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(batch, 2, sites)) + 1j * rng.normal(
        size=(batch, 2, sites))
    psi /= np.sqrt((np.abs(psi) ** 2).sum(axis=(1, 2)))[:, None, None]
    scales = rng.uniform(0.5, 1.5, size=batch)
    shifts = np.array(sorted(rng.choice(sites // 4, channels, replace=False)),
                      dtype=np.int64)
    coeffs = 0.05 * (rng.normal(size=(2 * steps + 1, channels))
                     + 1j * rng.normal(size=(2 * steps + 1, channels)))
    return psi, scales, shifts, coeffs


def test_backend_is_exposed():
    assert _kernels.BACKEND in ("cython", "python")


def test_backends_agree():
    psi, scales, shifts, coeffs = make_inputs()
    a = psi.copy()
    b = psi.copy()
    _kernels.rk4_channels(a, scales, shifts, coeffs, 1e-3)
    _evolve_py.rk4_channels(b, scales, shifts, coeffs, 1e-3)
    assert np.abs(a - b).max() < 1e-12


def test_kernel_is_reproducible():
    psi, scales, shifts, coeffs = make_inputs(seed=5)
    a = psi.copy()
    b = psi.copy()
    _kernels.rk4_channels(a, scales, shifts, coeffs, 1e-3)
    _kernels.rk4_channels(b, scales, shifts, coeffs, 1e-3)
    assert np.array_equal(a, b)


def test_zero_coupling_is_identity():
    psi, scales, shifts, coeffs = make_inputs(seed=2)
    a = psi.copy()
    _kernels.rk4_channels(a, scales, shifts, np.zeros_like(coeffs), 1e-3)
    assert np.array_equal(a, psi)
