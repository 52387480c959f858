"""Compares the compiled and pure-python lattice evolution kernels.

Run: python benchmarks/bench_kernels.py [--batch B] [--sites K] [--steps N]
"""

import argparse
import time

import numpy as np


def make_inputs(batch, sites, steps, channels=5, seed=0):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(batch, 2, sites)) + 1j * rng.normal(size=(batch, 2, sites))
    psi /= np.sqrt((np.abs(psi) ** 2).sum(axis=(1, 2)))[:, None, None]
    scales = rng.uniform(0.5, 1.5, size=batch)
    shifts = np.arange(1, channels + 1, dtype=np.int64)
    t = np.linspace(0.0, 1.0, 2 * steps + 1)
    det = np.linspace(-5.0, 5.0, channels)
    coeffs = 0.05 * np.sin(np.pi * t)[:, None] * np.exp(1j * np.outer(t, det))
    return psi, scales, shifts, np.ascontiguousarray(coeffs)


def run(kernel, args):
    psi, scales, shifts, coeffs = make_inputs(args.batch, args.sites, args.steps)
    t0 = time.perf_counter()
    kernel(psi, scales, shifts, coeffs, 1.0 / args.steps)
    return time.perf_counter() - t0, psi


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--batch", type=int, default=64)
    parser.add_argument("--sites", type=int, default=48)
    parser.add_argument("--steps", type=int, default=2000)
    args = parser.parse_args()

    from eqlab import _evolve_py

    t_py, psi_py = run(_evolve_py.rk4_channels, args)
    print(f"python backend: {t_py:.3f} s")
    try:
        from eqlab import _evolve_c
    except ImportError:
        print("cython backend unavailable (pure-python install)")
        return 0
    t_c, psi_c = run(_evolve_c.rk4_channels, args)
    print(f"cython backend: {t_c:.3f} s  (speedup x{t_py / t_c:.1f})")
    diff = np.abs(psi_py - psi_c).max()
    print(f"max |difference|: {diff:.3e}")
    return 0 if diff < 1e-12 else 1


if __name__ == "__main__":
    raise SystemExit(main())
