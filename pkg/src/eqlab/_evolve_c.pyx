# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice evolution kernel; see eqlab._evolve_py for semantics."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


cdef void _apply(double complex[:, :, ::1] psi, double complex[:] c,
                 long[:] shifts, double[:] scales,
                 double complex[:, :, ::1] out) noexcept nogil:
    cdef Py_ssize_t B = psi.shape[0]
    cdef Py_ssize_t K = psi.shape[2]
    cdef Py_ssize_t J = shifts.shape[0]
    cdef Py_ssize_t b, j, m, s
    cdef double complex cj, acc
    cdef double complex minus_i_scale
    for b in range(B):
        for m in range(K):
            out[b, 0, m] = 0.0
            out[b, 1, m] = 0.0
        for j in range(J):
            s = shifts[j]
            cj = c[j]
            for m in range(K - s):
                out[b, 1, m + s] = out[b, 1, m + s] + cj * psi[b, 0, m]
                out[b, 0, m] = out[b, 0, m] + cj.conjugate() * psi[b, 1, m + s]
        minus_i_scale = -1j * scales[b]
        for m in range(K):
            out[b, 0, m] = out[b, 0, m] * minus_i_scale
            out[b, 1, m] = out[b, 1, m] * minus_i_scale


def rk4_channels(double complex[:, :, ::1] psi, double[:] scales,
                 long[:] shifts, double complex[:, :] coeffs, double dt):
    """Evolve psi in place over (coeffs.shape[0] - 1) // 2 steps."""
    cdef Py_ssize_t n_steps = (coeffs.shape[0] - 1) // 2
    cdef Py_ssize_t B = psi.shape[0]
    cdef Py_ssize_t K = psi.shape[2]
    cdef Py_ssize_t J = shifts.shape[0]
    k1_np = np.empty((B, 2, K), dtype=np.complex128)
    k2_np = np.empty((B, 2, K), dtype=np.complex128)
    k3_np = np.empty((B, 2, K), dtype=np.complex128)
    k4_np = np.empty((B, 2, K), dtype=np.complex128)
    tmp_np = np.empty((B, 2, K), dtype=np.complex128)
    cdef double complex[:, :, ::1] k1 = k1_np
    cdef double complex[:, :, ::1] k2 = k2_np
    cdef double complex[:, :, ::1] k3 = k3_np
    cdef double complex[:, :, ::1] k4 = k4_np
    cdef double complex[:, :, ::1] tmp = tmp_np
    cdef Py_ssize_t i, b, l, m
    cdef double half_dt = 0.5 * dt
    cdef double sixth_dt = dt / 6.0
    with nogil:
        for i in range(n_steps):
            _apply(psi, coeffs[2 * i], shifts, scales, k1)
            for b in range(B):
                for l in range(2):
                    for m in range(K):
                        tmp[b, l, m] = psi[b, l, m] + half_dt * k1[b, l, m]
            _apply(tmp, coeffs[2 * i + 1], shifts, scales, k2)
            for b in range(B):
                for l in range(2):
                    for m in range(K):
                        tmp[b, l, m] = psi[b, l, m] + half_dt * k2[b, l, m]
            _apply(tmp, coeffs[2 * i + 1], shifts, scales, k3)
            for b in range(B):
                for l in range(2):
                    for m in range(K):
                        tmp[b, l, m] = psi[b, l, m] + dt * k3[b, l, m]
            _apply(tmp, coeffs[2 * i + 2], shifts, scales, k4)
            for b in range(B):
                for l in range(2):
                    for m in range(K):
                        psi[b, l, m] = psi[b, l, m] + sixth_dt * (
                            (k1[b, l, m] + k4[b, l, m])
                            + 2.0 * (k2[b, l, m] + k3[b, l, m]))
