# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled density kernels: fused single-pass versions of py_kernels."""
from libc.math cimport exp, cos, pi

NAME = "compiled"


def gaussian_pair_density(double[::1] t0, double[::1] tau,
                          double delta_tau, double delta, int sign,
                          double[::1] out):
    cdef Py_ssize_t i, n = t0.shape[0]
    cdef double expo, twist, p
    for i in range(n):
        expo = -4.0 * t0[i] * (t0[i] + tau[i]) \
            - delta_tau * delta_tau - 2.0 * tau[i] * tau[i]
        twist = 2.0 * tau[i] * delta_tau
        p = 0.5 * (exp(expo + twist) + exp(expo - twist)) \
            + sign * cos(tau[i] * delta) * exp(expo)
        p /= pi
        out[i] = p if p > 0.0 else 0.0
    return out.base


def mode_pair_density(double complex[::1] z1a, double complex[::1] z2a,
                      double complex[::1] z1b, double complex[::1] z2b,
                      int sign, double[::1] out):
    cdef Py_ssize_t i, n = z1a.shape[0]
    cdef double complex amp
    for i in range(n):
        amp = z1b[i] * z2a[i] + sign * (z2b[i] * z1a[i])
        out[i] = 0.25 * (amp.real * amp.real + amp.imag * amp.imag)
    return out.base


def shifted_pair_integral(double complex[::1] z1, double complex[::1] z2,
                          long[::1] shifts, long start, long count,
                          double dt, int sign, double[::1] out):
    cdef Py_ssize_t m, j, k, n_shifts = shifts.shape[0]
    cdef double acc
    cdef double complex amp
    for m in range(n_shifts):
        k = shifts[m]
        acc = 0.0
        for j in range(start, start + count):
            amp = z1[j + k] * z2[j] + sign * (z2[j + k] * z1[j])
            acc += amp.real * amp.real + amp.imag * amp.imag
        out[m] = 0.25 * dt * acc
    return out.base
