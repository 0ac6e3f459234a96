"""NumPy implementation of the hot density kernels.

Same flat-array contracts as the compiled module ``_ckernels``; the
dispatcher in ``homsim._kernels`` picks whichever is available.  All
exponents are arranged to be <= 0, so the closed-form kernel never
overflows regardless of pulse delay or detection-time delay.
"""
import numpy as np

NAME = "python"


def gaussian_pair_density(t0, tau, delta_tau, delta, sign, out):
    """Closed-form two-detection density for the delayed/detuned Gaussian pair.

    sign=-1 gives the opposite-port (minus) combination, sign=+1 the
    same-port (plus) combination.  ``t0``, ``tau`` and ``out`` are flat
    float64 arrays of equal length.
    """
    expo = -4.0 * t0 * (t0 + tau) - delta_tau * delta_tau - 2.0 * tau * tau
    twist = 2.0 * tau * delta_tau
    np.add(np.exp(expo + twist), np.exp(expo - twist), out=out)
    out *= 0.5
    out += sign * np.cos(tau * delta) * np.exp(expo)
    out *= 1.0 / np.pi
    np.maximum(out, 0.0, out=out)
    return out


def mode_pair_density(z1a, z2a, z1b, z2b, sign, out):
    """0.25 * |z1b*z2a + sign * z2b*z1a|^2 elementwise on flat complex arrays."""
    amp = z1b * z2a + sign * (z2b * z1a)
    np.multiply(amp.real, amp.real, out=out)
    out += amp.imag * amp.imag
    out *= 0.25
    return out


def shifted_pair_integral(z1, z2, shifts, start, count, dt, sign, out):
    """Riemann integral over the first detection time, one value per shift.

    ``z1``/``z2`` hold mode values on an extended uniform grid; the window
    of ``count`` nodes starting at ``start`` is the integration range and
    ``shifts[m]`` is the detection-time delay in grid steps.
    """
    j = slice(start, start + count)
    w1 = z1[j]
    w2 = z2[j]
    for m, k in enumerate(shifts):
        js = slice(start + k, start + k + count)
        amp = z1[js] * w2 + sign * (z2[js] * w1)
        out[m] = 0.25 * dt * np.sum(amp.real * amp.real + amp.imag * amp.imag)
    return out
