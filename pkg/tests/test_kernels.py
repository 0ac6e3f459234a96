"""Backend parity: compiled and NumPy kernels agree to rounding level.

Bitwise identity is not expected (libm vs SIMD exp, sequential vs
pairwise summation); agreement must stay at the accumulated-ulp scale.
"""
import numpy as np
import pytest

from homsim._kernels import py_kernels

compiled = pytest.importorskip(
    "homsim._kernels._ckernels", reason="compiled kernel core not built")


@pytest.fixture
def arrays(rng):
    n = 4096
    t0 = rng.uniform(-4, 4, n)
    tau = rng.uniform(-4, 4, n)
    z = [(rng.normal(size=n) + 1j * rng.normal(size=n)) * 0.3
         for _ in range(4)]
    return t0, tau, [np.ascontiguousarray(a, dtype=np.complex128) for a in z]


def test_gaussian_pair_density_parity(arrays):
    t0, tau, _ = arrays
    for sign in (-1, +1):
        out_py = np.empty(t0.size)
        out_c = np.empty(t0.size)
        py_kernels.gaussian_pair_density(t0, tau, 0.8, 5.0, sign, out_py)
        compiled.gaussian_pair_density(t0, tau, 0.8, 5.0, sign, out_c)
        np.testing.assert_allclose(out_c, out_py, rtol=1e-10, atol=1e-17)


def test_mode_pair_density_parity(arrays):
    _, _, (z1a, z2a, z1b, z2b) = arrays
    for sign in (-1, +1):
        out_py = np.empty(z1a.size)
        out_c = np.empty(z1a.size)
        py_kernels.mode_pair_density(z1a, z2a, z1b, z2b, sign, out_py)
        compiled.mode_pair_density(z1a, z2a, z1b, z2b, sign, out_c)
        np.testing.assert_allclose(out_c, out_py, rtol=1e-12, atol=0)


def test_shifted_pair_integral_parity(arrays):
    _, _, (z1, z2, _, _) = arrays
    shifts = np.arange(-64, 65, dtype=np.int64) * 8
    start, count, dt = 600, 2800, 0.004
    out_py = np.empty(shifts.size)
    out_c = np.empty(shifts.size)
    py_kernels.shifted_pair_integral(z1, z2, shifts, start, count, dt, -1,
                                     out_py)
    compiled.shifted_pair_integral(z1, z2, shifts, start, count, dt, -1, out_c)
    # atol covers the zero-shift bin, where one backend cancels exactly and
    # the other leaves a squared-ulp residue
    np.testing.assert_allclose(out_c, out_py, rtol=1e-10, atol=1e-30)


def test_dispatcher_broadcasts():
    from homsim import _kernels

    val = _kernels.gaussian_pair_density(0.3, 0.9, 0.5, 2.0)
    assert isinstance(val, float)
    grid = _kernels.gaussian_pair_density(
        np.linspace(-1, 1, 5)[:, None], np.linspace(-1, 1, 3)[None, :],
        0.5, 2.0)
    assert grid.shape == (5, 3)
