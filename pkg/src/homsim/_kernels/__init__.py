"""Hot-kernel backend selection.

The compiled Cython core is used when it has been built; otherwise the
NumPy implementation takes over transparently.  Override with the
environment variable ``HOMSIM_BACKEND=python`` or ``=compiled`` (the
latter raises if the extension is missing).  ``benchmarks/bench_kernels.py``
compares the two.
"""
import os

import numpy as np

_requested = os.environ.get("HOMSIM_BACKEND", "auto").lower()

if _requested == "python":
    from . import py_kernels as _impl
elif _requested == "compiled":
    from . import _ckernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        from . import py_kernels as _impl

BACKEND = _impl.NAME


def _flat(arr, dtype):
    return np.ascontiguousarray(arr, dtype=dtype).ravel()


def gaussian_pair_density(t0, tau, delta_tau, delta, sign=-1):
    """Two-detection density of the delayed/detuned Gaussian pulse pair.

    Evaluates, elementwise over broadcast ``t0``/``tau``, the closed-form
    density for one photon detected at ``t0`` and one at ``t0 + tau``;
    ``sign=-1`` selects the opposite-port combination, ``sign=+1`` the
    same-port one.  Overflow-safe for arbitrarily large delays.
    """
    t0b, taub = np.broadcast_arrays(np.asarray(t0, dtype=float),
                                    np.asarray(tau, dtype=float))
    out = np.empty(t0b.size, dtype=np.float64)
    _impl.gaussian_pair_density(_flat(t0b, np.float64), _flat(taub, np.float64),
                                float(delta_tau), float(delta), int(sign), out)
    out = out.reshape(t0b.shape)
    return float(out) if out.ndim == 0 else out


def mode_pair_density(z1a, z2a, z1b, z2b, sign=-1):
    """0.25*|z1b*z2a + sign*z2b*z1a|^2 over broadcast complex inputs.

    ``a`` marks mode values at the first detection time, ``b`` at the
    second; ``z1``/``z2`` are the two input-port mode functions.
    """
    arrs = np.broadcast_arrays(*(np.asarray(z, dtype=np.complex128)
                                 for z in (z1a, z2a, z1b, z2b)))
    out = np.empty(arrs[0].size, dtype=np.float64)
    _impl.mode_pair_density(*(_flat(a, np.complex128) for a in arrs),
                            int(sign), out)
    out = out.reshape(arrs[0].shape)
    return float(out) if out.ndim == 0 else out


def shifted_pair_integral(z1, z2, shifts, start, count, dt, sign=-1):
    """Integrate the pair density over the first detection time.

    ``z1``/``z2`` are mode values on a shared extended uniform grid with
    spacing ``dt``.  The integral runs over the ``count`` nodes beginning
    at index ``start``; entry ``m`` of the result uses a detection-time
    delay of ``shifts[m]`` grid steps.
    """
    z1 = _flat(z1, np.complex128)
    z2 = _flat(z2, np.complex128)
    shifts = _flat(shifts, np.int64)
    start = int(start)
    count = int(count)
    if z1.shape != z2.shape:
        raise ValueError("mode arrays must have equal length")
    if count < 1 or start < 0 or start + count > z1.size:
        raise ValueError("integration window outside the grid")
    if shifts.size and (start + shifts.min() < 0
                        or start + count + shifts.max() > z1.size):
        raise ValueError("shifted window outside the grid")
    out = np.empty(shifts.size, dtype=np.float64)
    _impl.shifted_pair_integral(z1, z2, shifts, start, count,
                                float(dt), int(sign), out)
    return out
