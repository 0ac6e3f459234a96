"""Detection densities behind the 50:50 beam splitter.

Two single photons in modes zeta1, zeta2 enter ports 1 and 2; detectors
watch output ports 3 and 4.  Everything observable follows from the
two-time amplitude zeta1(tb)*zeta2(ta) -+ zeta2(tb)*zeta1(ta): the minus
combination is the opposite-port (coincidence) channel, identically
zero for equal detection times, and the plus combination is the
same-port channel.  All functions are pure and broadcast over their
time arguments.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ZeroDensityInstant
from .wavepacket import (
    DEFAULT_GRID,
    ModeFunction,
    SpectralAmplitude,
    TimeGrid,
    detection_density,
    from_spectrum,
    overlap,
)

__all__ = [
    "PortPair",
    "ConditionalState",
    "PortPairProbabilities",
    "joint_density",
    "same_port_density",
    "first_detection_density",
    "conditional_state",
    "conditional_density",
    "dephased_joint_density",
    "joint_density_spectral",
    "port_pair_probabilities",
    "write_density_csv",
]

_PORTS = (3, 4)


def _check_port(port: int) -> int:
    if port not in _PORTS:
        raise ValueError(f"port must be 3 or 4, got {port!r}")
    return port


@dataclass(frozen=True)
class PortPair:
    """An ordered pair of output-port labels (each 3 or 4)."""

    first: int
    second: int

    def __post_init__(self):
        _check_port(self.first)
        _check_port(self.second)

    @property
    def same_port(self) -> bool:
        return self.first == self.second


@dataclass(frozen=True)
class ConditionalState:
    """One-photon state left after a first detection.

    ``weight_mode1``/``weight_mode2`` are the amplitudes for the
    remaining photon to be the one that entered in mode 1 / mode 2;
    their squared moduli sum to one.
    """

    weight_mode1: complex
    weight_mode2: complex

    def __post_init__(self):
        norm = abs(self.weight_mode1) ** 2 + abs(self.weight_mode2) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"conditional weights not normalized (norm {norm!r})")


@dataclass(frozen=True)
class PortPairProbabilities:
    """Where the two photons end up: both in 3, both in 4, or split."""

    same_33: float
    same_44: float
    opposite: float

    @property
    def total(self) -> float:
        return self.same_33 + self.same_44 + self.opposite

    def as_dict(self) -> dict:
        return {"(3,3)": self.same_33, "(4,4)": self.same_44,
                "opposite": self.opposite}


def _two_time_density(m1: ModeFunction, m2: ModeFunction, t0, tau, sign):
    t0 = np.asarray(t0, dtype=float)
    tau = np.asarray(tau, dtype=float)
    ta, tb = np.broadcast_arrays(t0, t0 + tau)
    return _kernels.mode_pair_density(m1(ta), m2(ta), m1(tb), m2(tb), sign=sign)


def joint_density(m1: ModeFunction, m2: ModeFunction, t0, tau):
    """Density for one detection in port 3 at t0 and one in port 4 at t0+tau.

    0.25*|zeta1(t0+tau)*zeta2(t0) - zeta2(t0+tau)*zeta1(t0)|^2: vanishes
    at tau = 0 however different the modes are, and is symmetric under
    detector exchange, joint(t0, tau) = joint(t0+tau, -tau).
    """
    return _two_time_density(m1, m2, t0, tau, sign=-1)


def same_port_density(m1: ModeFunction, m2: ModeFunction, t0, tau):
    """Density for both detections in one port, at t0 and t0+tau.

    Plus-sign combination; ports 3 and 4 share the same value by the
    50:50 symmetry.
    """
    return _two_time_density(m1, m2, t0, tau, sign=+1)


def first_detection_density(m1: ModeFunction, m2: ModeFunction, port: int, t0):
    """Density of the first photon detection in ``port`` at time t0.

    (|eps1|^2 + |eps2|^2)/2: no interference term, identical for both
    ports, and integrates to 1 over the full line.
    """
    _check_port(port)
    dens = 0.5 * (detection_density(m1, t0) + detection_density(m2, t0))
    return dens


def conditional_state(m1: ModeFunction, m2: ModeFunction, t0: float) -> ConditionalState:
    """Collapse after a first detection at time t0 (in either port).

    The surviving photon is a superposition of "came in through port 1"
    and "came in through port 2" with amplitudes proportional to
    zeta2(t0) and zeta1(t0).  Conditioning where both envelopes vanish
    is undefined and raises ZeroDensityInstant.
    """
    z1 = complex(m1(t0))
    z2 = complex(m2(t0))
    norm_sq = abs(z1) ** 2 + abs(z2) ** 2
    if norm_sq <= 0.0:
        raise ZeroDensityInstant(
            f"both envelopes vanish at t0={t0!r}; cannot condition on a "
            "zero-probability detection")
    scale = 1.0 / np.sqrt(norm_sq)
    return ConditionalState(weight_mode1=z2 * scale, weight_mode2=z1 * scale)


def conditional_density(state: ConditionalState, m1: ModeFunction,
                        m2: ModeFunction, port: int, t):
    """Detection density of the surviving photon in ``port`` at time t.

    0.5*|w1*zeta1(t) +- w2*zeta2(t)|^2 with '+' for port 3 and '-' for
    port 4: the fringes start in phase at the first detection, so the
    port-4 density is zero at the conditioning instant.
    """
    _check_port(port)
    sign = 1.0 if port == 3 else -1.0
    t = np.asarray(t, dtype=float)
    amp = state.weight_mode1 * m1(t) + sign * (state.weight_mode2 * m2(t))
    amp = np.asarray(amp)
    dens = 0.5 * (amp.real ** 2 + amp.imag ** 2)
    return float(dens) if dens.ndim == 0 else dens


def dephased_joint_density(m1: ModeFunction, m2: ModeFunction, t0, tau):
    """Coincidence density once the mutual phase is randomized.

    Ensemble average over pair phases: only the envelope densities
    survive, 0.25*(P1(t0)*P2(t0+tau) + P2(t0)*P1(t0+tau)).  This is the
    distinguishable-photon reference level.
    """
    t0 = np.asarray(t0, dtype=float)
    tau = np.asarray(tau, dtype=float)
    ta, tb = np.broadcast_arrays(t0, t0 + tau)
    p1a = detection_density(m1, ta)
    p2a = detection_density(m2, ta)
    p1b = detection_density(m1, tb)
    p2b = detection_density(m2, tb)
    dens = 0.25 * (p1a * p2b + p2a * p1b)
    return float(dens) if np.ndim(dens) == 0 else dens


def joint_density_spectral(s1: SpectralAmplitude, s2: SpectralAmplitude,
                           t0, tau, grid: TimeGrid | None = None):
    """Coincidence density computed from the spectral amplitudes.

    Transforms both spectra to the time domain and evaluates
    ``joint_density``; equal to the time-domain route by construction of
    the Fourier pair.  For repeated evaluation transform once with
    ``from_spectrum`` instead.
    """
    grid = DEFAULT_GRID if grid is None else grid
    m1 = from_spectrum(s1, grid)
    m2 = from_spectrum(s2, grid)
    return joint_density(m1, m2, t0, tau)


def port_pair_probabilities(m1: ModeFunction, m2: ModeFunction) -> PortPairProbabilities:
    """Total probabilities of the three detection categories.

    With c = overlap(m1, m2): both-in-3 and both-in-4 each carry
    (1+|c|^2)/4 and the opposite-port category (1-|c|^2)/2, summing to
    one.  Identical modes never split; orthogonal modes split half the
    time.
    """
    c = overlap(m1, m2)
    a = min(abs(c) ** 2, 1.0)
    return PortPairProbabilities(same_33=0.25 * (1.0 + a),
                                 same_44=0.25 * (1.0 + a),
                                 opposite=0.5 * (1.0 - a))


def write_density_csv(path, t0_grid, tau_grid, density) -> None:
    """Write a density surface as CSV rows ``t0,tau,density``.

    ``density[i, j]`` belongs to ``(t0_grid[i], tau_grid[j])``; floats
    carry 17 significant digits so files regenerate bit-identically.
    """
    t0_grid = np.asarray(t0_grid, dtype=float)
    tau_grid = np.asarray(tau_grid, dtype=float)
    density = np.asarray(density, dtype=float)
    if density.shape != (t0_grid.size, tau_grid.size):
        raise ValueError("density shape must be (len(t0_grid), len(tau_grid))")
    with open(path, "w", newline="") as fh:
        fh.write("t0,tau,density\n")
        for i, t0 in enumerate(t0_grid):
            for j, tau in enumerate(tau_grid):
                fh.write(f"{t0:.17g},{tau:.17g},{density[i, j]:.17g}\n")
