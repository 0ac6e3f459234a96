"""Closed forms for interfering Gaussian single-photon pulse pairs.

The standard scenario: two Fourier-limited Gaussian pulses of equal
duration hit the splitter with arrival delay ``delta_tau`` and carrier
difference ``delta``, optionally with a shot-to-shot Gaussian spread
``delta_omega`` of that carrier difference.  Everything here is exact
and serves both as the figure backend and as the oracle for the numeric
routes.  All expressions are arranged as sums of exp() with
non-positive arguments, so no intermediate ever overflows.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DegenerateWidth
from .wavepacket import ModeFunction, make_gaussian_mode

__all__ = [
    "PhotonPairConfig",
    "gaussian_pair",
    "p_joint_gaussian",
    "p_same_port_gaussian",
    "p_2hnu",
    "p_2hnu_averaged",
    "p_2hnu_dephased",
    "freq_distribution",
    "p_inh",
    "p_total",
]

_SQRT_PI = np.sqrt(np.pi)
_INV_2SQRTPI = 1.0 / (2.0 * _SQRT_PI)
_INV_4SQRTPI = _INV_2SQRTPI / 2.0  # exactly half, keeps cancellations exact


@dataclass(frozen=True)
class PhotonPairConfig:
    """Pulse-pair parameters, all in units of the pulse duration.

    delta_tau   arrival delay between the two pulses
    delta       carrier (angular) frequency difference
    omega_mean  mean carrier frequency; never affects any probability
    delta_omega half width at 1/e of the carrier-difference spread (>= 0)
    """

    delta_tau: float = 0.0
    delta: float = 0.0
    omega_mean: float = 0.0
    delta_omega: float = 0.0

    def __post_init__(self):
        for name in ("delta_tau", "delta", "omega_mean", "delta_omega"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.delta_omega < 0:
            raise ValueError("delta_omega must be nonnegative")


def gaussian_pair(cfg: PhotonPairConfig,
                  grid="analytic") -> tuple[ModeFunction, ModeFunction]:
    """The two pulse modes for ``cfg``: centers +-delta_tau/2, carriers
    omega_mean -+ delta/2 (so mode 2 is the higher-frequency one)."""
    m1 = make_gaussian_mode(center=+0.5 * cfg.delta_tau,
                            carrier=cfg.omega_mean - 0.5 * cfg.delta,
                            grid=grid)
    m2 = make_gaussian_mode(center=-0.5 * cfg.delta_tau,
                            carrier=cfg.omega_mean + 0.5 * cfg.delta,
                            grid=grid)
    return m1, m2


def p_joint_gaussian(t0, tau, cfg: PhotonPairConfig):
    """Opposite-port joint detection density at times (t0, t0 + tau).

    [cosh(2*tau*dt) - cos(tau*D)]/pi * exp(-4*t0*(t0+tau) - dt^2 - 2*tau^2)
    with dt = delta_tau, D = delta.  Exactly zero at tau = 0 and
    independent of omega_mean.
    """
    return _kernels.gaussian_pair_density(t0, tau, cfg.delta_tau, cfg.delta,
                                          sign=-1)


def p_same_port_gaussian(t0, tau, cfg: PhotonPairConfig):
    """Same-port companion density (plus-sign combination); one port's share."""
    return _kernels.gaussian_pair_density(t0, tau, cfg.delta_tau, cfg.delta,
                                          sign=+1)


def p_2hnu(tau, cfg: PhotonPairConfig):
    """Coincidence density versus detection-time difference tau.

    Marginal of the joint density over the first detection time:
    [cosh(2*tau*dt) - cos(tau*D)] * exp(-dt^2 - tau^2) / (2*sqrt(pi)).
    Defined for signed tau (symmetric under detector exchange).
    """
    tau = np.asarray(tau, dtype=float)
    dtau = cfg.delta_tau
    plus = np.exp(-(tau - dtau) ** 2) + np.exp(-(tau + dtau) ** 2)
    cross = np.cos(tau * cfg.delta) * np.exp(-dtau * dtau - tau * tau)
    p = np.maximum(plus * _INV_4SQRTPI - cross * _INV_2SQRTPI, 0.0)
    return float(p) if p.ndim == 0 else p


def p_2hnu_dephased(tau, delta_tau: float = 0.0):
    """Coincidence density with the interference term dropped.

    Envelope-only reference level (the non-interfering curve); equals the
    infinite-bandwidth limit of ``p_2hnu_averaged``.
    """
    tau = np.asarray(tau, dtype=float)
    p = (np.exp(-(tau - delta_tau) ** 2)
         + np.exp(-(tau + delta_tau) ** 2)) * _INV_4SQRTPI
    return float(p) if p.ndim == 0 else p


def p_2hnu_averaged(tau, delta_tau: float, delta_omega: float):
    """Coincidence density averaged over the carrier-difference spread.

    Replaces the beat term cos(tau*D) of ``p_2hnu`` by its Gaussian
    average exp(-(tau*delta_omega/2)^2); reduces to ``p_inh`` for
    delta_tau = 0 and to the dephased curve as delta_omega -> inf.
    """
    if delta_omega < 0:
        raise ValueError("delta_omega must be nonnegative")
    tau = np.asarray(tau, dtype=float)
    dtau = delta_tau
    plus = np.exp(-(tau - dtau) ** 2) + np.exp(-(tau + dtau) ** 2)
    beat = np.exp(-dtau * dtau - tau * tau - (tau * delta_omega / 2.0) ** 2)
    p = np.maximum(plus * _INV_4SQRTPI - beat * _INV_2SQRTPI, 0.0)
    return float(p) if p.ndim == 0 else p


def freq_distribution(delta, delta_omega: float):
    """Normalized Gaussian spread of the carrier difference.

    exp(-(delta/delta_omega)^2) / (delta_omega*sqrt(pi)); delta_omega is
    the half width at 1/e of the maximum.
    """
    if delta_omega <= 0:
        raise DegenerateWidth(
            "delta_omega must be positive; use the delta_omega=0 branch instead")
    delta = np.asarray(delta, dtype=float)
    f = np.exp(-((delta / delta_omega) ** 2)) / (delta_omega * _SQRT_PI)
    return float(f) if f.ndim == 0 else f


def p_inh(tau, delta_omega: float):
    """Coincidence density for simultaneous pulses under a carrier spread.

    exp(-tau^2)/(2*sqrt(pi)) * (1 - exp(-(tau*delta_omega/2)^2)); the dip
    around tau = 0 reaches zero and has 1/e half width 2/delta_omega.
    The delta_omega = 0 case is the exact interference limit: identically 0.
    """
    if delta_omega < 0:
        raise ValueError("delta_omega must be nonnegative")
    tau = np.asarray(tau, dtype=float)
    if delta_omega == 0:
        p = np.zeros_like(tau)
    else:
        p = (np.exp(-tau * tau) * _INV_2SQRTPI
             * -np.expm1(-((tau * delta_omega / 2.0) ** 2)))
    return float(p) if p.ndim == 0 else p


def p_total(delta_tau, delta_omega):
    """Total coincidence probability: 1/2 - exp(-delta_tau^2)/sqrt(4 + delta_omega^2).

    Zero only at delta_tau = 0 with delta_omega = 0; the spread shrinks
    the dip depth but leaves its width in delta_tau untouched.
    """
    delta_tau = np.asarray(delta_tau, dtype=float)
    delta_omega = np.asarray(delta_omega, dtype=float)
    if np.any(delta_omega < 0):
        raise ValueError("delta_omega must be nonnegative")
    p = 0.5 - np.exp(-delta_tau * delta_tau) / np.sqrt(4.0 + delta_omega ** 2)
    return float(p) if p.ndim == 0 else p
