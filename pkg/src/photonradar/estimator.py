"""Relativistic kinematics and peak-to-physics conversions.

Sign convention: beta = v / c_a with positive v = approaching (blue shift).
All functions are exact closed forms; the low-speed approximations quoted in
the docs are verified by tests, never used internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

#: Speed of light in vacuum, m/s.
C_VACUUM = 299792458.0

#: Default group speed of near-infrared photons in standard air, m/s.
C_AIR = 299702547.0


def lorentz_gamma(v: float, c_a: float = C_AIR) -> float:
    """Lorentz factor 1 / sqrt(1 - (v/c_a)^2)."""
    beta = v / c_a
    if abs(beta) >= 1.0:
        raise DomainError("|v| must be below the photon speed (got beta=%g)" % beta)
    return 1.0 / math.sqrt(1.0 - beta * beta)


def relativistic_doppler(nu: float, beta: float) -> float:
    """Received frequency nu * sqrt((1+beta)/(1-beta)); beta > 0 blue-shifts."""
    _check_beta(beta)
    return nu * math.sqrt((1.0 + beta) / (1.0 - beta))


def doppler_scale(v: float, c_a: float = C_AIR) -> float:
    """Round-trip time-scale factor s = (1+beta)/(1-beta) for a moving reflector.

    The one-way shift squared to first order: s ~ 1 + 2*beta, which is what
    the factor-2 velocity estimator inverts.
    """
    beta = v / c_a
    _check_beta(beta)
    return (1.0 + beta) / (1.0 - beta)


def dilation_delta(t: float, beta: float) -> float:
    """Classical-minus-relativistic Doppler time shift over an interval t.

    delta_classical = t*beta, delta_relativistic = t*(1 - sqrt((1-beta)/(1+beta)));
    the difference (~ beta^2 t / 2 at low speed) is the correction a
    time-dilation search axis must absorb.
    """
    _check_beta(beta)
    delta_classical = t * beta
    delta_relativistic = t - t * math.sqrt((1.0 - beta) / (1.0 + beta))
    return delta_classical - delta_relativistic


def range_from_delay(tau_ps: float, c_a: float = C_AIR) -> float:
    """Target range in meters from the round-trip delay: c_a * tau / 2."""
    if tau_ps < 0:
        raise DomainError("round-trip delay must be non-negative")
    return c_a * (tau_ps * 1e-12) / 2.0


def velocity_from_doppler(f_d: float, prf: float, c_a: float = C_AIR) -> float:
    """Radial velocity c_a * f_d / (2 * PRF) from a Doppler frequency bin."""
    if prf <= 0:
        raise DomainError("PRF must be positive")
    return c_a * f_d / (2.0 * prf)


def velocity_from_scale(s: float, c_a: float = C_AIR) -> float:
    """Scale-form of the velocity estimator: v = c_a * (s - 1) / 2.

    First-order inverse of doppler_scale, exact for s - 1 = 2*beta; its
    relative bias is ~beta, far below any grid quantization at radar speeds.
    """
    return c_a * (s - 1.0) / 2.0


def invert_doppler_scale(s: float, c_a: float = C_AIR) -> float:
    """Exact inverse of doppler_scale: v = c_a * (s - 1) / (s + 1)."""
    if s <= 0:
        raise DomainError("scale must be positive")
    return c_a * (s - 1.0) / (s + 1.0)


@dataclass(frozen=True)
class Kinematics:
    """beta, Lorentz factor and round-trip scale for one radial velocity."""

    beta: float
    gamma: float
    doppler_scale: float

    @classmethod
    def from_velocity(cls, v: float, c_a: float = C_AIR) -> "Kinematics":
        return cls(beta=v / c_a, gamma=lorentz_gamma(v, c_a), doppler_scale=doppler_scale(v, c_a))


def _check_beta(beta: float) -> None:
    if abs(beta) >= 1.0:
        raise DomainError("|beta| must be < 1, got %g" % beta)
