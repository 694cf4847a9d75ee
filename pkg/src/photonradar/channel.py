"""Free-space channel: facet scattering, round-trip delay, Doppler scaling,
inverse-square loss, absorption and jammer/background injection.

Survival probability per photon is min(1, collection_constant * D^2/R^2 *
(1 - absorptivity)). The collection constant absorbs every unmodelled optic;
it is calibrated per scenario.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .estimator import C_AIR, C_VACUUM, doppler_scale
from .rand import make_rng
from .timetag import TimeTagStream


@dataclass(frozen=True)
class Target:
    """Line-of-sight geometry: (depth_offset_m, weight) facets plus motion.

    Facet depth offsets are measured along the line of sight behind the
    leading face; weights are relative scattering strengths. Negative
    radial_velocity means the target is approaching.
    """

    facets: tuple[tuple[float, float], ...]
    base_range: float  # m
    radial_velocity: float = 0.0  # m/s
    absorptivity: float = 0.0

    def __post_init__(self) -> None:
        facets = tuple((float(d), float(w)) for d, w in self.facets)
        object.__setattr__(self, "facets", facets)
        if not facets:
            raise ConfigurationError("target needs at least one facet")
        if any(d < 0 for d, _ in facets):
            raise ConfigurationError("facet depth offsets must be >= 0")
        if any(w < 0 for _, w in facets) or not any(w > 0 for _, w in facets):
            raise ConfigurationError("facet weights must be >= 0 and not all zero")
        if self.base_range <= 0:
            raise ConfigurationError("base_range must be positive")
        if not 0.0 <= self.absorptivity <= 1.0:
            raise ConfigurationError("absorptivity must be in [0, 1]")
        # validity bound of the low-speed beta approximation
        if abs(self.radial_velocity) >= 0.22 * C_VACUUM:
            raise ConfigurationError("|radial_velocity| must stay below 0.22 c")

    @property
    def depth_span(self) -> float:
        depths = [d for d, _ in self.facets]
        return max(depths) - min(depths)


@dataclass(frozen=True)
class ChannelConfig:
    telescope_diameter: float  # m
    photon_speed: float = C_AIR  # m/s
    collection_constant: float = 1.0  # scale on D^2/R^2
    jammer_rate: float = 0.0  # photons/s, uniform Poisson
    background_rate: float = 0.0  # photons/s

    def __post_init__(self) -> None:
        if self.telescope_diameter <= 0:
            raise ConfigurationError("telescope_diameter must be positive")
        if not 0 < self.photon_speed <= C_VACUUM:
            raise ConfigurationError("photon_speed must be in (0, c]")
        if self.collection_constant <= 0:
            raise ConfigurationError("collection_constant must be positive")
        if self.jammer_rate < 0 or self.background_rate < 0:
            raise ConfigurationError("jammer and background rates must be >= 0")


def survival_probability(target: Target, ch: ChannelConfig) -> float:
    """Per-photon probability of a detectable backscatter return."""
    p = (
        ch.collection_constant
        * (ch.telescope_diameter**2 / target.base_range**2)
        * (1.0 - target.absorptivity)
    )
    if math.isnan(p) or p < 0:
        raise ConfigurationError("survival probability computed as %r" % (p,))
    return min(1.0, p)


def propagate(
    idler: TimeTagStream, target: Target, ch: ChannelConfig, seed: int
) -> TimeTagStream:
    """Transform the transmitted idler stream into the received stream.

    Each surviving photon scatters off one weighted facet and arrives at
    t' = s*t + 2*(R + depth)/c_a, with s the round-trip Doppler scale of the
    target. Jammer and background photons are injected as uniform Poisson
    processes over the receive window, which is exactly what keeps them out
    of the correlation peak. The observation window is extended to cover the
    longest possible return.
    """
    beta_speed = -target.radial_velocity  # positive = approaching
    s = doppler_scale(beta_speed, ch.photon_speed)
    p_survive = survival_probability(target, ch)

    rng = make_rng(seed)
    tags = idler.tags
    kept = tags[rng.random(tags.size) < p_survive]

    depths = np.array([d for d, _ in target.facets])
    weights = np.array([w for _, w in target.facets], dtype=float)
    weights /= weights.sum()
    facet_idx = rng.choice(depths.size, size=kept.size, p=weights)
    delays_ps = 2.0 * (target.base_range + depths) / ch.photon_speed * 1e12
    received = np.rint(s * kept + delays_ps[facet_idx]).astype(np.int64)

    duration_out = int(math.ceil(s * idler.duration + delays_ps.max())) + 1
    window_s = duration_out * 1e-12
    noise_rate = ch.jammer_rate + ch.background_rate
    if noise_rate > 0:
        n_noise = int(rng.poisson(noise_rate * window_s))
        noise = rng.integers(0, duration_out + 1, size=n_noise, dtype=np.int64)
        received = np.concatenate([received, noise])

    return TimeTagStream(np.sort(received), idler.channel_id, duration_out)


def radiant_angle(span: float, range_m: float) -> float:
    """Angle (rad) needed to illuminate a body of the given span at range."""
    if range_m <= 0:
        raise DomainError("range must be positive")
    return span / range_m
