"""Correlated pair generation and detector imperfection modelling.

Pairs are emitted simultaneously on both channels (the down-conversion
correlation time is femtoseconds, far below one tick), so every observed
signal/idler offset comes from the channel and the detectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ConfigurationError
from .rand import make_rng
from .timetag import TimeTagStream

_MAX_EXPECTED_PAIRS = 2**32


@dataclass(frozen=True)
class SourceConfig:
    pair_rate: float  # pairs/s
    duration: float  # s
    seed: int

    def __post_init__(self) -> None:
        if self.pair_rate <= 0:
            raise ConfigurationError("pair_rate must be positive")
        if self.duration <= 0:
            raise ConfigurationError("duration must be positive")


@dataclass(frozen=True)
class DetectorConfig:
    efficiency: float  # detection probability
    jitter_sigma: float = 0.0  # ps, Gaussian
    dead_time: int = 0  # ps
    dark_rate: float = 0.0  # counts/s

    def __post_init__(self) -> None:
        if not 0.0 <= self.efficiency <= 1.0:
            raise ConfigurationError("efficiency must be in [0, 1]")
        if self.jitter_sigma < 0:
            raise ConfigurationError("jitter_sigma must be >= 0")
        if self.dead_time < 0:
            raise ConfigurationError("dead_time must be >= 0")
        if self.dark_rate < 0:
            raise ConfigurationError("dark_rate must be >= 0")


def generate_pairs(cfg: SourceConfig) -> tuple[TimeTagStream, TimeTagStream]:
    """Draw a homogeneous Poisson emission process and clone it onto both channels.

    Returns (signal, idler) streams whose tags are identical at emission.
    Deterministic for a fixed config seed.
    """
    expected = cfg.pair_rate * cfg.duration
    if expected > _MAX_EXPECTED_PAIRS:
        raise CapacityError(
            "expected pair count %.3g exceeds the 2^32 stream budget" % expected
        )
    rng = make_rng(cfg.seed)
    duration_ps = int(round(cfg.duration * 1e12))
    n = int(rng.poisson(expected))
    tags = np.sort(rng.integers(0, duration_ps + 1, size=n, dtype=np.int64))
    signal = TimeTagStream(tags, channel_id=0, duration=duration_ps)
    idler = TimeTagStream(tags.copy(), channel_id=1, duration=duration_ps)
    return signal, idler


def apply_detector(stream: TimeTagStream, det: DetectorConfig, seed: int) -> TimeTagStream:
    """Apply efficiency thinning, timing jitter, dark counts and dead time.

    Physical order: arrival-time smearing happens before the electronic
    hold-off, and dark counts trigger the hold-off like any other click, so
    the dead-time filter runs last, over the merged stream. Output is sorted
    and guaranteed to contain no two tags closer than dead_time.
    """
    rng = make_rng(seed)
    tags = stream.tags
    kept = tags[rng.random(tags.size) < det.efficiency]
    if det.jitter_sigma > 0 and kept.size:
        jitter = rng.normal(0.0, det.jitter_sigma, size=kept.size)
        kept = np.clip(np.rint(kept + jitter).astype(np.int64), 0, stream.duration)
    if det.dark_rate > 0:
        n_dark = int(rng.poisson(det.dark_rate * stream.duration * 1e-12))
        dark = rng.integers(0, stream.duration + 1, size=n_dark, dtype=np.int64)
        kept = np.concatenate([kept, dark])
    kept = np.sort(kept)
    if det.dead_time > 0 and kept.size:
        kept = _dead_time_filter(kept, det.dead_time)
    return TimeTagStream(kept, stream.channel_id, stream.duration)


def _dead_time_filter(tags: np.ndarray, dead_time: int) -> np.ndarray:
    # greedy hold-off: a kept click vetoes everything within dead_time after it
    keep = np.empty(tags.size, dtype=bool)
    last = -dead_time - 1
    for i, t in enumerate(tags):
        if t - last >= dead_time:
            keep[i] = True
            last = t
        else:
            keep[i] = False
    return tags[keep]
