"""Target depth from the correlogram tau profile, and target/decoy calls.

A body with physical depth scatters photons from facets at different ranges,
so its correlogram peak is wide; a shallow decoy gives a narrow one. Depth
follows from the width through the same round-trip conversion as range.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .correlator import GUARD_BINS, Correlogram, background_mean
from .errors import ConfigurationError
from .estimator import C_AIR


class Classification(Enum):
    TARGET = "target"
    DECOY = "decoy"


@dataclass(frozen=True)
class DepthProfile:
    """Tau slice at the peak cell with its measured width and depth."""

    tau_slice: np.ndarray
    width_ps: int
    depth_m: float


def correlogram_width(
    tau_slice: np.ndarray,
    tau_step: int,
    threshold_fraction: float = 0.5,
    guard: int = GUARD_BINS,
) -> int | None:
    """Extent (ps) of the profile above a background-referenced threshold.

    The threshold is background + threshold_fraction * (max - background),
    a full-width-at-half-maximum measure by default. Returns None when the
    slice has no contrast above background (no detection).
    """
    if not 0.0 < threshold_fraction < 1.0:
        raise ConfigurationError("threshold_fraction must be in (0, 1)")
    tau_slice = np.asarray(tau_slice)
    if tau_slice.size == 0:
        raise ConfigurationError("tau slice is empty")
    peak_index = int(np.argmax(tau_slice))
    height = float(tau_slice[peak_index])
    background = background_mean(tau_slice, peak_index, guard)
    if height <= background:
        return None
    threshold = background + threshold_fraction * (height - background)
    above = np.flatnonzero(tau_slice >= threshold)
    return int((above[-1] - above[0]) * tau_step)


def depth_from_width(width_ps: float, c_a: float = C_AIR) -> float:
    """Round-trip width to one-way depth: c_a * width / 2."""
    return c_a * (width_ps * 1e-12) / 2.0


def depth_profile(
    correlogram: Correlogram,
    gamma_index: int,
    doppler_index: int,
    c_a: float = C_AIR,
    threshold_fraction: float = 0.5,
) -> DepthProfile | None:
    """Measure depth at one grid cell; None when nothing clears background."""
    tau_slice = correlogram.counts[gamma_index, doppler_index]
    width = correlogram_width(tau_slice, correlogram.grid.tau_step, threshold_fraction)
    if width is None:
        return None
    return DepthProfile(tau_slice=tau_slice, width_ps=width, depth_m=depth_from_width(width, c_a))


def classify(depth_m: float, threshold_m: float) -> Classification:
    """Depth at or above the threshold is a real target.

    Ties go to TARGET: a threat is never dismissed on an exact tie.
    """
    if threshold_m <= 0:
        raise ConfigurationError("threshold_m must be positive")
    return Classification.TARGET if depth_m >= threshold_m else Classification.DECOY
