"""Coincidence-rate-vs-distance model and maximum-range extrapolation.

The rate model is f(x) = b + a/x^2 with x in mm: a background term plus an
inverse-square signal term, matching how backscatter falls off with
distance. (The literal quadratic form b + a*x^2 is available behind a flag
for comparison; it grows with distance and fits nothing physical here.)
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FitError

#: Detected pair rate of the bench setup this model was fitted at, pairs/s.
REFERENCE_PAIR_RATE = 5e6


@dataclass(frozen=True)
class RateFit:
    amplitude: float  # a, counts * mm^2
    background: float  # b, counts
    residual: float = 0.0  # sum of squared residuals

    def __post_init__(self) -> None:
        if self.amplitude < 0 or self.background < 0:
            raise FitError("fit coefficients must be non-negative")


def rate_at(x_mm: float, fit: RateFit, quadratic: bool = False) -> float:
    """Model coincidence rate at distance x_mm."""
    if x_mm <= 0:
        raise DomainError("distance must be positive")
    if quadratic:
        return fit.background + fit.amplitude * x_mm**2
    return fit.background + fit.amplitude / x_mm**2


def fit_rates(samples, quadratic: bool = False) -> RateFit:
    """Least-squares (a, b) on rate = b + a/x^2, solved via normal equations.

    The model is linear in both parameters, so the 2x2 normal system is
    exact. Requires at least 3 samples with at least two distinct distances.
    """
    xs = np.array([float(x) for x, _ in samples])
    ys = np.array([float(y) for _, y in samples])
    if xs.size < 3:
        raise FitError("need at least 3 samples")
    if np.any(xs <= 0):
        raise DomainError("distances must be positive")
    basis = xs**2 if quadratic else 1.0 / xs**2
    if np.unique(xs).size < 2:
        raise FitError("all distances identical; system is singular")
    design = np.column_stack([basis, np.ones_like(basis)])
    normal = design.T @ design
    rhs = design.T @ ys
    try:
        a, b = np.linalg.solve(normal, rhs)
    except np.linalg.LinAlgError as exc:
        raise FitError("normal equations are singular") from exc
    # zero out solver roundoff so exactly-constant data fits cleanly
    tol = 1e-9 * max(1.0, float(np.abs(ys).max()))
    a = 0.0 if -tol < a < 0.0 else a
    b = 0.0 if -tol < b < 0.0 else b
    predicted = design @ np.array([a, b])
    residual = float(np.sum((ys - predicted) ** 2))
    return RateFit(amplitude=float(a), background=float(b), residual=residual)


def max_range(
    pair_rate: float,
    fit: RateFit,
    min_signal: float,
    reference_rate: float = REFERENCE_PAIR_RATE,
) -> float:
    """Distance (mm) where the rate-scaled signal term falls to min_signal.

    The signal term a/x^2 is scaled by pair_rate / reference_rate, where
    reference_rate is the acquisition rate the fit was taken at. Returns
    math.inf for min_signal <= 0 (the signal never falls that far: an
    unbounded range) and 0.0 when the scaled amplitude is zero (the signal
    is below min_signal at every distance).
    """
    if pair_rate <= 0 or reference_rate <= 0:
        raise DomainError("pair rates must be positive")
    if min_signal <= 0:
        return math.inf
    scaled = fit.amplitude * pair_rate / reference_rate
    if scaled == 0:
        return 0.0
    return math.sqrt(scaled / min_signal)


def read_rate_csv(path) -> list[tuple[float, float]]:
    """Read (x_mm, rate) samples; a non-numeric first row is taken as header."""
    samples: list[tuple[float, float]] = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            try:
                samples.append((float(row[0]), float(row[1])))
            except ValueError:
                if samples:
                    raise
                continue  # header row
    return samples
