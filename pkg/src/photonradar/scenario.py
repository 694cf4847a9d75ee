"""Scenario files: the single source of truth for a simulation run.

A scenario is a TOML document with the sections [source], [detectors.reference],
[detectors.receive], [target], [channel] and [grid] plus top-level ``name``,
``seed`` and ``classify_threshold_m``. Every schema violation is reported
with its field path. Bundled scenarios live in the package's ``scenarios/``
directory.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .channel import ChannelConfig, Target
from .correlator import HypothesisGrid, Peak
from .errors import ConfigurationError
from .identify import Classification
from .source import DetectorConfig


@dataclass(frozen=True)
class Scenario:
    name: str
    seed: int
    pair_rate: float
    duration: float
    reference_detector: DetectorConfig
    receive_detector: DetectorConfig
    target: Target
    channel: ChannelConfig
    grid: HypothesisGrid
    classify_threshold_m: float


@dataclass(frozen=True)
class DetectionReport:
    """Physical quantities recovered from one run, plus count bookkeeping."""

    scenario: str
    seed: int
    detected: bool
    range_m: float | None = None
    velocity_mps: float | None = None
    gamma_hat: float | None = None
    depth_m: float | None = None
    classification: Classification | None = None
    peak: Peak | None = None
    reference_singles: int = 0
    received_singles: int = 0
    coincidences: int = 0
    pair_single_ratio: float = 0.0


def load_scenario(path) -> Scenario:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError("%s: %s" % (path, exc)) from exc
    return scenario_from_dict(doc, default_name=Path(path).stem)


def scenario_from_dict(doc: dict, default_name: str = "scenario") -> Scenario:
    name = str(doc.get("name", default_name))
    seed = _get(doc, "seed", int)
    threshold = float(doc.get("classify_threshold_m", 5.0))

    source = _section(doc, "source")
    detectors = _section(doc, "detectors")
    target_doc = _section(doc, "target")
    channel_doc = _section(doc, "channel")
    grid_doc = _section(doc, "grid")

    with _context("source"):
        pair_rate = _get(source, "pair_rate", float)
        duration = _get(source, "duration", float)
    reference = _detector(_section(detectors, "reference", parent="detectors"), "detectors.reference")
    receive = _detector(_section(detectors, "receive", parent="detectors"), "detectors.receive")

    with _context("target"):
        facets_raw = _get(target_doc, "facets", list)
        try:
            facets = tuple((float(d), float(w)) for d, w in facets_raw)
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(
                "target.facets: expected [[depth_m, weight], ...]"
            ) from exc
        target = Target(
            facets=facets,
            base_range=_get(target_doc, "base_range", float),
            radial_velocity=float(target_doc.get("radial_velocity", 0.0)),
            absorptivity=float(target_doc.get("absorptivity", 0.0)),
        )

    with _context("channel"):
        kwargs = {"telescope_diameter": _get(channel_doc, "telescope_diameter", float)}
        for key in ("photon_speed", "collection_constant", "jammer_rate", "background_rate"):
            if key in channel_doc:
                kwargs[key] = float(channel_doc[key])
        channel = ChannelConfig(**kwargs)

    with _context("grid"):
        grid = _grid(grid_doc)

    return Scenario(
        name=name,
        seed=seed,
        pair_rate=pair_rate,
        duration=duration,
        reference_detector=reference,
        receive_detector=receive,
        target=target,
        channel=channel,
        grid=grid,
        classify_threshold_m=threshold,
    )


def _grid(doc: dict) -> HypothesisGrid:
    tau_min = _get(doc, "tau_min", int)
    tau_max = _get(doc, "tau_max", int)
    tau_step = _get(doc, "tau_step", int)
    if "doppler_offsets" in doc:
        offsets = tuple(float(b) for b in doc["doppler_offsets"])
    elif "doppler_span" in doc:
        # symmetric linspace shorthand for wide sweeps
        span = float(doc["doppler_span"])
        count = int(doc.get("doppler_count", 101))
        offsets = tuple(np.linspace(-span, span, count))
    else:
        offsets = (0.0,)
    gammas = tuple(float(g) for g in doc.get("gammas", [1.0]))
    return HypothesisGrid(tau_min, tau_max, tau_step, offsets, gammas)


def _detector(doc: dict, where: str) -> DetectorConfig:
    with _context(where):
        return DetectorConfig(
            efficiency=_get(doc, "efficiency", float),
            jitter_sigma=float(doc.get("jitter_sigma", 0.0)),
            dead_time=int(doc.get("dead_time", 0)),
            dark_rate=float(doc.get("dark_rate", 0.0)),
        )


def _section(doc: dict, key: str, parent: str = "") -> dict:
    path = "%s.%s" % (parent, key) if parent else key
    value = doc.get(key)
    if not isinstance(value, dict):
        raise ConfigurationError("%s: missing section" % path)
    return value


def _get(doc: dict, key: str, kind):
    if key not in doc:
        raise ConfigurationError("%s: missing required field" % key)
    value = doc[key]
    if kind is int and isinstance(value, bool):
        raise ConfigurationError("%s: expected an integer" % key)
    if kind is int and not isinstance(value, int):
        raise ConfigurationError("%s: expected an integer, got %r" % (key, value))
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError("%s: expected %s, got %r" % (key, kind.__name__, value)) from exc


class _context:
    """Prefix ConfigurationError messages with the enclosing field path."""

    def __init__(self, prefix: str):
        self.prefix = prefix

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is ConfigurationError and not str(exc).startswith(self.prefix):
            raise ConfigurationError("%s.%s" % (self.prefix, exc)) from None
        return False


def bundled_scenario_names() -> list[str]:
    root = resources.files("photonradar") / "scenarios"
    return sorted(p.name.removesuffix(".toml") for p in root.iterdir() if p.name.endswith(".toml"))


def bundled_scenario_path(name: str) -> Path:
    path = resources.files("photonradar") / "scenarios" / ("%s.toml" % name)
    if not path.is_file():
        raise ConfigurationError(
            "no bundled scenario %r (have: %s)" % (name, ", ".join(bundled_scenario_names()))
        )
    return Path(str(path))


def load_bundled(name: str) -> Scenario:
    return load_scenario(bundled_scenario_path(name))
