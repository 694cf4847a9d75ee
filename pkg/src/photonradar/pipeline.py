"""End-to-end run: source -> channel -> correlator -> estimator -> identify.

Every stochastic stage draws from its own Philox stream derived from the
scenario seed, so a scenario file and seed fully determine every artifact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from . import rand
from .channel import propagate
from .correlator import Correlogram, export_correlogram_csv, search
from .estimator import range_from_delay, velocity_from_scale
from .identify import DepthProfile, classify, depth_profile
from .scenario import DetectionReport, Scenario
from .source import SourceConfig, apply_detector, generate_pairs
from .timetag import TimeTagStream


@dataclass(frozen=True)
class PipelineResult:
    report: DetectionReport
    correlogram: Correlogram
    profile: DepthProfile | None
    reference: TimeTagStream
    received: TimeTagStream


def run_scenario(scn: Scenario, workers: int = 1) -> PipelineResult:
    seed = scn.seed
    signal, idler = generate_pairs(
        SourceConfig(scn.pair_rate, scn.duration, seed=_stream_seed(seed, rand.STREAM_PAIRS))
    )
    reference = apply_detector(
        signal, scn.reference_detector, _stream_seed(seed, rand.STREAM_REFERENCE_DETECTOR)
    )
    echoed = propagate(idler, scn.target, scn.channel, _stream_seed(seed, rand.STREAM_CHANNEL))
    received = apply_detector(
        echoed, scn.receive_detector, _stream_seed(seed, rand.STREAM_RECEIVE_DETECTOR)
    )

    correlogram, peak = search(reference, received, scn.grid, workers=workers)
    ref_singles = len(reference)
    recv_singles = len(received)

    if peak is None:
        report = DetectionReport(
            scenario=scn.name,
            seed=seed,
            detected=False,
            reference_singles=ref_singles,
            received_singles=recv_singles,
        )
        return PipelineResult(report, correlogram, None, reference, received)

    c_a = scn.channel.photon_speed
    profile = depth_profile(correlogram, peak.gamma_index, peak.doppler_index, c_a)
    depth_m = profile.depth_m if profile is not None else None
    label = classify(depth_m, scn.classify_threshold_m) if depth_m is not None else None

    scale = (1.0 + peak.doppler_offset) * peak.gamma
    report = DetectionReport(
        scenario=scn.name,
        seed=seed,
        detected=True,
        range_m=range_from_delay(peak.tau, c_a),
        velocity_mps=velocity_from_scale(scale, c_a),
        gamma_hat=peak.gamma,
        depth_m=depth_m,
        classification=label,
        peak=peak,
        reference_singles=ref_singles,
        received_singles=recv_singles,
        coincidences=peak.height,
        pair_single_ratio=peak.height / ref_singles if ref_singles else 0.0,
    )
    return PipelineResult(report, correlogram, profile, reference, received)


def _stream_seed(seed: int, stream: int) -> int:
    # operations take a single int seed; fold the stream label in here so
    # each stage gets an independent, order-free generator
    return (int(seed) << 8) + stream


def render_report(report: DetectionReport) -> str:
    lines = [
        "scenario: %s" % report.scenario,
        "seed: %d" % report.seed,
        "detected: %s" % ("yes" if report.detected else "no"),
    ]
    if report.detected:
        peak = report.peak
        lines += [
            "range_m: %.6f" % report.range_m,
            "velocity_mps: %.6f" % report.velocity_mps,
            "gamma_hat: %s" % repr(report.gamma_hat),
            "depth_m: %s" % ("%.6f" % report.depth_m if report.depth_m is not None else "n/a"),
            "classification: %s"
            % (report.classification.value if report.classification else "n/a"),
            "peak_tau_ps: %.3f" % peak.tau,
            "peak_doppler_offset: %s" % repr(peak.doppler_offset),
            "peak_height: %d" % peak.height,
            "peak_background_mean: %.6f" % peak.background_mean,
            "peak_significance: %.3f" % peak.significance,
        ]
    lines += [
        "reference_singles: %d" % report.reference_singles,
        "received_singles: %d" % report.received_singles,
        "coincidences: %d" % report.coincidences,
        "pair_single_ratio: %.6f" % report.pair_single_ratio,
    ]
    return "\n".join(lines) + "\n"


def write_artifacts(result: PipelineResult, outdir) -> dict[str, Path]:
    """Write report.txt, correlogram.csv and depth_profile.csv into outdir."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "report": outdir / "report.txt",
        "correlogram": outdir / "correlogram.csv",
        "depth_profile": outdir / "depth_profile.csv",
    }
    paths["report"].write_text(render_report(result.report))
    export_correlogram_csv(result.correlogram, paths["correlogram"])
    _write_depth_profile(result, paths["depth_profile"])
    return paths


def _write_depth_profile(result: PipelineResult, path: Path) -> None:
    edges = result.correlogram.tau_edges()
    peak = result.report.peak
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["tau_ps", "count"])
        if result.profile is None or peak is None:
            return
        for tau, count in zip(edges, result.profile.tau_slice):
            writer.writerow([int(tau), int(count)])
