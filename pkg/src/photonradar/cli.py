"""Command-line entry point.

Exit codes: 0 success/detection, 1 error, 2 clean no-detection. The split
lets shell scripts tell "nothing there" apart from "something broke".
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import tagio
from .correlator import export_correlogram_csv, search, write_correlogram_binary
from .errors import PhotonRadarError
from .estimator import C_AIR, dilation_delta, lorentz_gamma
from .jam import JamScenario, jam_table
from .pipeline import run_scenario, write_artifacts
from .rangemodel import fit_rates, max_range, read_rate_csv
from .scenario import bundled_scenario_path, load_scenario

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_DETECTION = 2


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PhotonRadarError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="photonradar",
        description="Time-correlated photon-pair radar simulator and detector",
    )
    sub = parser.add_subparsers(required=True)

    sim = sub.add_parser("simulate", help="run a scenario end to end")
    sim.add_argument("scenario", help="scenario TOML path or bundled scenario name")
    sim.add_argument("--out", default="out", help="artifact directory")
    sim.add_argument("--save-streams", action="store_true", help="also dump ref/recv tag files")
    sim.add_argument("--workers", type=int, default=1)
    sim.set_defaults(func=_cmd_simulate)

    corr = sub.add_parser("correlate", help="correlate two time-tag files offline")
    corr.add_argument("--ref", required=True, help="reference .qtt file")
    corr.add_argument("--recv", required=True, help="received .qtt file")
    corr.add_argument("--scenario", required=True, help="scenario providing the hypothesis grid")
    corr.add_argument("--out", default="out", help="artifact directory")
    corr.add_argument("--binary", action="store_true", help="also write the binary dump")
    corr.set_defaults(func=_cmd_correlate)

    fit = sub.add_parser("fit-range", help="fit the rate-vs-distance model to CSV samples")
    fit.add_argument("csv", help="CSV of x_mm,rate rows")
    fit.add_argument("--quadratic", action="store_true", help="fit the literal b + a*x^2 form")
    fit.add_argument("--pair-rate", type=float, default=None, help="extrapolate max range at this rate")
    fit.add_argument("--min-signal", type=float, default=10.0)
    fit.set_defaults(func=_cmd_fit_range)

    jam = sub.add_parser("jam-table", help="signal-to-jam ratios over entanglement depth")
    jam.add_argument("--photons", type=int, default=1000, help="photons transmitted (K)")
    jam.add_argument("--cross-section", type=float, default=0.1)
    jam.add_argument("--quantum-cross-section", type=float, default=0.1)
    jam.add_argument("--jammer", type=float, default=100.0, help="mean jammer photons (P_j)")
    jam.add_argument("--m-max", type=int, default=3)
    jam.set_defaults(func=_cmd_jam_table)

    rel = sub.add_parser("relativity", help="dilation numbers for a target speed")
    rel.add_argument("--v", type=float, required=True, help="radial speed, m/s")
    rel.add_argument("--c-a", type=float, default=C_AIR, help="photon speed in air, m/s")
    rel.set_defaults(func=_cmd_relativity)

    return parser


def _resolve_scenario(ref: str):
    path = Path(ref)
    if not path.exists() and not ref.endswith(".toml"):
        path = bundled_scenario_path(ref)
    return load_scenario(path)


def _cmd_simulate(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    result = run_scenario(scenario, workers=args.workers)
    paths = write_artifacts(result, args.out)
    if args.save_streams:
        tagio.write_stream(Path(args.out) / "reference.qtt", result.reference)
        tagio.write_stream(Path(args.out) / "received.qtt", result.received)
    print(paths["report"].read_text(), end="")
    return EXIT_OK if result.report.detected else EXIT_NO_DETECTION


def _cmd_correlate(args) -> int:
    scenario = _resolve_scenario(args.scenario)
    ref = tagio.read_stream(args.ref)
    recv = tagio.read_stream(args.recv)
    correlogram, peak = search(ref, recv, scenario.grid)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    export_correlogram_csv(correlogram, outdir / "correlogram.csv")
    if args.binary:
        write_correlogram_binary(correlogram, outdir / "correlogram.qcg")
    if peak is None:
        print("no detection")
        return EXIT_NO_DETECTION
    print("peak_tau_ps: %.3f" % peak.tau)
    print("peak_doppler_offset: %s" % repr(peak.doppler_offset))
    print("peak_gamma: %s" % repr(peak.gamma))
    print("peak_height: %d" % peak.height)
    print("peak_significance: %.3f" % peak.significance)
    return EXIT_OK


def _cmd_fit_range(args) -> int:
    samples = read_rate_csv(args.csv)
    fit = fit_rates(samples, quadratic=args.quadratic)
    print("amplitude_a: %.6f" % fit.amplitude)
    print("background_b: %.6f" % fit.background)
    print("residual: %.6g" % fit.residual)
    if args.pair_rate is not None:
        extrapolated = max_range(args.pair_rate, fit, args.min_signal)
        print("max_range_mm: %.1f" % extrapolated)
    return EXIT_OK


def _cmd_jam_table(args) -> int:
    scenario = JamScenario(
        photons_sent=args.photons,
        cross_section=args.cross_section,
        quantum_cross_section=args.quantum_cross_section,
        jammer_photons=args.jammer,
    )
    print("m  s/j_classical  s/j_entangled  log2_entangled")
    for m, classical, entangled, log2e in jam_table(scenario, args.m_max):
        print("%-2d %13.6g %14.6g %15.4f" % (m, classical, entangled, log2e))
    return EXIT_OK


def _cmd_relativity(args) -> int:
    gamma = lorentz_gamma(args.v, args.c_a)
    beta = args.v / args.c_a
    per_second_ns = (gamma - 1.0) * 1e9
    doppler_delta_ns = dilation_delta(1.0, beta) * 1e9
    range_error_mm = args.c_a * (gamma - 1.0) / 2.0 * 1e3
    print("beta: %s" % repr(beta))
    print("gamma: %.15f" % gamma)
    print("gamma_minus_1: %.6g" % (gamma - 1.0))
    print("dilation_ns_per_s: %.6g" % per_second_ns)
    print("doppler_delta_ns_per_s: %.6g" % doppler_delta_ns)
    print("range_error_mm_per_s: %.6g" % range_error_mm)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
