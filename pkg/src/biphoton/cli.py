"""Command-line interface.

Subcommands: scan-width, scan-delay, spectrum (scenario runners), simulate
(export time tags), analyze (ingest time tags).  Exit codes: 0 success,
1 usage/config error, 2 data error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import runner
from .config import (AnalyticEngine, DelayScan, MonteCarloEngine, Scenario,
                     SpectrumScan, WidthScan, ConfigError, load_scenario)
from .gating import GateWindow
from .montecarlo import BASIS_ORDER, InsufficientCountsError
from .timetags import TimeTagFormatError

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_scenario_args(sub):
    sub.add_argument("--config", required=True, help="scenario YAML file")
    sub.add_argument("--seed", type=int, help="override Monte-Carlo seed")
    sub.add_argument("--pairs", type=int, help="override Monte-Carlo pair count")
    sub.add_argument("--out", help="override output path prefix")
    sub.add_argument("--engine", choices=["analytic", "mc"], help="override engine")
    sub.add_argument("--workers", type=int, help="Monte-Carlo worker threads")
    sub.add_argument("--no-plots", action="store_true", help="skip figure rendering")


def build_parser() -> _Parser:
    parser = _Parser(prog="biphoton",
                     description="Entangled-photon-pair cascade simulator and analyzer")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, text in [("scan-width", "fidelity vs gate width"),
                       ("scan-delay", "fidelity vs gate delay"),
                       ("spectrum", "truncated-decay spectra")]:
        _add_scenario_args(subs.add_parser(name, help=text))
    sim = subs.add_parser("simulate", help="export simulated time tags")
    _add_scenario_args(sim)
    ana = subs.add_parser("analyze", help="estimate fidelity from a time-tag file")
    ana.add_argument("path", help="time-tag CSV file")
    ana.add_argument("--gate-start", type=float, default=0.0,
                     help="gate start in ps (default 0)")
    ana.add_argument("--gate-width", type=float, required=True,
                     help="gate width in ps")
    return parser


def _resolve_scenario(args) -> Scenario:
    scenario = load_scenario(args.config)
    engine = scenario.engine
    if args.engine == "analytic":
        engine = AnalyticEngine()
    elif args.engine == "mc" and not isinstance(engine, MonteCarloEngine):
        if args.pairs is None or args.seed is None:
            raise ConfigError(
                "--engine mc without montecarlo config requires --pairs and --seed")
        engine = MonteCarloEngine(args.pairs, args.seed)
    if isinstance(engine, MonteCarloEngine):
        if args.pairs is not None:
            if args.pairs <= 0:
                raise ConfigError("--pairs must be positive")
            engine = dataclasses.replace(engine, n_pairs=args.pairs)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be nonnegative")
            engine = dataclasses.replace(engine, seed=args.seed)
    scenario = dataclasses.replace(scenario, engine=engine)
    if args.out:
        scenario = dataclasses.replace(scenario, output=args.out)
    return scenario


_SCAN_TYPES = {"scan-width": WidthScan, "scan-delay": DelayScan,
               "spectrum": SpectrumScan}


def _run_scan(args) -> int:
    scenario = _resolve_scenario(args)
    expected = _SCAN_TYPES[args.command]
    if not isinstance(scenario.scan, expected):
        raise ConfigError(
            f"scan: config declares {type(scenario.scan).__name__}, "
            f"but the {args.command} subcommand was requested")
    for path in runner.run_scenario(scenario, make_plots=not args.no_plots,
                                    workers=args.workers):
        print(path)
    return EXIT_OK


def _run_simulate(args) -> int:
    scenario = _resolve_scenario(args)
    if not isinstance(scenario.engine, MonteCarloEngine):
        raise ConfigError("simulate requires the montecarlo engine "
                          "(configure it or pass --engine mc --pairs --seed)")
    for path in runner.export_events(scenario, workers=args.workers):
        print(path)
    return EXIT_OK


def _run_analyze(args) -> int:
    if args.gate_width <= 0:
        raise ConfigError("--gate-width must be positive")
    gate = GateWindow(args.gate_start, args.gate_width)
    report = runner.analyze_timetags(args.path, gate)
    print(f"gate: [{gate.start_ps:g}, {gate.end_ps:g}) ps")
    for code, basis in enumerate(BASIS_ORDER):
        est = report.correlations[basis]
        print(f"{basis.value:>11}: co={report.counts.co[code]} "
              f"cross={report.counts.cross[code]} "
              f"C={est.value:+.6f} sigma={est.sigma:.6f}")
    print(f"fidelity: {report.fidelity.value:.6f} "
          f"sigma={report.fidelity.sigma:.6f}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command in _SCAN_TYPES:
            return _run_scan(args)
        if args.command == "simulate":
            return _run_simulate(args)
        return _run_analyze(args)
    except (ConfigError, FileNotFoundError) as exc:
        if args.command == "analyze" and isinstance(exc, FileNotFoundError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DATA
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TimeTagFormatError, InsufficientCountsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
