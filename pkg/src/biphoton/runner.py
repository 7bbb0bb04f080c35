"""Scenario execution: run scans, write CSV + figures + a run manifest."""

from __future__ import annotations

import dataclasses
import json
import math
import os

from . import __version__, density, montecarlo, plots, timetags
from .config import (AnalyticEngine, DelayScan, MonteCarloEngine, Scenario,
                     SpectrumScan, WidthScan)
from .gating import GateWindow
from .spectral import truncated_decay_spectrum
from .states import PSI_PLUS, ConstantCoherence, DecayingCoherence


def _fmt(x: float) -> str:
    """6 significant digits for tabular output."""
    return f"{x:.6g}"


def _source_dict(model):
    coh = model.coherence
    if isinstance(coh, ConstantCoherence):
        coherence = {"constant": {"v": coh.v}}
    elif isinstance(coh, DecayingCoherence):
        coherence = {"decaying": {
            "background_ratio_beta": coh.background_ratio,
            "background_lifetime_tau_B": coh.background_lifetime_ps,
            "spin_scattering_tau_ss": coh.spin_scattering_ps,
        }}
    else:
        raise TypeError(f"unknown coherence model {type(coh).__name__}")
    return {
        "splitting_S": model.splitting_ueV,
        "exciton_lifetime_tau_X": model.lifetime_ps,
        "jitter_fwhm": model.jitter_fwhm_ps,
        "coherence": coherence,
    }


def _manifest(scenario: Scenario, outputs: list[str]) -> dict:
    scan = dataclasses.asdict(scenario.scan)
    scan_type = type(scenario.scan).__name__
    if isinstance(scenario.engine, MonteCarloEngine):
        engine = {"montecarlo": dataclasses.asdict(scenario.engine)}
        seed = scenario.engine.seed
    else:
        engine = "analytic"
        seed = None
    return {
        "tool": "biphoton",
        "version": __version__,
        "source": _source_dict(scenario.source),
        "scan_type": scan_type,
        "scan": scan,
        "engine": engine,
        "seed": seed,
        "output_prefix": scenario.output,
        "outputs": outputs,
    }


class _OutputTracker:
    """Removes everything already written if the run dies halfway."""

    def __init__(self):
        self.paths: list[str] = []

    def register(self, path) -> str:
        self.paths.append(str(path))
        return str(path)

    def cleanup(self):
        for p in self.paths:
            if os.path.exists(p):
                os.remove(p)


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _run_width_scan(scenario, tracker, make_plots, workers):
    scan, model = scenario.scan, scenario.source
    gates = [GateWindow(scan.tau_g_ps, w) for w in scan.widths_ps]
    if isinstance(scenario.engine, AnalyticEngine):
        rows = []
        for gate in gates:
            summary = density.gated_state(gate, model)
            rows.append((gate.width_ps, density.fidelity(summary.rho, PSI_PLUS),
                         0.0, summary.retained_fraction))
    else:
        points = montecarlo.scan(model, gates, scenario.engine.n_pairs,
                                 scenario.engine.seed, workers=workers)
        rows = [(g.width_ps, p.fidelity.value, p.fidelity.sigma, p.retained_fraction)
                for g, p in zip(gates, points)]
    csv_path = tracker.register(scenario.output + "_gate_width_scan.csv")
    _write_csv(csv_path, ["w_ps", "fidelity", "sigma", "retained_fraction"], rows)
    if make_plots:
        fig_path = tracker.register(scenario.output + "_gate_width_scan.png")
        plots.save_width_scan_figure(fig_path, [r[0] for r in rows],
                                     [r[1] for r in rows], [r[3] for r in rows])


def _run_delay_scan(scenario, tracker, make_plots, workers):
    scan, model = scenario.scan, scenario.source
    gates = [GateWindow(t, scan.width_ps) for t in scan.tau_g_ps]
    if isinstance(scenario.engine, AnalyticEngine):
        curve = density.fidelity_curve(gates, model, PSI_PLUS)
        rows = [(p.gate_start_ps, p.fidelity, 0.0) for p in curve]
    else:
        points = montecarlo.scan(model, gates, scenario.engine.n_pairs,
                                 scenario.engine.seed, workers=workers)
        rows = [(g.start_ps, p.fidelity.value, p.fidelity.sigma)
                for g, p in zip(gates, points)]
    csv_path = tracker.register(scenario.output + "_gate_delay_scan.csv")
    _write_csv(csv_path, ["tau_g_ps", "fidelity", "sigma"], rows)
    if make_plots:
        fig_path = tracker.register(scenario.output + "_gate_delay_scan.png")
        plots.save_delay_scan_figure(fig_path, [r[0] for r in rows],
                                     [r[1] for r in rows], [r[2] for r in rows])


def _tcut_label(t_cut: float) -> str:
    return "inf" if math.isinf(t_cut) else _fmt(t_cut)


def _run_spectrum_scan(scenario, tracker, make_plots):
    scan, model = scenario.scan, scenario.source
    labeled = []
    for t_cut in scan.t_cuts_ps:
        spec = truncated_decay_spectrum(model.lifetime_ps, t_cut,
                                        grid=scan.grid).normalized()
        label = _tcut_label(t_cut)
        csv_path = tracker.register(f"{scenario.output}_spectrum_tcut{label}.csv")
        _write_csv(csv_path, ["energy_uev", "power_normalized"],
                   zip(spec.energies_ueV, spec.power))
        labeled.append((f"t_cut = {label} ps", spec))
    if make_plots:
        fig_path = tracker.register(scenario.output + "_spectrum.png")
        plots.save_spectrum_figure(fig_path, labeled)


def run_scenario(scenario: Scenario, make_plots: bool = True,
                 workers: int | None = None) -> list[str]:
    """Execute one scenario; returns the list of files written."""
    out_dir = os.path.dirname(scenario.output)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    tracker = _OutputTracker()
    try:
        if isinstance(scenario.scan, WidthScan):
            _run_width_scan(scenario, tracker, make_plots, workers)
        elif isinstance(scenario.scan, DelayScan):
            _run_delay_scan(scenario, tracker, make_plots, workers)
        elif isinstance(scenario.scan, SpectrumScan):
            _run_spectrum_scan(scenario, tracker, make_plots)
        else:
            raise TypeError(f"unknown scan type {type(scenario.scan).__name__}")
        manifest_path = tracker.register(scenario.output + "_manifest.json")
        with open(manifest_path, "w") as fh:
            json.dump(_manifest(scenario, tracker.paths), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except Exception:
        tracker.cleanup()
        raise
    return tracker.paths


def export_events(scenario: Scenario, workers: int | None = None) -> list[str]:
    """Simulate pairs and export them in the time-tag format."""
    if not isinstance(scenario.engine, MonteCarloEngine):
        raise TypeError("simulate requires the montecarlo engine")
    out_dir = os.path.dirname(scenario.output)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    events = montecarlo.simulate_pairs(scenario.source, scenario.engine.n_pairs,
                                       scenario.engine.seed, workers=workers)
    tracker = _OutputTracker()
    try:
        tags_path = tracker.register(scenario.output + "_timetags.csv")
        timetags.export_timetags(tags_path, events)
        manifest_path = tracker.register(scenario.output + "_manifest.json")
        with open(manifest_path, "w") as fh:
            json.dump(_manifest(scenario, tracker.paths), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except Exception:
        tracker.cleanup()
        raise
    return tracker.paths


def analyze_timetags(path, gate) -> montecarlo.EstimateReport:
    """Run the standard estimator chain on an ingested time-tag file."""
    events = timetags.read_timetags(path)
    counts = montecarlo.tally(events, gate)
    return montecarlo.estimate(counts)
