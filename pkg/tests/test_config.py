import math

import pytest

from biphoton.config import (AnalyticEngine, ConfigError, DelayScan,
                             MonteCarloEngine, SpectrumScan, WidthScan,
                             parse_scenario)
from biphoton.states import ConstantCoherence, DecayingCoherence

BASE = """
source:
  splitting_S: 2.5
  exciton_lifetime_tau_X: 769.0
  jitter_fwhm: 577.0
  coherence:
    constant:
      v: 0.78
scan:
  gate_width_scan:
    tau_g: 0.0
    w: [49, 100, 200]
engine: analytic
output: out/run
"""


def test_parse_width_scan():
    sc = parse_scenario(BASE)
    assert sc.source.splitting_ueV == 2.5
    assert sc.source.jitter_fwhm_ps == 577.0
    assert sc.source.coherence == ConstantCoherence(0.78)
    assert sc.scan == WidthScan(0.0, (49.0, 100.0, 200.0))
    assert sc.engine == AnalyticEngine()
    assert sc.output == "out/run"


def test_parse_delay_scan_and_montecarlo_engine():
    text = BASE.replace(
        "  gate_width_scan:\n    tau_g: 0.0\n    w: [49, 100, 200]",
        "  gate_delay_scan:\n    tau_g: [0, 400, 800]\n    w: 537",
    ).replace("engine: analytic",
              "engine:\n  montecarlo:\n    n_pairs: 1000\n    seed: 42")
    sc = parse_scenario(text)
    assert sc.scan == DelayScan((0.0, 400.0, 800.0), 537.0)
    assert sc.engine == MonteCarloEngine(1000, 42)


def test_parse_spectrum_scan_with_inf_cut():
    text = BASE.replace(
        "  gate_width_scan:\n    tau_g: 0.0\n    w: [49, 100, 200]",
        "  spectrum:\n    t_cut: [390, 1000, inf]\n"
        "    grid: {e_min: -20, e_max: 20, n_points: 4096}",
    )
    sc = parse_scenario(text)
    assert isinstance(sc.scan, SpectrumScan)
    assert sc.scan.t_cuts_ps[:2] == (390.0, 1000.0)
    assert math.isinf(sc.scan.t_cuts_ps[2])
    assert sc.scan.grid == (-20.0, 20.0, 4096)


def test_parse_decaying_coherence():
    text = BASE.replace(
        "    constant:\n      v: 0.78",
        "    decaying:\n      background_ratio_beta: 0.1\n"
        "      background_lifetime_tau_B: 769.0\n"
        "      spin_scattering_tau_ss: 8000.0",
    )
    sc = parse_scenario(text)
    assert sc.source.coherence == DecayingCoherence(0.1, 769.0, 8000.0)


@pytest.mark.parametrize("old,new,fragment", [
    ("splitting_S: 2.5", "splitting_X: 2.5", "splitting_X"),
    ("jitter_fwhm: 577.0", "jitter_fwm: 577.0", "jitter_fwm"),
    ("      v: 0.78", "      v: 0.78\n      w: 1.0", "coherence.constant.w"),
    ("output: out/run", "output: out/run\nextra: 1", "extra"),
    ("    tau_g: 0.0", "    tau_gg: 0.0", "tau_gg"),
])
def test_unknown_keys_rejected_with_path(old, new, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_scenario(BASE.replace(old, new))


@pytest.mark.parametrize("old,new", [
    ("exciton_lifetime_tau_X: 769.0", "exciton_lifetime_tau_X: -5"),
    ("jitter_fwhm: 577.0", "jitter_fwhm: -1"),
    ("      v: 0.78", "      v: 1.5"),
    ("    w: [49, 100, 200]", "    w: []"),
    ("    w: [49, 100, 200]", "    w: [49, -3]"),
    ("engine: analytic", "engine:\n  montecarlo:\n    n_pairs: 0\n    seed: 1"),
    ("engine: analytic", "engine:\n  montecarlo:\n    n_pairs: 10\n    seed: -1"),
    ("output: out/run", "output: ''"),
])
def test_out_of_range_values_rejected(old, new):
    with pytest.raises(ConfigError):
        parse_scenario(BASE.replace(old, new))


def test_missing_sections_rejected():
    with pytest.raises(ConfigError, match="scan"):
        parse_scenario("source:\n  splitting_S: 1\n  exciton_lifetime_tau_X: 1\n"
                       "  coherence: {constant: {v: 1}}\nengine: analytic\noutput: x\n")


def test_invalid_yaml_rejected():
    with pytest.raises(ConfigError, match="YAML"):
        parse_scenario("source: [unbalanced\n")


def test_two_scan_types_rejected():
    text = BASE.replace(
        "engine: analytic",
        "engine: analytic").replace(
        "scan:",
        "scan:\n  gate_delay_scan:\n    tau_g: [0]\n    w: 10")
    with pytest.raises(ConfigError, match="exactly one"):
        parse_scenario(text)
