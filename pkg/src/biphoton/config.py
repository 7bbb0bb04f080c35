"""Scenario configuration: strict YAML parsing into model/scan/engine objects.

Unknown keys are rejected with their full key path so typos never silently
fall back to defaults.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import yaml

from .states import ConstantCoherence, DecayingCoherence, SourceModel


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class WidthScan:
    tau_g_ps: float
    widths_ps: tuple[float, ...]


@dataclass(frozen=True)
class DelayScan:
    tau_g_ps: tuple[float, ...]
    width_ps: float


@dataclass(frozen=True)
class SpectrumScan:
    t_cuts_ps: tuple[float, ...]
    grid: tuple[float, float, int] | None  # (e_min, e_max, n_points)


@dataclass(frozen=True)
class AnalyticEngine:
    pass


@dataclass(frozen=True)
class MonteCarloEngine:
    n_pairs: int
    seed: int


@dataclass(frozen=True)
class Scenario:
    source: SourceModel
    scan: WidthScan | DelayScan | SpectrumScan
    engine: AnalyticEngine | MonteCarloEngine
    output: str


def _require_mapping(node, path):
    if not isinstance(node, dict):
        raise ConfigError(f"{path}: expected a mapping")
    return node


def _check_keys(node, path, allowed, required=()):
    for key in node:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}: unknown key")
    for key in required:
        if key not in node:
            raise ConfigError(f"{path}.{key}: missing required key")


def _number(node, path, minimum=None, exclusive=False, allow_inf=False):
    if isinstance(node, str) and allow_inf and node.lower() in ("inf", "infinity"):
        node = math.inf
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ConfigError(f"{path}: expected a number")
    x = float(node)
    if minimum is not None and (x <= minimum if exclusive else x < minimum):
        op = ">" if exclusive else ">="
        raise ConfigError(f"{path}: must be {op} {minimum}, got {x}")
    return x


def _number_list(node, path, **kw):
    if not isinstance(node, list) or not node:
        raise ConfigError(f"{path}: expected a non-empty list of numbers")
    return tuple(_number(v, f"{path}[{i}]", **kw) for i, v in enumerate(node))


def _parse_coherence(node, path):
    node = _require_mapping(node, path)
    _check_keys(node, path, {"constant", "decaying"})
    if len(node) != 1:
        raise ConfigError(f"{path}: exactly one of 'constant' or 'decaying' required")
    if "constant" in node:
        sub = _require_mapping(node["constant"], f"{path}.constant")
        _check_keys(sub, f"{path}.constant", {"v"}, required=("v",))
        v = _number(sub["v"], f"{path}.constant.v", minimum=0.0)
        if v > 1.0:
            raise ConfigError(f"{path}.constant.v: must be <= 1, got {v}")
        return ConstantCoherence(v)
    sub = _require_mapping(node["decaying"], f"{path}.decaying")
    keys = ("background_ratio_beta", "background_lifetime_tau_B", "spin_scattering_tau_ss")
    _check_keys(sub, f"{path}.decaying", set(keys), required=keys)
    return DecayingCoherence(
        _number(sub["background_ratio_beta"], f"{path}.decaying.background_ratio_beta",
                minimum=0.0),
        _number(sub["background_lifetime_tau_B"], f"{path}.decaying.background_lifetime_tau_B",
                minimum=0.0, exclusive=True),
        _number(sub["spin_scattering_tau_ss"], f"{path}.decaying.spin_scattering_tau_ss",
                minimum=0.0, exclusive=True),
    )


def _parse_source(node):
    node = _require_mapping(node, "source")
    _check_keys(node, "source",
                {"splitting_S", "exciton_lifetime_tau_X", "jitter_fwhm", "coherence"},
                required=("splitting_S", "exciton_lifetime_tau_X", "coherence"))
    return SourceModel(
        splitting_ueV=_number(node["splitting_S"], "source.splitting_S"),
        lifetime_ps=_number(node["exciton_lifetime_tau_X"],
                            "source.exciton_lifetime_tau_X", minimum=0.0, exclusive=True),
        jitter_fwhm_ps=_number(node.get("jitter_fwhm", 0.0), "source.jitter_fwhm",
                               minimum=0.0),
        coherence=_parse_coherence(node["coherence"], "source.coherence"),
    )


def _parse_scan(node):
    node = _require_mapping(node, "scan")
    _check_keys(node, "scan", {"gate_width_scan", "gate_delay_scan", "spectrum"})
    if len(node) != 1:
        raise ConfigError("scan: exactly one scan type required")
    if "gate_width_scan" in node:
        sub = _require_mapping(node["gate_width_scan"], "scan.gate_width_scan")
        _check_keys(sub, "scan.gate_width_scan", {"tau_g", "w"}, required=("tau_g", "w"))
        return WidthScan(
            _number(sub["tau_g"], "scan.gate_width_scan.tau_g"),
            _number_list(sub["w"], "scan.gate_width_scan.w", minimum=0.0, exclusive=True),
        )
    if "gate_delay_scan" in node:
        sub = _require_mapping(node["gate_delay_scan"], "scan.gate_delay_scan")
        _check_keys(sub, "scan.gate_delay_scan", {"tau_g", "w"}, required=("tau_g", "w"))
        return DelayScan(
            _number_list(sub["tau_g"], "scan.gate_delay_scan.tau_g"),
            _number(sub["w"], "scan.gate_delay_scan.w", minimum=0.0, exclusive=True),
        )
    sub = _require_mapping(node["spectrum"], "scan.spectrum")
    _check_keys(sub, "scan.spectrum", {"t_cut", "grid"}, required=("t_cut",))
    grid = None
    if "grid" in sub:
        g = _require_mapping(sub["grid"], "scan.spectrum.grid")
        _check_keys(g, "scan.spectrum.grid", {"e_min", "e_max", "n_points"},
                    required=("e_min", "e_max", "n_points"))
        n = g["n_points"]
        if isinstance(n, bool) or not isinstance(n, int) or n < 64:
            raise ConfigError("scan.spectrum.grid.n_points: expected an integer >= 64")
        grid = (_number(g["e_min"], "scan.spectrum.grid.e_min"),
                _number(g["e_max"], "scan.spectrum.grid.e_max"), n)
        if grid[1] <= grid[0]:
            raise ConfigError("scan.spectrum.grid: e_max must exceed e_min")
    return SpectrumScan(
        _number_list(sub["t_cut"], "scan.spectrum.t_cut", minimum=0.0,
                     exclusive=True, allow_inf=True),
        grid,
    )


def _parse_engine(node):
    if node == "analytic":
        return AnalyticEngine()
    node = _require_mapping(node, "engine")
    _check_keys(node, "engine", {"analytic", "montecarlo"})
    if len(node) != 1:
        raise ConfigError("engine: exactly one of 'analytic' or 'montecarlo' required")
    if "analytic" in node:
        if node["analytic"] not in (None, {}):
            raise ConfigError("engine.analytic: takes no parameters")
        return AnalyticEngine()
    sub = _require_mapping(node["montecarlo"], "engine.montecarlo")
    _check_keys(sub, "engine.montecarlo", {"n_pairs", "seed"}, required=("n_pairs", "seed"))
    n_pairs, seed = sub["n_pairs"], sub["seed"]
    if isinstance(n_pairs, bool) or not isinstance(n_pairs, int) or n_pairs <= 0:
        raise ConfigError("engine.montecarlo.n_pairs: expected a positive integer")
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("engine.montecarlo.seed: expected a nonnegative integer")
    return MonteCarloEngine(n_pairs, seed)


def parse_scenario(text: str) -> Scenario:
    try:
        root = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}") from None
    root = _require_mapping(root, "<root>")
    _check_keys(root, "<root>", {"source", "scan", "engine", "output"},
                required=("source", "scan", "engine", "output"))
    if not isinstance(root["output"], str) or not root["output"]:
        raise ConfigError("output: expected a non-empty path prefix")
    try:
        source = _parse_source(root["source"])
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"source: {exc}") from None
    return Scenario(source, _parse_scan(root["scan"]), _parse_engine(root["engine"]),
                    root["output"])


def load_scenario(path) -> Scenario:
    with open(path) as fh:
        return parse_scenario(fh.read())
