"""Monte-Carlo coincidence simulation with detector timing jitter.

Event generation is deterministic and parallelism-proof: the event index
space is cut into fixed shards of SHARD_SIZE, shard j draws from a Philox
counter-based generator keyed by (seed, j), and shards are concatenated in
index order.  The same (model, n_pairs, seed, plan) therefore yields the
same stream no matter how many workers generate it.

Per event the draws are, in order: one uniform for the exponential delay
(inverse CDF), one standard normal for the jitter (numpy ziggurat), one
uniform for the joint analyzer outcome.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .states import Basis, SourceModel

SHARD_SIZE = 1 << 16

BASIS_ORDER = (Basis.RECTILINEAR, Basis.DIAGONAL, Basis.CIRCULAR)

# joint outcome codes for (biexciton photon, exciton photon) analyzer clicks
OUTCOME_PP, OUTCOME_PM, OUTCOME_MP, OUTCOME_MM = 0, 1, 2, 3
CO_OUTCOMES = (OUTCOME_PP, OUTCOME_MM)


class InsufficientCountsError(RuntimeError):
    """A basis has no gated events, so its correlation degree is undefined."""


@dataclass(frozen=True)
class BasisPlan:
    """Deterministic allocation of events to bases by index.

    Event i is assigned the basis at position i mod sum(weights) of the
    pattern R*weights[0] + D*weights[1] + C*weights[2].
    """

    weights: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self):
        if len(self.weights) != 3 or any(w < 0 for w in self.weights) \
                or sum(self.weights) == 0:
            raise ValueError("weights must be three nonnegative ints, not all zero")

    def pattern(self) -> np.ndarray:
        return np.repeat(np.arange(3, dtype=np.uint8), self.weights)

    def codes_for(self, start: int, count: int) -> np.ndarray:
        pat = self.pattern()
        return pat[np.arange(start, start + count) % len(pat)]


@dataclass(frozen=True)
class PairEvent:
    tau_true_ps: float
    tau_meas_ps: float
    basis: Basis
    outcome: int


@dataclass
class EventBatch:
    """Column-oriented event store; iterates as PairEvent for convenience."""

    tau_true_ps: np.ndarray
    tau_meas_ps: np.ndarray
    basis: np.ndarray    # uint8 index into BASIS_ORDER
    outcome: np.ndarray  # uint8 outcome code

    def __len__(self):
        return len(self.tau_meas_ps)

    def __iter__(self):
        for i in range(len(self)):
            yield PairEvent(float(self.tau_true_ps[i]), float(self.tau_meas_ps[i]),
                            BASIS_ORDER[self.basis[i]], int(self.outcome[i]))

    @staticmethod
    def concatenate(batches):
        return EventBatch(
            np.concatenate([b.tau_true_ps for b in batches]),
            np.concatenate([b.tau_meas_ps for b in batches]),
            np.concatenate([b.basis for b in batches]),
            np.concatenate([b.outcome for b in batches]),
        )


def outcome_contrast(basis_code: int, v, cos_phase):
    """Contrast x fixing the joint outcome probabilities in one basis.

    Closed form of the joint projector expectations of rho(tau): the four
    outcome probabilities (++, +-, -+, --) are ((1+x)/4, (1-x)/4, (1-x)/4,
    (1+x)/4) with x = v, v*cos_phase, -v*cos_phase for the R, D, C bases.
    """
    if basis_code == 0:
        return np.asarray(v) + 0.0 * np.asarray(cos_phase)
    if basis_code == 1:
        return np.asarray(v) * np.asarray(cos_phase)
    if basis_code == 2:
        return -np.asarray(v) * np.asarray(cos_phase)
    raise ValueError(f"bad basis code {basis_code}")


def _generate_shard(model: SourceModel, seed: int, shard: int, start: int,
                    count: int, plan: BasisPlan) -> EventBatch:
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(shard)],
                   dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))

    u_delay = rng.random(count)
    tau_true = -model.lifetime_ps * np.log1p(-u_delay)
    normals = rng.standard_normal(count)
    tau_meas = tau_true + model.jitter_sigma_ps * normals
    u_outcome = rng.random(count)

    basis = plan.codes_for(start, count)
    v = np.asarray(model.coherence_at(tau_true), dtype=float)
    cos_phase = np.cos(model.phase_at(tau_true))

    x = np.empty(count)
    for code in range(3):
        sel = basis == code
        if np.any(sel):
            x[sel] = outcome_contrast(code, v[sel], cos_phase[sel])

    # cumulative outcome thresholds: (1+x)/4, 1/2, (3-x)/4, 1
    outcome = np.where(
        u_outcome < (1.0 + x) / 4.0, OUTCOME_PP,
        np.where(u_outcome < 0.5, OUTCOME_PM,
                 np.where(u_outcome < (3.0 - x) / 4.0, OUTCOME_MP, OUTCOME_MM)),
    ).astype(np.uint8)
    return EventBatch(tau_true, tau_meas, basis, outcome)


def simulate_pairs(model: SourceModel, n_pairs: int, seed: int,
                   plan: BasisPlan = BasisPlan(), workers: int | None = None
                   ) -> EventBatch:
    """Generate n_pairs coincidence events; identical for any worker count."""
    if n_pairs <= 0:
        raise ValueError("n_pairs must be positive")
    shards = [(j, j * SHARD_SIZE, min(SHARD_SIZE, n_pairs - j * SHARD_SIZE))
              for j in range((n_pairs + SHARD_SIZE - 1) // SHARD_SIZE)]

    def run(args):
        j, start, count = args
        return _generate_shard(model, seed, j, start, count, plan)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(run, shards))
    else:
        batches = [run(s) for s in shards]
    return EventBatch.concatenate(batches)


# ---------------------------------------------------------------------------
# tallies and estimators

@dataclass
class CorrelationCounts:
    """Co/cross coincidence tallies per basis (index order BASIS_ORDER)."""

    co: np.ndarray = field(default_factory=lambda: np.zeros(3, dtype=np.int64))
    cross: np.ndarray = field(default_factory=lambda: np.zeros(3, dtype=np.int64))

    def total(self) -> int:
        return int(self.co.sum() + self.cross.sum())

    def __add__(self, other):
        return CorrelationCounts(self.co + other.co, self.cross + other.cross)


def tally(events: EventBatch, gate) -> CorrelationCounts:
    """Count gated co/cross outcomes per basis; gate tests the measured delay."""
    from . import gating as _gating
    if isinstance(gate, (_gating.GateWindow, _gating.GateSet)):
        mask = gate.contains(events.tau_meas_ps)
    else:
        raise TypeError(f"expected GateWindow or GateSet, got {type(gate).__name__}")
    is_co = np.isin(events.outcome, CO_OUTCOMES)
    counts = CorrelationCounts()
    for code in range(3):
        sel = mask & (events.basis == code)
        counts.co[code] = np.count_nonzero(sel & is_co)
        counts.cross[code] = np.count_nonzero(sel & ~is_co)
    return counts


@dataclass(frozen=True)
class CorrelationEstimate:
    value: float
    sigma: float


@dataclass(frozen=True)
class FidelityEstimate:
    value: float
    sigma: float


@dataclass(frozen=True)
class EstimateReport:
    correlations: dict  # Basis -> CorrelationEstimate
    fidelity: FidelityEstimate
    counts: CorrelationCounts


def estimate(counts: CorrelationCounts) -> EstimateReport:
    """Correlation degrees and Bell-state fidelity with Poissonian errors."""
    correlations = {}
    variance = 0.0
    for code, basis in enumerate(BASIS_ORDER):
        n = int(counts.co[code] + counts.cross[code])
        if n == 0:
            raise InsufficientCountsError(
                f"no gated events in the {basis.value} basis")
        c = (counts.co[code] - counts.cross[code]) / n
        sigma = math.sqrt(max(0.0, (1.0 - c * c) / n))
        correlations[basis] = CorrelationEstimate(c, sigma)
        variance += sigma * sigma
    c_r = correlations[Basis.RECTILINEAR].value
    c_d = correlations[Basis.DIAGONAL].value
    c_c = correlations[Basis.CIRCULAR].value
    fid = FidelityEstimate((c_r + c_d - c_c + 1.0) / 4.0, 0.25 * math.sqrt(variance))
    return EstimateReport(correlations, fid, counts)


@dataclass(frozen=True)
class ScanPoint:
    gate: object  # GateWindow or GateSet
    fidelity: FidelityEstimate
    retained_fraction: float


def scan(model: SourceModel, gates, n_pairs: int, seed: int,
         plan: BasisPlan = BasisPlan(), workers: int | None = None
         ) -> list[ScanPoint]:
    """One event pass tallied against every gate (gates may overlap)."""
    events = simulate_pairs(model, n_pairs, seed, plan=plan, workers=workers)
    points = []
    for gate in gates:
        counts = tally(events, gate)
        report = estimate(counts)
        points.append(ScanPoint(gate, report.fidelity, counts.total() / n_pairs))
    return points
