"""Time-evolving entangled photon pairs from a biexciton-exciton cascade."""

__version__ = "0.1.0"

from .constants import HBAR_UEV_PS
from .states import (Basis, BellTarget, ConstantCoherence, DecayingCoherence,
                     PSI_MINUS, PSI_PLUS, SourceModel, analyzer_states,
                     bell_vector)
from .gating import GateSet, GateWindow, periodic_gates, phase_period_ps, retained_fraction
from .density import (correlation_degree, evolving_state_fidelity, fidelity,
                      fidelity_curve, fidelity_from_correlations, gated_state,
                      rho_at)
from .montecarlo import (BasisPlan, EventBatch, FidelityEstimate, PairEvent,
                         estimate, scan, simulate_pairs, tally)
from .spectral import Spectrum, fwhm, truncated_decay_spectrum

__all__ = [
    "HBAR_UEV_PS", "Basis", "BellTarget", "ConstantCoherence",
    "DecayingCoherence", "PSI_MINUS", "PSI_PLUS", "SourceModel",
    "analyzer_states", "bell_vector", "GateSet", "GateWindow",
    "periodic_gates", "phase_period_ps", "retained_fraction",
    "correlation_degree", "evolving_state_fidelity", "fidelity",
    "fidelity_curve", "fidelity_from_correlations", "gated_state", "rho_at",
    "BasisPlan", "EventBatch", "FidelityEstimate", "PairEvent", "estimate",
    "scan", "simulate_pairs", "tally", "Spectrum", "fwhm",
    "truncated_decay_spectrum",
]
