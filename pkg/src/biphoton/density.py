"""Time-dependent biphoton density matrix, fidelities, and gate averages.

rho(tau) has the closed form used everywhere here:
diagonal (1+v, 1-v, 1-v, 1+v)/4 with a coherence (v/2)*exp(-i*phase) between
HH and VV, where phase = splitting * tau / hbar and v = v(tau) comes from the
source's coherence model.  Gate averages are intensity-weighted integrals of
rho(tau) over the accepted true delays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import gating
from .states import (Basis, BellTarget, SourceModel, analyzer_states,
                     bell_vector, validate_density_matrix)


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


def rho_at(tau: float, model: SourceModel) -> np.ndarray:
    """Density matrix of the photon pair at true emission delay tau >= 0."""
    if tau < 0:
        raise ValueError("emission delay cannot precede the biexciton photon")
    v = float(model.coherence_at(tau))
    off = 0.5 * v * np.exp(-1j * model.phase_at(tau))
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = (1.0 + v) / 4.0
    rho[1, 1] = rho[2, 2] = (1.0 - v) / 4.0
    rho[0, 3] = off
    rho[3, 0] = np.conj(off)
    return rho


def fidelity(rho: np.ndarray, target: BellTarget) -> float:
    """Overlap <psi|rho|psi> with the target Bell state, as a real number."""
    psi = bell_vector(target)
    val = psi.conj() @ np.asarray(rho) @ psi
    if abs(val.imag) > 1e-12:
        raise ValueError(f"fidelity has non-negligible imaginary part {val.imag:.3e}")
    return float(val.real)


def joint_probabilities(rho: np.ndarray, basis: Basis) -> np.ndarray:
    """Probabilities of the four joint analyzer outcomes (++, +-, -+, --)."""
    plus, minus = analyzer_states(basis)
    probs = np.empty(4)
    for i, (a, b) in enumerate([(plus, plus), (plus, minus),
                                (minus, plus), (minus, minus)]):
        joint = np.kron(a, b)
        probs[i] = (joint.conj() @ np.asarray(rho) @ joint).real
    return probs


def correlation_degree(rho: np.ndarray, basis: Basis) -> float:
    """Contrast (co - cross)/(co + cross) of polarization-resolved coincidences."""
    p = joint_probabilities(rho, basis)
    co = p[0] + p[3]
    cross = p[1] + p[2]
    assert co + cross > 0.0, "projectors resolve the identity; total cannot vanish"
    return (co - cross) / (co + cross)


def fidelity_from_correlations(c_rect: float, c_diag: float, c_circ: float) -> float:
    """Bell-state fidelity from the three basis correlation degrees."""
    for name, c in [("rectilinear", c_rect), ("diagonal", c_diag), ("circular", c_circ)]:
        if not -1.0 <= c <= 1.0:
            raise ValueError(f"{name} correlation degree {c} outside [-1, 1]")
    return (c_rect + c_diag - c_circ + 1.0) / 4.0


# ---------------------------------------------------------------------------
# gate-averaged state

@dataclass(frozen=True)
class GatedStateSummary:
    """Intensity-weighted average state over a gate, with bookkeeping."""

    rho: np.ndarray
    retained_fraction: float
    mean_phase: float


def _quad(f, a, b, osc_rate=None, points=None):
    # osc_rate = ('cos'|'sin', omega) multiplies f by the oscillatory weight;
    # QAWO handles many cycles per interval where plain QAGS would stall
    if osc_rate is None:
        val, err = integrate.quad(f, a, b, points=points, epsabs=1e-13,
                                  epsrel=1e-8, limit=400)
    else:
        kind, omega = osc_rate
        val, err = integrate.quad(f, a, b, weight=kind, wvar=omega,
                                  epsabs=1e-13, epsrel=1e-8, limit=400)
    if err > max(1e-9, 1e-6 * abs(val)):
        raise QuadratureError(
            f"quadrature error estimate {err:.3e} for value {val:.3e}")
    return val


def _window_integrals(window: gating.GateWindow, model: SourceModel):
    """Moments of the accepted-coincidence density over one window.

    Returns (mass, coh, osc_cos, osc_sin, tau_moment): integrals of the
    acceptance-weighted decay density times 1, v(tau), v*cos(phase),
    v*sin(phase) and tau respectively.
    """
    tau_x = model.lifetime_ps
    sigma = model.jitter_sigma_ps
    rate = model.phase_rate
    upper = tau_x * gating.TAIL_CUTOFF

    if sigma == 0:
        lo = max(window.start_ps, 0.0)
        hi = min(max(window.end_ps, 0.0), upper)
        if hi <= lo:
            return 0.0, 0.0, 0.0, 0.0, 0.0
        segments = [(lo, hi)]

        def weight(t):
            return math.exp(-t / tau_x) / tau_x
    else:
        cuts = sorted({0.0, max(0.0, min(window.start_ps, upper)),
                       max(0.0, min(window.end_ps, upper)), upper})
        segments = [(a, b) for a, b in zip(cuts, cuts[1:]) if b > a]

        def weight(t):
            return (math.exp(-t / tau_x) / tau_x
                    * gating.acceptance_probability(t, window, sigma))

    def seg_sum(f, osc=None):
        return sum(_quad(f, a, b, osc_rate=osc) for a, b in segments)

    mass = seg_sum(weight)
    coh = seg_sum(lambda t: weight(t) * float(model.coherence_at(t)))
    tau_moment = seg_sum(lambda t: weight(t) * t)
    if rate == 0:
        osc_cos, osc_sin = coh, 0.0
    else:
        f_coh = lambda t: weight(t) * float(model.coherence_at(t))
        osc_cos = seg_sum(f_coh, osc=("cos", abs(rate)))
        osc_sin = math.copysign(1.0, rate) * seg_sum(f_coh, osc=("sin", abs(rate)))
    return mass, coh, osc_cos, osc_sin, tau_moment


def gated_state(gate, model: SourceModel) -> GatedStateSummary:
    """Average rho over the true delays accepted by the gate(s).

    Each true delay contributes its coincidence intensity times the
    probability that the jittered measured delay falls inside the gate.
    """
    mass = coh = osc_cos = osc_sin = tau_moment = 0.0
    for w in gating.windows_of(gate):
        m, c, oc, os_, tm = _window_integrals(w, model)
        mass += m
        coh += c
        osc_cos += oc
        osc_sin += os_
        tau_moment += tm
    if mass <= 0.0:
        raise ValueError("gate accepts no coincidence mass")

    v_mean = coh / mass
    off = (osc_cos - 1j * osc_sin) / (2.0 * mass)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = (1.0 + v_mean) / 4.0
    rho[1, 1] = rho[2, 2] = (1.0 - v_mean) / 4.0
    rho[0, 3] = off
    rho[3, 0] = np.conj(off)
    validate_density_matrix(rho, herm_tol=1e-10, psd_tol=1e-8)
    return GatedStateSummary(
        rho=rho,
        retained_fraction=gating.retained_fraction(gate, model),
        mean_phase=model.phase_rate * tau_moment / mass,
    )


def evolving_state_fidelity(model: SourceModel) -> float:
    """Time-integrated fidelity with the phase-compensated Bell state.

    At every true delay the target carries the phase the state has actually
    acquired, so only the coherent fraction limits the overlap:
    the integrand is (1 + 3*v(tau))/4 weighted by the decay intensity.
    """
    tau_x = model.lifetime_ps
    upper = tau_x * gating.TAIL_CUTOFF

    def integrand(t):
        return (math.exp(-t / tau_x) / tau_x
                * (1.0 + 3.0 * float(model.coherence_at(t))) / 4.0)

    return _quad(integrand, 0.0, upper)


@dataclass(frozen=True)
class CurvePoint:
    gate_start_ps: float
    fidelity: float
    retained_fraction: float


def fidelity_curve(gates, model: SourceModel, target: BellTarget) -> list[CurvePoint]:
    """Gated fidelity against the target for each gate of a scan."""
    points = []
    for gate in gates:
        summary = gated_state(gate, model)
        start = min(w.start_ps for w in gating.windows_of(gate))
        points.append(CurvePoint(start, fidelity(summary.rho, target),
                                 summary.retained_fraction))
    if not points:
        raise ValueError("empty gate scan")
    return points
