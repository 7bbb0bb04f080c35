"""Post-selection gate windows on the measured biexciton-exciton delay.

Windows are half-open [start, start+width) so that adjacent gates tile the
delay axis without double counting.  With timing jitter the gate acts on the
measured delay, which can be negative even though the true delay never is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .constants import HBAR_UEV_PS
from .states import SourceModel

# truncation point for integrals over the exponential decay; the neglected
# tail carries mass exp(-ln(1e12)) = 1e-12
TAIL_CUTOFF = math.log(1e12)


@dataclass(frozen=True)
class GateWindow:
    """Acceptance interval [start_ps, start_ps + width_ps) on measured delay."""

    start_ps: float
    width_ps: float

    def __post_init__(self):
        if self.width_ps <= 0:
            raise ValueError("gate width must be positive")

    @property
    def end_ps(self) -> float:
        return self.start_ps + self.width_ps

    def contains(self, tau):
        t = np.asarray(tau)
        return (t >= self.start_ps) & (t < self.end_ps)


@dataclass(frozen=True)
class GateSet:
    """Ordered collection of pairwise disjoint gate windows."""

    windows: tuple[GateWindow, ...]

    def __post_init__(self):
        ordered = sorted(self.windows, key=lambda g: g.start_ps)
        for a, b in zip(ordered, ordered[1:]):
            if b.start_ps < a.end_ps:
                raise ValueError(
                    f"gate windows overlap: [{a.start_ps}, {a.end_ps}) and "
                    f"[{b.start_ps}, {b.end_ps})")

    def contains(self, tau):
        mask = np.zeros(np.shape(np.asarray(tau)), dtype=bool)
        for w in self.windows:
            mask |= w.contains(tau)
        return mask


def windows_of(gate) -> tuple[GateWindow, ...]:
    """Normalize a GateWindow or GateSet to a tuple of windows."""
    if isinstance(gate, GateWindow):
        return (gate,)
    if isinstance(gate, GateSet):
        return gate.windows
    raise TypeError(f"expected GateWindow or GateSet, got {type(gate).__name__}")


def phase_period_ps(splitting_ueV: float) -> float:
    """Delay over which the superposition phase advances by 2*pi."""
    if splitting_ueV == 0:
        raise ValueError("phase period is undefined for zero splitting")
    return 2.0 * math.pi * HBAR_UEV_PS / abs(splitting_ueV)


def periodic_gates(start_ps: float, width_ps: float, splitting_ueV: float,
                   count: int) -> GateSet:
    """Build count windows spaced by one full phase period.

    Every window sees the same phase pattern, so their union keeps more light
    at the same gated fidelity as a single window (no jitter, constant
    coherence).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    period = phase_period_ps(splitting_ueV)
    if width_ps >= period:
        raise ValueError(
            f"width {width_ps} ps >= phase period {period:.3f} ps: windows would overlap")
    return GateSet(tuple(
        GateWindow(start_ps + j * period, width_ps) for j in range(count)))


def acceptance_probability(tau, window: GateWindow, sigma_ps: float):
    """P(measured delay lands in the window | true delay tau).

    The measured delay is tau plus a zero-mean Gaussian of width sigma_ps;
    sigma_ps = 0 reduces to the window indicator.
    """
    t = np.asarray(tau, dtype=float)
    if sigma_ps == 0:
        return window.contains(t).astype(float)
    a = (window.end_ps - t) / (sigma_ps * math.sqrt(2.0))
    b = (window.start_ps - t) / (sigma_ps * math.sqrt(2.0))
    return 0.5 * (special.erf(a) - special.erf(b))


def _window_mass(window: GateWindow, model: SourceModel) -> float:
    """Coincidence probability mass accepted by one window."""
    tau_x = model.lifetime_ps
    if model.jitter_fwhm_ps == 0:
        lo = max(window.start_ps, 0.0)
        hi = max(window.end_ps, 0.0)
        if hi <= lo:
            return 0.0
        return math.exp(-lo / tau_x) - math.exp(-hi / tau_x)
    sigma = model.jitter_sigma_ps
    upper = tau_x * TAIL_CUTOFF

    def integrand(t):
        return math.exp(-t / tau_x) / tau_x * acceptance_probability(t, window, sigma)

    pts = sorted({0.0, max(0.0, window.start_ps), max(0.0, min(window.end_ps, upper)), upper})
    val, _ = integrate.quad(integrand, 0.0, upper, points=pts[1:-1] or None,
                            epsabs=1e-12, epsrel=1e-8, limit=400)
    return val


def retained_fraction(gate, model: SourceModel) -> float:
    """Fraction of all coincidences that survive the gate(s), in [0, 1]."""
    total = sum(_window_mass(w, model) for w in windows_of(gate))
    return min(max(total, 0.0), 1.0)
