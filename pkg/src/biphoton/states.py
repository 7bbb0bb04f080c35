"""Shared vocabulary: polarization bases, Bell states, the two-photon density
matrix over (HH, HV, VH, VV), and the physical parameters of the emitter.

Analyzer conventions: D = (H+V)/sqrt(2), A = (H-V)/sqrt(2),
R = (H+iV)/sqrt(2), L = (H-iV)/sqrt(2). With these choices the basis
correlation degrees come out as C_rect = v, C_diag = v*cos(phase),
C_circ = -v*cos(phase), which is what the fidelity combination below relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .constants import FWHM_TO_SIGMA, HBAR_UEV_PS

_SQRT2 = math.sqrt(2.0)


class Basis(Enum):
    """Polarization analyzer basis for a joint two-photon measurement."""

    RECTILINEAR = "rectilinear"
    DIAGONAL = "diagonal"
    CIRCULAR = "circular"

    @property
    def short(self) -> str:
        return {"rectilinear": "R", "diagonal": "D", "circular": "C"}[self.value]

    @classmethod
    def from_short(cls, letter: str) -> "Basis":
        for b in cls:
            if b.short == letter:
                return b
        raise ValueError(f"unknown basis letter {letter!r}")


def analyzer_states(basis: Basis):
    """Return the (plus, minus) orthonormal single-photon analyzer states."""
    if basis is Basis.RECTILINEAR:
        return (np.array([1.0, 0.0], dtype=complex),
                np.array([0.0, 1.0], dtype=complex))
    if basis is Basis.DIAGONAL:
        return (np.array([1.0, 1.0], dtype=complex) / _SQRT2,
                np.array([1.0, -1.0], dtype=complex) / _SQRT2)
    if basis is Basis.CIRCULAR:
        return (np.array([1.0, 1.0j], dtype=complex) / _SQRT2,
                np.array([1.0, -1.0j], dtype=complex) / _SQRT2)
    raise ValueError(f"unknown basis {basis!r}")


@dataclass(frozen=True)
class BellTarget:
    """Target state (|HH> + e^{i*phase}|VV>)/sqrt(2)."""

    phase: float = 0.0


PSI_PLUS = BellTarget(0.0)
PSI_MINUS = BellTarget(math.pi)


def bell_vector(target: BellTarget) -> np.ndarray:
    """Normalized state vector of the target in (HH, HV, VH, VV) order."""
    return np.array([1.0, 0.0, 0.0, np.exp(1j * target.phase)]) / _SQRT2


# ---------------------------------------------------------------------------
# coherence models: v(tau) = k(tau) * g1(tau), the weight of the coherent
# superposition inside rho(tau)

@dataclass(frozen=True)
class ConstantCoherence:
    """Time-independent coherent fraction v in [0, 1]."""

    v: float

    def __post_init__(self):
        if not 0.0 <= self.v <= 1.0:
            raise ValueError(f"coherent fraction v must be in [0,1], got {self.v}")

    def value(self, tau, lifetime_ps):
        return self.v + 0.0 * np.asarray(tau, dtype=float)


@dataclass(frozen=True)
class DecayingCoherence:
    """Exponentially decaying background light plus constant spin scattering.

    The dot's coincidence intensity decays as exp(-tau/lifetime) while
    uncorrelated background decays as exp(-tau/background_lifetime); their
    intensity ratio at tau=0 is background_ratio.  The fraction of pairs
    coming from the dot is then k(tau) = d/(d + ratio*b), and the remaining
    coherence decays with the spin-scattering time.
    """

    background_ratio: float
    background_lifetime_ps: float
    spin_scattering_ps: float

    def __post_init__(self):
        if self.background_ratio < 0:
            raise ValueError("background_ratio must be >= 0")
        if self.background_lifetime_ps <= 0 or self.spin_scattering_ps <= 0:
            raise ValueError("lifetimes must be positive")

    def value(self, tau, lifetime_ps):
        t = np.asarray(tau, dtype=float)
        dot = np.exp(-t / lifetime_ps)
        background = np.exp(-t / self.background_lifetime_ps)
        k = dot / (dot + self.background_ratio * background)
        return k * np.exp(-t / self.spin_scattering_ps)


@dataclass(frozen=True)
class SourceModel:
    """Emitter and detection parameters.

    splitting_ueV   fine-structure splitting of the intermediate exciton
                    levels; sign flips the direction of phase rotation
    lifetime_ps     exciton lifetime (intensity 1/e time), > 0
    jitter_fwhm_ps  Gaussian FWHM of the pair-detection timing jitter,
                    0 disables jitter
    coherence       ConstantCoherence or DecayingCoherence
    """

    splitting_ueV: float
    lifetime_ps: float
    jitter_fwhm_ps: float = 0.0
    coherence: ConstantCoherence | DecayingCoherence = field(
        default_factory=lambda: ConstantCoherence(1.0))

    def __post_init__(self):
        if self.lifetime_ps <= 0:
            raise ValueError("lifetime_ps must be positive")
        if self.jitter_fwhm_ps < 0:
            raise ValueError("jitter_fwhm_ps must be >= 0")

    @property
    def jitter_sigma_ps(self) -> float:
        return self.jitter_fwhm_ps * FWHM_TO_SIGMA

    @property
    def phase_rate(self) -> float:
        """Phase accumulated per ps of emission delay."""
        return self.splitting_ueV / HBAR_UEV_PS

    def phase_at(self, tau):
        return self.phase_rate * np.asarray(tau, dtype=float)

    def coherence_at(self, tau):
        return self.coherence.value(tau, self.lifetime_ps)


# ---------------------------------------------------------------------------
# density-matrix sanity checks

def validate_density_matrix(rho: np.ndarray, herm_tol: float = 1e-12,
                            psd_tol: float = 1e-10) -> None:
    """Raise ValueError unless rho is a 4x4 Hermitian, unit-trace, PSD matrix."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > herm_tol or abs(np.trace(rho).imag) > herm_tol:
        raise ValueError("density matrix does not have unit trace")
    if np.linalg.eigvalsh(rho).min() < -psd_tol:
        raise ValueError("density matrix is not positive semidefinite")


def partial_trace(rho: np.ndarray, keep: int) -> np.ndarray:
    """Trace out one photon; keep=0 keeps the first (XX) photon, keep=1 the second."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("ikjk->ij", r)
    if keep == 1:
        return np.einsum("kikj->ij", r)
    raise ValueError("keep must be 0 or 1")
