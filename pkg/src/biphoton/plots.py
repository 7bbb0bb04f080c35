"""Figure rendering for scan outputs; every figure lands next to its CSV."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_width_scan_figure(path, widths_ps, fidelities, retained) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.plot(widths_ps, fidelities, "o-", color="k", label="fidelity")
    ax.axhline(0.5, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("gate width (ps)")
    ax.set_ylabel("fidelity with $\\Psi^+$")
    ax2 = ax.twinx()
    ax2.plot(widths_ps, retained, "s-", color="crimson", label="retained")
    ax2.set_ylabel("retained fraction", color="crimson")
    ax2.set_ylim(0, 1.05)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_delay_scan_figure(path, starts_ps, fidelities, sigmas=None) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    if sigmas is not None and any(s > 0 for s in sigmas):
        ax.errorbar(starts_ps, fidelities, yerr=sigmas, fmt="o-", color="k",
                    capsize=2)
    else:
        ax.plot(starts_ps, fidelities, "o-", color="k")
    ax.axhline(0.5, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("gate delay (ps)")
    ax.set_ylabel("fidelity with $\\Psi^+$")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_spectrum_figure(path, labeled_spectra) -> None:
    """labeled_spectra: sequence of (label, Spectrum), peak-normalized."""
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    for label, spec in labeled_spectra:
        ax.plot(spec.energies_ueV, spec.power, label=label)
    ax.set_xlabel("energy ($\\mu$eV)")
    ax.set_ylabel("normalized power")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
