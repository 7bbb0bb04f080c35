"""Time-tag file IO: one pre-paired coincidence per line.

Format: CSV with header ``pair_id,tau_meas_ps,basis,outcome``; basis is one
of R/D/C, outcome is ``co`` or ``cross``, and pair_id is strictly increasing.
Ingested batches collapse the four analyzer outcomes to co/cross, which is
all the estimators need.
"""

from __future__ import annotations

import csv

import numpy as np

from .montecarlo import (CO_OUTCOMES, EventBatch, OUTCOME_PM, OUTCOME_PP,
                         BASIS_ORDER)
from .states import Basis

HEADER = ["pair_id", "tau_meas_ps", "basis", "outcome"]


class TimeTagFormatError(ValueError):
    """Malformed time-tag file; message carries the offending line number."""


def export_timetags(path, events: EventBatch) -> None:
    is_co = np.isin(events.outcome, CO_OUTCOMES)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        for i in range(len(events)):
            writer.writerow([
                i,
                f"{events.tau_meas_ps[i]:.6f}",
                BASIS_ORDER[events.basis[i]].short,
                "co" if is_co[i] else "cross",
            ])


def read_timetags(path) -> EventBatch:
    """Parse a time-tag file into an EventBatch (true delays are unknown: NaN)."""
    tau_meas, basis, outcome = [], [], []
    last_id = -1
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if lineno == 1:
                if row != HEADER:
                    raise TimeTagFormatError(
                        f"line 1: expected header {','.join(HEADER)!r}")
                continue
            if not row:
                continue
            if len(row) != 4:
                raise TimeTagFormatError(f"line {lineno}: expected 4 fields, got {len(row)}")
            try:
                pair_id = int(row[0])
                tau = float(row[1])
            except ValueError as exc:
                raise TimeTagFormatError(f"line {lineno}: {exc}") from None
            if pair_id <= last_id:
                raise TimeTagFormatError(
                    f"line {lineno}: pair_id {pair_id} not strictly increasing")
            last_id = pair_id
            try:
                b = Basis.from_short(row[2])
            except ValueError as exc:
                raise TimeTagFormatError(f"line {lineno}: {exc}") from None
            if row[3] not in ("co", "cross"):
                raise TimeTagFormatError(
                    f"line {lineno}: outcome must be 'co' or 'cross', got {row[3]!r}")
            tau_meas.append(tau)
            basis.append(BASIS_ORDER.index(b))
            outcome.append(OUTCOME_PP if row[3] == "co" else OUTCOME_PM)
    n = len(tau_meas)
    return EventBatch(
        np.full(n, np.nan),
        np.asarray(tau_meas, dtype=float),
        np.asarray(basis, dtype=np.uint8),
        np.asarray(outcome, dtype=np.uint8),
    )
