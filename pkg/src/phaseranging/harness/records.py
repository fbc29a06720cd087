"""Run records and deterministic CSV emission."""

from __future__ import annotations

import csv
from dataclasses import dataclass

CSV_COLUMNS = [
    "scenario_id",
    "iteration",
    "step",
    "snr_db",
    "true_distance_m",
    "fitted_distance_m",
    "smoothed_distance_m",
    "residual_rms_rad",
    "detector_flag",
    "tof_accept",
    "attack_variant",
    "delay_ns",
]


@dataclass(frozen=True)
class RunRecord:
    """One ranging update of one iteration of a scenario."""

    scenario_id: str
    iteration: int
    step: int
    snr_db: float | None
    true_distance_m: float
    fitted_distance_m: float
    smoothed_distance_m: float
    residual_rms_rad: float
    detector_flag: bool
    tof_accept: bool | None
    attack_variant: str
    delay_ns: float | None


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, records) -> None:
    """UTF-8 CSV with a header row; floats use shortest round-trip form."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow([_format(getattr(record, col)) for col in CSV_COLUMNS])


def write_table(path, columns, rows) -> None:
    """Generic table writer used by the figure recipes."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format(value) for value in row])
