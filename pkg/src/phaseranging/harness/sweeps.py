"""Parameter sweeps over scenarios: SNR, relay delay, prover distance.

Every sweep point runs under its own stream family (point index folded
into the stream key), so adding, removing or reordering points never
perturbs the others.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from ..attacks import UniformDelay
from .runner import run_scenario
from .scenario import Scenario


def sweep_snr(scenario: Scenario, snrs, iterations: int | None = None):
    """Run the scenario once per SNR point; returns all records."""
    records = []
    for index, snr in enumerate(snrs):
        point = replace(
            scenario,
            snr_db=float(snr),
            iterations=iterations or scenario.iterations,
        )
        records.extend(run_scenario(point, point_index=index))
    return records


def sweep_delay(scenario: Scenario, delays):
    """Run a uniform-delay attack once per extra-delay value (seconds).

    The scenario's attacker must be a UniformDelay; its planned/explicit
    delay is overridden point by point.
    """
    if not isinstance(scenario.attacker, UniformDelay):
        raise ValueError("sweep_delay needs a uniform-delay attacker")
    records = []
    for index, delay in enumerate(delays):
        attacker = replace(
            scenario.attacker, d_target=None, extra_delay=float(delay)
        )
        point = replace(scenario, attacker=attacker)
        records.extend(run_scenario(point, point_index=index))
    return records


def sweep_prover_distance(scenario: Scenario, d_vps):
    """Vary the prover-verifier distance, keeping the relay on the line
    between them (d_ap tracks d_vp - d_va)."""
    records = []
    for index, d_vp in enumerate(d_vps):
        d_vp = float(d_vp)
        if scenario.d_va is None or d_vp <= scenario.d_va:
            raise ValueError(
                f"d_vp={d_vp} must exceed the verifier-relay distance {scenario.d_va}"
            )
        point = replace(scenario, d_vp=d_vp, d_ap=d_vp - scenario.d_va)
        records.extend(run_scenario(point, point_index=index))
    return records


def mean_abs_error(records, reference: float) -> float:
    """Mean absolute fitted-distance error against a reference distance."""
    errors = [abs(r.fitted_distance_m - reference) for r in records]
    return float(np.mean(errors))
