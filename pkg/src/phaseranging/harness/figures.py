"""Canonical figure recipes: each emits a CSV (the data contract) and an
SVG rendering of the same series.

Recipe ids are stable tokens; what each one shows:

  fig3   wrapped and straightened phase profiles at 10 m and 20 m
  fig5   measured distance vs uniform relay delay (rollover sawtooth)
  fig7   per-carrier cycle-slip delays for 30 m -> 1 m and 74 m -> 1 m
  fig9   attack timeline: smoothed estimate collapsing from 30/40/50 m
  fig12  distance error vs SNR, cycle-slip relay vs benign, 1 and 2 MHz hops
  fig13  distance error vs SNR, mixer relay vs benign, 1 and 2 MHz hops
  fig14  deviation from the 1 m target vs prover distance (interference)
  fig15  fitted distance of the random-phase attack over 1000 trials
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..attacks import CycleSlip, OtfMixer, RandomPhase, UniformDelay, plan_cycle_slip
from ..core import FrequencyPlan, straighten, synthesize_phase_profile
from .records import write_table
from .runner import run_scenario
from .scenario import Scenario
from .sweeps import mean_abs_error, sweep_delay, sweep_prover_distance, sweep_snr
from .svgplot import line_plot


def _fig3(seed: int):
    plan = FrequencyPlan.simulation_band(2e6)
    f = plan.frequencies()
    columns = ["frequency_hz"]
    rows = [[x] for x in f]
    series = []
    for d in (10.0, 20.0):
        profile = synthesize_phase_profile(d, plan)
        unwrapped = straighten(profile)
        columns += [f"wrapped_rad_{int(d)}m", f"straightened_rad_{int(d)}m"]
        for row, w, u in zip(rows, profile.phases, unwrapped):
            row += [w, u]
        series.append((f"{int(d)} m", f / 1e9, unwrapped))
    svg = dict(series=series, xlabel="carrier frequency (GHz)", ylabel="straightened phase (rad)")
    return columns, rows, svg


def _delay_sweep_scenario(seed: int) -> Scenario:
    return Scenario(
        scenario_id="delay-sweep",
        plan=FrequencyPlan.simulation_band(2e6),
        d_vp=30.0,
        d_va=1.0,
        d_ap=29.0,
        attacker=UniformDelay(extra_delay=0.0, hw_delay_mean=0.0, hw_delay_std=0.0),
        seed=seed,
    )


def _fig5(seed: int):
    delays_ns = np.arange(0, 1001, 1)
    records = sweep_delay(_delay_sweep_scenario(seed), delays_ns * 1e-9)
    rows = [[float(ns), r.fitted_distance_m] for ns, r in zip(delays_ns, records)]
    svg = dict(
        series=[("measured", [row[0] for row in rows], [row[1] for row in rows])],
        xlabel="relay delay (ns)",
        ylabel="measured distance (m)",
    )
    return ["delay_ns", "distance_m"], rows, svg


def _fig7(seed: int):
    plan = FrequencyPlan.simulation_band(2e6)
    f = plan.frequencies()
    delays = {}
    for d_true in (30.0, 74.0):
        profile = synthesize_phase_profile(d_true, plan)
        delays[d_true] = plan_cycle_slip(profile, 1.0).delays * 1e9
    rows = [
        [x, a, b] for x, a, b in zip(f, delays[30.0], delays[74.0])
    ]
    svg = dict(
        series=[
            ("from 30 m", f / 1e9, delays[30.0]),
            ("from 74 m", f / 1e9, delays[74.0]),
        ],
        xlabel="carrier frequency (GHz)",
        ylabel="per-carrier delay (ns)",
    )
    return ["frequency_hz", "delay_ns_from_30m", "delay_ns_from_74m"], rows, svg


def _fig9(seed: int):
    rows = []
    series = []
    for d_vp in (30.0, 40.0, 50.0):
        scenario = Scenario(
            scenario_id="attack-timeline",
            plan=FrequencyPlan.simulation_band(2e6),
            d_vp=d_vp,
            d_va=1.0,
            d_ap=d_vp - 1.0,
            snr_db=25.0,
            attacker=UniformDelay(d_target=1.0),
            steps=24,
            attack_start=8,
            seed=seed,
        )
        records = run_scenario(scenario)
        rows += [
            [d_vp, r.step, r.fitted_distance_m, r.smoothed_distance_m] for r in records
        ]
        series.append(
            (f"{int(d_vp)} m", [r.step for r in records], [r.smoothed_distance_m for r in records])
        )
    svg = dict(series=series, xlabel="ranging update", ylabel="smoothed distance (m)")
    return ["d_vp_m", "step", "fitted_distance_m", "smoothed_distance_m"], rows, svg


def _snr_error_figure(seed: int, attacker, adversarial_d_vp: float, iterations: int = 100):
    snrs = list(range(0, 31))
    rows = []
    series = []
    for hop in (1e6, 2e6):
        plan = FrequencyPlan.simulation_band(hop)
        benign = Scenario(
            scenario_id="benign-1m", plan=plan, d_vp=1.0, snr_db=0.0, seed=seed
        )
        attacked = Scenario(
            scenario_id="attacked",
            plan=plan,
            d_vp=adversarial_d_vp,
            d_va=1.0,
            d_ap=adversarial_d_vp - 1.0,
            snr_db=0.0,
            attacker=attacker,
            seed=seed,
        )
        benign_records = sweep_snr(benign, snrs, iterations=iterations)
        attacked_records = sweep_snr(attacked, snrs, iterations=iterations)
        benign_mae, attacked_mae = [], []
        for snr in snrs:
            b = [r for r in benign_records if r.snr_db == snr]
            a = [r for r in attacked_records if r.snr_db == snr]
            benign_mae.append(mean_abs_error(b, 1.0))
            attacked_mae.append(mean_abs_error(a, 1.0))
            rows.append([snr, hop / 1e6, benign_mae[-1], attacked_mae[-1]])
        series.append((f"benign {hop / 1e6:g} MHz", snrs, benign_mae))
        series.append((f"attacked {hop / 1e6:g} MHz", snrs, attacked_mae))
    svg = dict(series=series, xlabel="SNR (dB)", ylabel="mean |distance error| (m)")
    return ["snr_db", "hop_mhz", "benign_mae_m", "adversarial_mae_m"], rows, svg


def _fig12(seed: int):
    return _snr_error_figure(seed, CycleSlip(d_target=1.0), adversarial_d_vp=30.0)


def _fig13(seed: int):
    return _snr_error_figure(seed, OtfMixer(d_target=1.0), adversarial_d_vp=74.0)


def _fig14(seed: int):
    base = Scenario(
        scenario_id="prover-interference",
        plan=FrequencyPlan.simulation_band(2e6),
        d_vp=10.0,
        d_va=1.0,
        d_ap=9.0,
        attacker=OtfMixer(d_target=1.0),
        prover_in_range=True,
        path_loss=True,
        seed=seed,
    )
    d_vps = [2, 3, 4, 5, 7, 10, 15, 20, 30, 40, 50, 60, 74]
    records = sweep_prover_distance(base, d_vps)
    rows = [
        [float(d), r.fitted_distance_m, abs(r.fitted_distance_m - 1.0)]
        for d, r in zip(d_vps, records)
    ]
    svg = dict(
        series=[("deviation", [row[0] for row in rows], [row[2] for row in rows])],
        xlabel="prover-verifier distance (m)",
        ylabel="deviation from 1 m target (m)",
    )
    return ["d_vp_m", "fitted_distance_m", "deviation_m"], rows, svg


def _fig15(seed: int):
    scenario = Scenario(
        scenario_id="random-phase",
        plan=FrequencyPlan.simulation_band(2e6),
        d_vp=30.0,
        d_va=1.0,
        d_ap=29.0,
        attacker=RandomPhase(),
        iterations=1000,
        seed=seed,
    )
    records = run_scenario(scenario)
    rows = [
        [r.iteration, r.fitted_distance_m, r.residual_rms_rad, r.detector_flag]
        for r in records
    ]
    svg = dict(
        series=[
            ("fitted", [r.iteration for r in records], [r.fitted_distance_m for r in records])
        ],
        xlabel="trial",
        ylabel="fitted distance (m)",
    )
    return ["trial", "fitted_distance_m", "residual_rms_rad", "flagged"], rows, svg


FIGURES = {
    "fig3": _fig3,
    "fig5": _fig5,
    "fig7": _fig7,
    "fig9": _fig9,
    "fig12": _fig12,
    "fig13": _fig13,
    "fig14": _fig14,
    "fig15": _fig15,
}


def reproduce_figure(figure_id: str, out_dir, seed: int = 0, fmt: str = "csv+svg"):
    """Write <id>.csv (and <id>.svg unless fmt is csv) into out_dir."""
    if figure_id not in FIGURES:
        raise ValueError(f"unknown figure id {figure_id!r}; have {sorted(FIGURES)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    columns, rows, svg = FIGURES[figure_id](seed)
    paths = []
    csv_path = out_dir / f"{figure_id}.csv"
    write_table(csv_path, columns, rows)
    paths.append(csv_path)
    if fmt != "csv":
        svg_path = out_dir / f"{figure_id}.svg"
        line_plot(svg_path, title=figure_id, **svg)
        paths.append(svg_path)
    return paths
