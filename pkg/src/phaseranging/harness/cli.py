"""Command line interface.

Subcommands: simulate, sweep-snr, sweep-delay, sweep-prover, figure,
calibrate-detector.  Exit codes: 0 success, 2 configuration error,
3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from ..attacks import CycleSlip, OtfMixer, UniformDelay
from ..core import FrequencyPlan
from ..countermeasures import build_calibration_payload
from .figures import FIGURES, reproduce_figure
from .records import write_csv
from .runner import run_scenario
from .scenario import ConfigError, Scenario, scenario_from_json
from .sweeps import sweep_delay, sweep_prover_distance, sweep_snr

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=None, help="override the master seed")
    parser.add_argument("--out-dir", type=Path, default=Path("."), help="output directory")
    parser.add_argument(
        "--format", choices=["csv", "csv+svg"], default="csv+svg", help="figure output format"
    )


def _load_scenario(path: Path, seed_override) -> Scenario:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such config file")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})")
    scenario = scenario_from_json(doc)
    if seed_override is not None:
        scenario = replace(scenario, seed=seed_override)
    return scenario


def _plan_from_args(args) -> FrequencyPlan:
    if args.plan == "ism":
        return FrequencyPlan.ism()
    return FrequencyPlan.simulation_band(args.hop_mhz * 1e6)


def _write_records(args, name: str, records) -> Path:
    args.out_dir.mkdir(parents=True, exist_ok=True)
    path = args.out_dir / f"{name}.csv"
    write_csv(path, records)
    print(f"wrote {path} ({len(records)} records)")
    return path


def _cmd_simulate(args) -> int:
    scenario = _load_scenario(args.config, args.seed)
    records = run_scenario(scenario)
    _write_records(args, scenario.scenario_id, records)
    return EXIT_OK


def _cmd_sweep_snr(args) -> int:
    plan = _plan_from_args(args)
    seed = 0 if args.seed is None else args.seed
    if args.attack == "cycle-slip":
        attacker, d_vp = CycleSlip(d_target=args.d_target), args.d_vp
    else:
        attacker, d_vp = OtfMixer(d_target=args.d_target), args.d_vp
    scenario = Scenario(
        scenario_id=f"sweep-snr-{args.attack}",
        plan=plan,
        d_vp=d_vp,
        d_va=1.0,
        d_ap=d_vp - 1.0,
        snr_db=0.0,
        attacker=attacker,
        seed=seed,
    )
    snrs = np.arange(args.snr_min, args.snr_max + 1e-9, args.snr_step)
    records = sweep_snr(scenario, snrs, iterations=args.iterations)
    if args.with_benign:
        benign = Scenario(
            scenario_id="sweep-snr-benign",
            plan=plan,
            d_vp=args.d_target,
            snr_db=0.0,
            seed=seed,
        )
        records += sweep_snr(benign, snrs, iterations=args.iterations)
    _write_records(args, scenario.scenario_id, records)
    return EXIT_OK


def _cmd_sweep_delay(args) -> int:
    seed = 0 if args.seed is None else args.seed
    scenario = Scenario(
        scenario_id="sweep-delay",
        plan=_plan_from_args(args),
        d_vp=args.d_vp,
        d_va=args.d_va,
        d_ap=args.d_vp - args.d_va,
        snr_db=args.snr,
        attacker=UniformDelay(
            extra_delay=0.0,
            hw_delay_mean=args.hw_delay_ns * 1e-9,
            hw_delay_std=0.0,
        ),
        seed=seed,
    )
    delays = np.arange(0.0, args.max_ns + 1e-9, args.step_ns) * 1e-9
    records = sweep_delay(scenario, delays)
    _write_records(args, scenario.scenario_id, records)
    return EXIT_OK


def _cmd_sweep_prover(args) -> int:
    seed = 0 if args.seed is None else args.seed
    scenario = Scenario(
        scenario_id="sweep-prover",
        plan=_plan_from_args(args),
        d_vp=args.d_vp_max,
        d_va=1.0,
        d_ap=args.d_vp_max - 1.0,
        snr_db=args.snr,
        attacker=OtfMixer(d_target=args.d_target),
        prover_in_range=True,
        path_loss=True,
        seed=seed,
    )
    d_vps = np.arange(args.d_vp_min, args.d_vp_max + 1e-9, args.d_vp_step)
    records = sweep_prover_distance(scenario, d_vps)
    _write_records(args, scenario.scenario_id, records)
    return EXIT_OK


def _cmd_figure(args) -> int:
    seed = 0 if args.seed is None else args.seed
    for path in reproduce_figure(args.id, args.out_dir, seed=seed, fmt=args.format):
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    seed = 0 if args.seed is None else args.seed
    plans = [
        FrequencyPlan.simulation_band(2e6),
        FrequencyPlan.simulation_band(1e6),
        FrequencyPlan.ism(),
    ]
    specs = [(plan, float(snr), args.samples) for plan in plans for snr in args.snr]
    specs.insert(0, (FrequencyPlan.simulation_band(2e6), 20.0, args.samples))
    payload = build_calibration_payload(specs, trials=args.trials, seed=seed)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    path = args.out_dir / "detector_calibration.json"
    path.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {path} (default threshold {payload['default_threshold_rad']:.6f} rad)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaseranging",
        description="Multicarrier phase-ranging simulator: attacks and countermeasures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario config")
    p.add_argument("config", type=Path, help="scenario JSON document")
    _add_common(p)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("sweep-snr", help="distance error vs SNR for an attack")
    p.add_argument("--attack", choices=["cycle-slip", "otf-mixer"], default="cycle-slip")
    p.add_argument("--plan", choices=["sim-band", "ism"], default="sim-band")
    p.add_argument("--hop-mhz", type=float, default=2.0)
    p.add_argument("--d-vp", type=float, default=30.0)
    p.add_argument("--d-target", type=float, default=1.0)
    p.add_argument("--snr-min", type=float, default=0.0)
    p.add_argument("--snr-max", type=float, default=30.0)
    p.add_argument("--snr-step", type=float, default=1.0)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--with-benign", action="store_true", help="also run the benign baseline")
    _add_common(p)
    p.set_defaults(fn=_cmd_sweep_snr)

    p = sub.add_parser("sweep-delay", help="measured distance vs uniform relay delay")
    p.add_argument("--plan", choices=["sim-band", "ism"], default="sim-band")
    p.add_argument("--hop-mhz", type=float, default=2.0)
    p.add_argument("--d-vp", type=float, default=30.0)
    p.add_argument("--d-va", type=float, default=1.0)
    p.add_argument("--max-ns", type=float, default=1000.0)
    p.add_argument("--step-ns", type=float, default=1.0)
    p.add_argument("--snr", type=float, default=None)
    p.add_argument("--hw-delay-ns", type=float, default=0.0)
    _add_common(p)
    p.set_defaults(fn=_cmd_sweep_delay)

    p = sub.add_parser("sweep-prover", help="interference from an in-range prover")
    p.add_argument("--plan", choices=["sim-band", "ism"], default="sim-band")
    p.add_argument("--hop-mhz", type=float, default=2.0)
    p.add_argument("--d-target", type=float, default=1.0)
    p.add_argument("--d-vp-min", type=float, default=2.0)
    p.add_argument("--d-vp-max", type=float, default=74.0)
    p.add_argument("--d-vp-step", type=float, default=1.0)
    p.add_argument("--snr", type=float, default=None)
    _add_common(p)
    p.set_defaults(fn=_cmd_sweep_prover)

    p = sub.add_parser("figure", help="reproduce a canonical figure (CSV + SVG)")
    p.add_argument("id", choices=sorted(FIGURES))
    _add_common(p)
    p.set_defaults(fn=_cmd_figure)

    p = sub.add_parser("calibrate-detector", help="regenerate the detector calibration artifact")
    p.add_argument("--trials", type=int, default=4000)
    p.add_argument("--snr", type=float, nargs="+", default=[10.0, 15.0, 20.0, 25.0, 30.0])
    p.add_argument("--samples", type=int, default=64)
    _add_common(p)
    p.set_defaults(fn=_cmd_calibrate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
