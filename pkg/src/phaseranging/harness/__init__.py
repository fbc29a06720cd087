"""Experiment harness: scenario configs, the Monte Carlo runner, sweeps,
figure recipes, CSV/SVG emission, and the command line interface."""

from .records import CSV_COLUMNS, RunRecord, write_csv
from .runner import run_scenario
from .scenario import ConfigError, Scenario, scenario_from_json
from .sweeps import mean_abs_error, sweep_delay, sweep_prover_distance, sweep_snr
