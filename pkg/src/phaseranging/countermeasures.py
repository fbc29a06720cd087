"""Defenses against distance-decreasing relays, and their limits.

Three mechanisms: pseudo-random carrier hop schedules, a coarse
time-of-flight gate bounded by the control-channel data rate, and secret
per-carrier prover phase offsets paired with a residual-based anomaly
detector.  Each is evaluable on its own; the experiment harness wires
them into full scenarios.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .core import (
    DEFAULT_C,
    TWO_PI,
    FrequencyPlan,
    PhaseProfile,
    RangeEstimate,
    fit_slope,
    straighten,
    wrap,
)
from .signals import batched_phase_estimates

CALIBRATION_RESOURCE = "detector_calibration.json"


@dataclass(frozen=True)
class TofGate:
    """Coarse round-trip timing check with data-rate-bounded precision.

    A link exchanging challenge bits at data_rate can time the exchange no
    finer than one bit period, so the gate's distance reading is quantized
    to granularity = c * precision * distance_factor.  The conventional
    pairing in this domain quotes 500 ns <-> 150 m at 2 Mbps, which is the
    one-way conversion; distance_factor makes the constant explicit rather
    than baked in.
    """

    data_rate: float
    distance_factor: float = 1.0
    c: float = DEFAULT_C

    def __post_init__(self):
        if not self.data_rate > 0:
            raise ValueError(f"data_rate must be positive, got {self.data_rate}")

    @property
    def precision(self) -> float:
        return 1.0 / self.data_rate

    @property
    def granularity(self) -> float:
        return self.c * self.precision * self.distance_factor


@dataclass(frozen=True)
class DetectorReport:
    """Outcome of the residual-based anomaly check."""

    residual_rms: float
    threshold: float
    flagged: bool

    def __post_init__(self):
        if self.flagged != (self.residual_rms > self.threshold):
            raise ValueError("flagged must equal residual_rms > threshold")


def tof_precision(
    data_rate: float, c: float = DEFAULT_C, distance_factor: float = 1.0
) -> tuple[float, float]:
    """Best timing precision at a data rate and the distance it translates to."""
    if not data_rate > 0:
        raise ValueError(f"data_rate must be positive, got {data_rate}")
    precision = 1.0 / data_rate
    return precision, c * precision * distance_factor


def rough_tof_gate(
    roundtrip_delay: float, claimed_distance: float, gate: TofGate
) -> bool:
    """Check a claimed distance against the coarse time-of-flight reading.

    The physically implied one-way distance c*delay/2 is quantized down to
    whole granularity steps (a counter of elapsed bit periods only ever
    truncates); the claim is rejected only when even that coarse reading
    exceeds it by more than one step.  Returns True to accept.
    """
    if roundtrip_delay < 0:
        raise ValueError("roundtrip_delay must be non-negative")
    implied = gate.c * roundtrip_delay / 2.0
    if gate.granularity == 0.0:
        return implied <= claimed_distance
    coarse = math.floor(implied / gate.granularity) * gate.granularity
    return coarse <= claimed_distance + gate.granularity


def hop_schedule(secret_seed: int | None, plan: FrequencyPlan) -> np.ndarray:
    """Pseudo-random carrier visiting order derived from a shared secret.

    None disables hopping and yields the identity order.  Wideband relay
    attackers act per frequency, not per time slot, so attacked results are
    invariant under any schedule; the schedule only raises the bar for
    narrowband hardware.
    """
    if secret_seed is None:
        return np.arange(plan.count)
    return np.random.default_rng(secret_seed).permutation(plan.count)


def secret_phase_offsets(plan: FrequencyPlan, rng: np.random.Generator) -> np.ndarray:
    """Per-carrier secret offsets the prover adds to its response phases."""
    return wrap(rng.uniform(0.0, TWO_PI, plan.count))


@lru_cache(maxsize=1)
def _calibration_payload() -> dict:
    path = resources.files("phaseranging").joinpath("data", CALIBRATION_RESOURCE)
    return json.loads(path.read_text())


def default_detector_threshold() -> float:
    """Shipped threshold: 99th percentile of benign residuals at 20 dB SNR."""
    return float(_calibration_payload()["default_threshold_rad"])


def lookup_detector_threshold(
    plan: FrequencyPlan, snr_db, samples_per_carrier: int
) -> float | None:
    """Exact-match lookup in the shipped calibration table, None if absent."""
    if snr_db is None or snr_db == math.inf:
        return None
    for entry in _calibration_payload()["entries"]:
        if (
            entry["f_start_hz"] == plan.f_start
            and entry["delta_f_hz"] == plan.delta_f
            and entry["count"] == plan.count
            and entry["snr_db"] == snr_db
            and entry["samples_per_carrier"] == samples_per_carrier
        ):
            return float(entry["threshold_rad"])
    return None


def detect_anomaly(
    profile: PhaseProfile, estimate: RangeEstimate, threshold: float | None = None
) -> DetectorReport:
    """Flag a measurement whose phases fluctuate beyond a linear fit.

    A benign profile is a straight line in frequency plus receiver noise;
    relayed phases that were guessed (random-phase attack) or mis-planned
    (mixer attack against unknown secret offsets) leave residuals orders of
    magnitude above the benign calibration.
    """
    if threshold is None:
        threshold = default_detector_threshold()
    residual = estimate.residual_rms
    return DetectorReport(residual, threshold, residual > threshold)


def calibrate_detector(
    plan: FrequencyPlan,
    snr_db: float,
    samples_per_carrier: int,
    trials: int,
    rng: np.random.Generator,
    percentile: float = 99.0,
    c: float = DEFAULT_C,
    distance: float = 1.0,
) -> float:
    """Percentile of benign fit residuals for a plan/SNR/sample-count triple.

    Runs the benign exchange (prover lock estimate plus verifier estimate,
    each with its own receiver noise) at a fixed in-range distance; the fit
    subtracts the line, so the residual distribution does not depend on the
    distance chosen.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    f = plan.frequencies()
    k2 = TWO_PI * f / c
    residuals = np.empty(trials)
    for t in range(trials):
        ref = rng.uniform(0.0, TWO_PI, plan.count)
        est_p = batched_phase_estimates(
            ref - k2 * distance, 1.0, snr_db, samples_per_carrier, rng
        )
        est_v = batched_phase_estimates(
            est_p - k2 * distance, 1.0, snr_db, samples_per_carrier, rng
        )
        profile = PhaseProfile(plan, wrap(ref - est_v))
        residuals[t] = fit_slope(straighten(profile), plan, c).residual_rms
    return float(np.percentile(residuals, percentile))


def build_calibration_payload(
    specs,
    trials: int = 4000,
    percentile: float = 99.0,
    seed: int = 0,
    c: float = DEFAULT_C,
) -> dict:
    """Calibration artifact for a list of (plan, snr_db, samples) triples.

    The default threshold entry is the first triple's result.
    """
    entries = []
    for index, (plan, snr_db, samples_per_carrier) in enumerate(specs):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
        threshold = calibrate_detector(
            plan, snr_db, samples_per_carrier, trials, rng, percentile, c
        )
        entries.append(
            {
                "f_start_hz": plan.f_start,
                "delta_f_hz": plan.delta_f,
                "count": plan.count,
                "snr_db": snr_db,
                "samples_per_carrier": samples_per_carrier,
                "trials": trials,
                "threshold_rad": threshold,
            }
        )
    return {
        "version": 1,
        "percentile": percentile,
        "default_threshold_rad": entries[0]["threshold_rad"],
        "entries": entries,
    }
