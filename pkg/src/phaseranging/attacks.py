"""Distance-decreasing relay attacker models.

Five attacker variants, each split into a planner (pure parameter
computation) and a runtime transform applied to relayed tones:

* amplify-only: exploit natural rollover of an out-of-range prover,
* uniform delay: delay every carrier equally until the fit rolls over,
* cycle slip: sub-carrier-period delays that reshape the profile to an
  arbitrary target distance,
* mixer (on-the-fly): rewrite the relayed phase in real time by mixing
  with a double-frequency reference, no added delay,
* random phase: replace every carrier phase with an independent draw.

Delays subtract phase (2pi*f*dt), so the verifier's measured entry
wrap(ref - received) grows by 2pi*f*dt: delaying the echo adds
c*dt/2 metres to the fitted distance, modulo d_max.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_C,
    TWO_PI,
    FrequencyPlan,
    PhaseProfile,
    wrap,
)
from .signals import Tone, ToneObservation, apply_delay, estimate_phase, mix_and_filter

# Relay turnaround measured on a real SDR-based attacker: receive, process
# and retransmit.  Used as the default hardware delay of the uniform-delay
# attacker; the planner accounts for it, the jitter shows up per run.
HW_DELAY_MEAN = 536.22e-9
HW_DELAY_STD = 1.83e-9


@dataclass(frozen=True)
class AmplifyOnly:
    """Relay that only re-amplifies; folding does the distance reduction."""

    gain: float = 4.0

    def __post_init__(self):
        if self.gain <= 0:
            raise ValueError(f"gain must be positive, got {self.gain}")


@dataclass(frozen=True)
class UniformDelay:
    """Delay every carrier by the same amount on the return relay.

    Give either the target distance (the planner computes the extra delay
    from the geometry) or an explicit extra delay in seconds; the hardware
    turnaround is always added on top.
    """

    d_target: float | None = None
    extra_delay: float | None = None
    hw_delay_mean: float = HW_DELAY_MEAN
    hw_delay_std: float = HW_DELAY_STD

    def __post_init__(self):
        if (self.d_target is None) == (self.extra_delay is None):
            raise ValueError("give exactly one of d_target or extra_delay")
        if self.d_target is not None and self.d_target < 0:
            raise ValueError("d_target must be non-negative")
        if self.extra_delay is not None and self.extra_delay < 0:
            raise ValueError("extra_delay must be non-negative")
        if self.hw_delay_mean < 0 or self.hw_delay_std < 0:
            raise ValueError("hardware delay parameters must be non-negative")


@dataclass(frozen=True)
class CycleSlip:
    """Per-carrier sub-cycle delays reshaping the profile to d_target."""

    d_target: float

    def __post_init__(self):
        if self.d_target < 0:
            raise ValueError("d_target must be non-negative")


@dataclass(frozen=True)
class OtfMixer:
    """Real-time phase rewrite by mixing, targeting d_target.

    knows_d_ap selects how the attacker obtains the prover's response phase
    at its own location: predicted from the known relay-prover distance
    (default), or detected directly from the response at the cost of an
    extra fixed relay delay (PLL settling).
    """

    d_target: float
    knows_d_ap: bool = True
    knows_offsets: bool = False
    detection_delay: float = 0.0

    def __post_init__(self):
        if self.d_target < 0:
            raise ValueError("d_target must be non-negative")
        if self.detection_delay < 0:
            raise ValueError("detection_delay must be non-negative")


@dataclass(frozen=True)
class RandomPhase:
    """Replace each carrier phase with an independent uniform draw."""

    seed: int | None = None


AttackerConfig = AmplifyOnly | UniformDelay | CycleSlip | OtfMixer | RandomPhase


@dataclass(frozen=True)
class DelayPlan:
    """Per-carrier delays of the cycle-slip attacker, one per carrier."""

    plan: FrequencyPlan
    delays: np.ndarray

    def __post_init__(self):
        delays = np.asarray(self.delays, dtype=float)
        if delays.shape != (self.plan.count,):
            raise ValueError(
                f"need {self.plan.count} delays, got shape {delays.shape}"
            )
        periods = 1.0 / self.plan.frequencies()
        if np.any(delays < 0) or np.any(delays >= periods):
            raise ValueError("each delay must lie in [0, 1/f_i)")
        delays = delays.copy()
        delays.setflags(write=False)
        object.__setattr__(self, "delays", delays)


def plan_uniform_delay(
    d_true: float,
    d_target: float,
    d_max: float,
    c: float = DEFAULT_C,
    hw_delay: float = 0.0,
) -> float:
    """Smallest extra delay making the folded distance land on d_target.

    d_true is the one-way geometric distance of the relayed path; the
    unavoidable hardware turnaround hw_delay is accounted for, so the total
    relay delay is hw_delay plus the returned value.  A solution always
    exists because the fit is periodic in d_max.
    """
    if d_target < 0 or d_true < 0:
        raise ValueError("distances must be non-negative")
    if d_target >= d_max:
        raise ValueError(f"d_target must be below d_max ({d_max} m)")
    if hw_delay < 0:
        raise ValueError("hw_delay must be non-negative")
    added = (d_target - d_true) % d_max  # metres the relay must add, mod d_max
    hw_added = c * hw_delay / 2.0
    if added < hw_added - 1e-9 * d_max:
        added += d_max * math.ceil((hw_added - added) / d_max)
    return max(0.0, 2.0 * added / c - hw_delay)


def run_uniform_delay(
    tones,
    total_delay: float,
    rng: np.random.Generator | None = None,
    jitter_std: float = 0.0,
):
    """Relay one round of tones, all delayed by the same amount.

    The hardware turnaround jitters between relay rounds, not between
    carriers: one draw per call, shared by every tone, so the profile stays
    a clean line and only the fitted distance wanders by c*jitter/2.
    """
    jitter = rng.normal(scale=jitter_std) if jitter_std > 0 and rng is not None else 0.0
    delay = max(0.0, total_delay + jitter)
    return [apply_delay(t, delay) for t in tones]


def plan_cycle_slip(
    profile_true: PhaseProfile, d_target: float, c: float = DEFAULT_C
) -> DelayPlan:
    """Per-carrier delays turning the true profile into the profile of d_target.

    Delaying carrier i by dt adds 2pi*f_i*dt to the measured entry, so the
    smallest non-negative delay is wrap(target_i - true_i) / (2pi*f_i),
    always below one carrier period.
    """
    plan = profile_true.plan
    f = plan.frequencies()
    theta_target = wrap(4.0 * math.pi * d_target * f / c)
    delays = wrap(theta_target - profile_true.phases) / (TWO_PI * f)
    return DelayPlan(plan, delays)


def run_cycle_slip(tones, delay_plan: DelayPlan):
    """Apply a cycle-slip delay plan to one tone per carrier."""
    tones = list(tones)
    if len(tones) != delay_plan.plan.count:
        raise ValueError(
            f"expected {delay_plan.plan.count} tones, got {len(tones)}"
        )
    return [apply_delay(t, dt) for t, dt in zip(tones, delay_plan.delays)]


def predict_prover_phase(
    interrogation_obs: ToneObservation, d_ap: float, c: float = DEFAULT_C
) -> float:
    """Predict the prover's response phase as it will arrive back at the relay.

    The interrogation tone observed at the relay continues over d_ap to the
    prover, is echoed, and returns over d_ap: the response phase at the relay
    trails the observed interrogation phase by one round trip to the prover.
    """
    if d_ap < 0:
        raise ValueError("d_ap must be non-negative")
    f = interrogation_obs.tone.frequency
    return wrap(estimate_phase(interrogation_obs) - 4.0 * math.pi * f * d_ap / c)


def plan_mixer_phases(
    prover_phases,
    interrogation_phases,
    d_target: float,
    d_va: float,
    plan: FrequencyPlan,
    c: float = DEFAULT_C,
    secret_offsets=None,
) -> np.ndarray:
    """Per-carrier mixing phases that make the verifier fit d_target.

    prover_phases are the attacker's estimates of the prover response phase
    at the relay; interrogation_phases are its estimates of the verifier's
    tone at the relay.  Mixing outputs mixer_phase - incoming_phase, so the
    required absolute output phase phi_i (the phase that, after the final
    d_va hop and the verifier's reference subtraction, yields the profile of
    d_target) is added on top of the prover-phase estimate.

    When the prover's secret offsets are known to the attacker, the target
    profile is pre-compensated by -2*offset per carrier: mixing conjugates
    the incoming phase, so an uncompensated offset survives into the
    verifier's corrected profile doubled rather than cancelled.
    """
    f = plan.frequencies()
    prover_phases = np.asarray(prover_phases, dtype=float)
    interrogation_phases = np.asarray(interrogation_phases, dtype=float)
    theta_target = wrap(4.0 * math.pi * d_target * f / c)
    if secret_offsets is not None:
        theta_target = wrap(theta_target - 2.0 * np.asarray(secret_offsets, dtype=float))
    required_output = interrogation_phases + 4.0 * math.pi * f * d_va / c - theta_target
    return wrap(prover_phases + required_output)


def run_mixer(tone: Tone, mixer_phase: float, tx_amplitude: float = 1.0) -> Tone:
    """Mixing stage of the relay, re-amplified to the attacker's TX level."""
    mixed = mix_and_filter(tone, mixer_phase, gain=2.0)
    return Tone(mixed.frequency, tx_amplitude, mixed.phase)


def run_random_phase(tones, rng: np.random.Generator, tx_amplitude: float = 1.0):
    """Replace every carrier phase with an independent uniform draw."""
    return [
        Tone(t.frequency, tx_amplitude, rng.uniform(0.0, TWO_PI)) for t in tones
    ]


def run_amplify_only(tones, gain: float):
    """Scale amplitudes, leave phases untouched."""
    if gain <= 0:
        raise ValueError(f"gain must be positive, got {gain}")
    return [Tone(t.frequency, t.amplitude * gain, t.phase) for t in tones]
