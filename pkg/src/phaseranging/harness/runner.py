"""Scenario execution: seeded, deterministic Monte Carlo ranging rounds.

Each iteration owns an independent random stream derived from
(seed, point_index, iteration), so iterations can be reordered or run in
parallel without changing any record.  Within a round the draw order is
fixed: reference phases, attacker observation (mixer attack), prover
observation, lock error, attacker return draws, verifier observation.

The exchange semantics are those of the actors/signals/attacks modules;
phases are propagated as arrays over carriers for speed (the mean of M
complex noise samples is drawn directly, which is distribution-exact).
The test suite pins this vectorized path against the scalar composition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..attacks import (
    AmplifyOnly,
    CycleSlip,
    OtfMixer,
    RandomPhase,
    UniformDelay,
    plan_cycle_slip,
    plan_mixer_phases,
    plan_uniform_delay,
)
from ..core import TWO_PI, fit_slope, PhaseProfile, straighten, synthesize_phase_profile, wrap
from ..countermeasures import (
    TofGate,
    detect_anomaly,
    default_detector_threshold,
    hop_schedule,
    lookup_detector_threshold,
    rough_tof_gate,
    secret_phase_offsets,
)
from ..rng import stream
from ..signals import batched_phase_estimates, batched_phasor_phase_estimates, path_loss_factor
from .records import RunRecord
from .scenario import Scenario

ATTACK_LABELS = {
    type(None): "none",
    AmplifyOnly: "amplify-only",
    UniformDelay: "uniform-delay",
    CycleSlip: "cycle-slip",
    OtfMixer: "otf-mixer",
    RandomPhase: "random-phase",
}


@dataclass(frozen=True)
class _Prepared:
    """Per-scenario precomputation shared by all iterations."""

    f: np.ndarray
    k2: np.ndarray  # 2*pi*f/c, phase per metre of one-way travel
    order: np.ndarray
    d_rel: float | None
    uniform_extra: float | None
    cycle_delays: np.ndarray | None
    threshold: float
    gate: TofGate | None


def _prepare(s: Scenario) -> _Prepared:
    f = s.plan.frequencies()
    k2 = TWO_PI * f / s.c
    order = hop_schedule(s.hop_seed, s.plan)
    d_rel = None
    uniform_extra = None
    cycle_delays = None
    attacker = s.attacker
    if isinstance(attacker, (UniformDelay, CycleSlip, OtfMixer, RandomPhase)):
        d_rel = s.d_va + s.d_ap
    if isinstance(attacker, UniformDelay):
        if attacker.extra_delay is not None:
            uniform_extra = attacker.extra_delay
        else:
            uniform_extra = plan_uniform_delay(
                d_rel,
                attacker.d_target,
                s.plan.max_unambiguous_distance(s.c),
                s.c,
                hw_delay=attacker.hw_delay_mean,
            )
    if isinstance(attacker, CycleSlip):
        true_profile = synthesize_phase_profile(d_rel, s.plan, s.c)
        cycle_delays = plan_cycle_slip(true_profile, attacker.d_target, s.c).delays
    threshold = s.detector_threshold
    if threshold is None:
        threshold = lookup_detector_threshold(s.plan, s.snr_db, s.samples_per_carrier)
    if threshold is None:
        threshold = default_detector_threshold()
    gate = TofGate(s.tof_gate_rate, c=s.c) if s.tof_gate_rate is not None else None
    return _Prepared(f, k2, order, d_rel, uniform_extra, cycle_delays, threshold, gate)


def _amp(base: float, distance: float, s: Scenario) -> float:
    return base * path_loss_factor(distance) if s.path_loss else base


def _lock_noise(s: Scenario, rng) -> np.ndarray | float:
    if s.lock_error_std > 0:
        return rng.normal(scale=s.lock_error_std, size=s.plan.count)
    return 0.0


def _benign_round(s: Scenario, prep: _Prepared, ref, offsets, rng, gain=1.0):
    est_p = batched_phase_estimates(
        ref - prep.k2 * s.d_vp, _amp(1.0, s.d_vp, s), s.snr_db, s.samples_per_carrier, rng
    )
    resp = est_p + offsets + _lock_noise(s, rng)
    est_v = batched_phase_estimates(
        resp - prep.k2 * s.d_vp,
        _amp(gain, s.d_vp, s),
        s.snr_db,
        s.samples_per_carrier,
        rng,
    )
    theta = wrap(ref - est_v + offsets)
    return theta, None, 2.0 * s.d_vp / s.c


def _relay_round(s: Scenario, prep: _Prepared, ref, offsets, rng, attack_rng):
    """Out-of-range relay chain; in-range adds the prover's direct arms."""
    attacker = s.attacker
    k2 = prep.k2
    phi_va_est = None
    # forward leg
    if isinstance(attacker, OtfMixer):
        # mixing attacker locks to the interrogation and regenerates it;
        # the same estimate later drives its phase planning
        phi_va_est = batched_phase_estimates(
            ref - k2 * s.d_va, _amp(1.0, s.d_va, s), s.snr_db, s.samples_per_carrier, rng
        )
        fwd_phase = phi_va_est - k2 * s.d_ap
    else:
        fwd_phase = ref - k2 * (s.d_va + s.d_ap)
    fwd_amp = _amp(s.attacker_tx_amplitude, s.d_ap, s)
    fwd_phasor = fwd_amp * np.exp(1j * fwd_phase)
    if s.prover_in_range:
        direct = _amp(1.0, s.d_vp, s) * np.exp(1j * (ref - k2 * s.d_vp))
        est_p = batched_phasor_phase_estimates(
            fwd_phasor + direct, s.snr_db, s.samples_per_carrier, rng
        )
    else:
        est_p = batched_phasor_phase_estimates(
            fwd_phasor, s.snr_db, s.samples_per_carrier, rng
        )
    resp = est_p + offsets + _lock_noise(s, rng)
    # return leg: prover to relay
    at_relay_phase = resp - k2 * s.d_ap
    at_relay_amp = _amp(1.0, s.d_ap, s)
    delay_ns = None
    extra_return_delay = 0.0
    if isinstance(attacker, UniformDelay):
        jitter = (
            rng.normal(scale=attacker.hw_delay_std) if attacker.hw_delay_std > 0 else 0.0
        )
        total = max(0.0, attacker.hw_delay_mean + prep.uniform_extra + jitter)
        out_phase = at_relay_phase - TWO_PI * prep.f * total
        delay_ns = total * 1e9
        extra_return_delay = total
    elif isinstance(attacker, CycleSlip):
        out_phase = at_relay_phase - TWO_PI * prep.f * prep.cycle_delays
    elif isinstance(attacker, RandomPhase):
        out_phase = attack_rng.uniform(0.0, TWO_PI, s.plan.count)
    elif isinstance(attacker, OtfMixer):
        if attacker.knows_d_ap:
            theta_ap_est = phi_va_est - 2.0 * k2 * s.d_ap
        else:
            theta_ap_est = batched_phase_estimates(
                at_relay_phase, at_relay_amp, s.snr_db, s.samples_per_carrier, rng
            )
            extra_return_delay = attacker.detection_delay
        mixer_offsets = offsets if (attacker.knows_offsets and s.offsets_seed is not None) else None
        mixer = plan_mixer_phases(
            theta_ap_est,
            phi_va_est,
            attacker.d_target,
            s.d_va,
            s.plan,
            s.c,
            secret_offsets=mixer_offsets,
        )
        out_phase = mixer - at_relay_phase
        if extra_return_delay:
            out_phase = out_phase - TWO_PI * prep.f * extra_return_delay
            delay_ns = extra_return_delay * 1e9
    else:  # pragma: no cover - dispatch guarded by run_scenario
        raise AssertionError(attacker)
    # relay to verifier
    attack_phasor = _amp(s.attacker_tx_amplitude, s.d_va, s) * np.exp(
        1j * (out_phase - k2 * s.d_va)
    )
    if s.prover_in_range:
        direct = _amp(1.0, s.d_vp, s) * np.exp(1j * (resp - k2 * s.d_vp))
        est_v = batched_phasor_phase_estimates(
            attack_phasor + direct, s.snr_db, s.samples_per_carrier, rng
        )
    else:
        est_v = batched_phasor_phase_estimates(
            attack_phasor, s.snr_db, s.samples_per_carrier, rng
        )
    theta = wrap(ref - est_v + offsets)
    roundtrip = 2.0 * prep.d_rel / s.c + extra_return_delay
    return theta, delay_ns, roundtrip


def _run_iteration(s: Scenario, prep: _Prepared, point_index: int, iteration: int):
    rng = stream(s.seed, point_index, iteration)
    attack_rng = rng
    if isinstance(s.attacker, RandomPhase) and s.attacker.seed is not None:
        attack_rng = stream(s.attacker.seed, point_index, iteration)
    offsets = 0.0
    if s.offsets_seed is not None:
        offsets = secret_phase_offsets(
            s.plan, stream(s.offsets_seed, point_index, iteration)
        )
    history = []
    records = []
    for step in range(s.steps):
        ref = np.empty(s.plan.count)
        ref[prep.order] = rng.uniform(0.0, TWO_PI, s.plan.count)
        attacked = s.attacker is not None and step >= s.attack_start
        if not attacked:
            theta, delay_ns, roundtrip = _benign_round(s, prep, ref, offsets, rng)
            variant = "none"
        elif isinstance(s.attacker, AmplifyOnly):
            theta, delay_ns, roundtrip = _benign_round(
                s, prep, ref, offsets, rng, gain=s.attacker.gain
            )
            variant = "amplify-only"
        else:
            theta, delay_ns, roundtrip = _relay_round(
                s, prep, ref, offsets, rng, attack_rng
            )
            variant = ATTACK_LABELS[type(s.attacker)]
        profile = PhaseProfile(s.plan, theta)
        estimate = fit_slope(straighten(profile), s.plan, s.c)
        history.append(estimate.distance)
        window = history[-s.window_len :]
        smoothed = float(np.mean(window))
        report = detect_anomaly(profile, estimate, prep.threshold)
        tof_accept = None
        if prep.gate is not None:
            tof_accept = rough_tof_gate(roundtrip, estimate.distance, prep.gate)
        records.append(
            RunRecord(
                scenario_id=s.scenario_id,
                iteration=iteration,
                step=step,
                snr_db=s.snr_db,
                true_distance_m=s.d_vp,
                fitted_distance_m=estimate.distance,
                smoothed_distance_m=smoothed,
                residual_rms_rad=estimate.residual_rms,
                detector_flag=report.flagged,
                tof_accept=tof_accept,
                attack_variant=variant,
                delay_ns=delay_ns,
            )
        )
    return records


def run_scenario(s: Scenario, point_index: int = 0) -> list[RunRecord]:
    """Execute a scenario: iterations x timeline steps, one record each.

    Deterministic for a given (scenario, point_index); point_index
    distinguishes sweep points so each gets independent streams.
    """
    prep = _prepare(s)
    records = []
    for iteration in range(s.iterations):
        records.extend(_run_iteration(s, prep, point_index, iteration))
    return records
