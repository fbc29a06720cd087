"""Scalar reference chains composed from the public primitives.

The experiment harness evaluates the same exchanges vectorized; tests pin
the two implementations against each other through these compositions.
"""

import numpy as np

from phaseranging.actors import Prover, Verifier
from phaseranging.attacks import plan_mixer_phases, predict_prover_phase, run_mixer
from phaseranging.core import DEFAULT_C
from phaseranging.signals import Tone, apply_delay, estimate_phase, observe, propagate


def run_benign_round(
    plan,
    distance,
    snr_db,
    rng,
    samples=64,
    verifier=None,
    prover=None,
    offsets_known=None,
    path_loss=False,
    response_gain=1.0,
):
    """One full in-range ranging exchange; returns the measured profile."""
    verifier = verifier or Verifier(plan)
    prover = prover or Prover()
    responses = []
    for i in range(plan.count):
        tone = verifier.interrogate(i, rng)
        incoming = observe(
            propagate(tone, distance, path_loss=path_loss), snr_db, samples, rng
        )
        reply = prover.respond(incoming, i, rng)
        if response_gain != 1.0:
            reply = Tone(reply.frequency, reply.amplitude * response_gain, reply.phase)
        back = propagate(reply, distance, path_loss=path_loss)
        responses.append(observe(back, snr_db, samples, rng))
    return verifier.measure_profile(responses, secret_offsets=offsets_known)


def run_relay_round(
    plan,
    d_va,
    d_ap,
    snr_db,
    rng,
    transform,
    samples=64,
    verifier=None,
    prover=None,
    offsets_known=None,
    forward_delay=0.0,
):
    """Out-of-range relay exchange with a transform on the returning tones.

    The interrogation is forwarded transparently over d_va + d_ap (plus an
    optional relay turnaround); `transform` maps the list of response tones
    as they arrive at the relay to the list the relay transmits.
    """
    verifier = verifier or Verifier(plan)
    prover = prover or Prover()
    at_relay = []
    for i in range(plan.count):
        tone = verifier.interrogate(i, rng)
        forwarded = propagate(tone, d_va + d_ap)
        if forward_delay:
            forwarded = apply_delay(forwarded, forward_delay)
        incoming = observe(forwarded, snr_db, samples, rng)
        reply = prover.respond(incoming, i, rng)
        at_relay.append(propagate(reply, d_ap))
    responses = [
        observe(propagate(t, d_va), snr_db, samples, rng) for t in transform(at_relay)
    ]
    return verifier.measure_profile(responses, secret_offsets=offsets_known)


def run_otf_round(
    plan,
    d_va,
    d_ap,
    d_target,
    snr_db,
    rng,
    samples=64,
    knows_d_ap=True,
    verifier=None,
    prover=None,
    offsets_known=None,
    offsets_known_to_attacker=None,
    c=DEFAULT_C,
):
    """Mixer-attack exchange: the relay regenerates the forward tone from its
    own phase estimate and reuses that estimate when planning the mixing
    phases, so its single per-carrier observation drives both."""
    verifier = verifier or Verifier(plan)
    prover = prover or Prover()
    interrogation_est = np.empty(plan.count)
    prover_pred = np.empty(plan.count)
    returning = []
    for i in range(plan.count):
        tone = verifier.interrogate(i, rng)
        relay_obs = observe(propagate(tone, d_va), snr_db, samples, rng)
        interrogation_est[i] = estimate_phase(relay_obs)
        regenerated = Tone(tone.frequency, 1.0, interrogation_est[i])
        incoming = observe(propagate(regenerated, d_ap), snr_db, samples, rng)
        reply = prover.respond(incoming, i, rng)
        back = propagate(reply, d_ap)
        returning.append(back)
        if knows_d_ap:
            prover_pred[i] = predict_prover_phase(relay_obs, d_ap, c)
        else:
            prover_pred[i] = estimate_phase(observe(back, snr_db, samples, rng))
    mixer_phases = plan_mixer_phases(
        prover_pred,
        interrogation_est,
        d_target,
        d_va,
        plan,
        c,
        secret_offsets=offsets_known_to_attacker,
    )
    responses = [
        observe(propagate(run_mixer(t, mixer_phases[i]), d_va), snr_db, samples, rng)
        for i, t in enumerate(returning)
    ]
    return verifier.measure_profile(responses, secret_offsets=offsets_known)
