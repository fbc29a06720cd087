"""Verifier and prover state machines for one ranging exchange.

The verifier emits one tone per carrier at a randomly chosen reference
phase, the prover locks to whatever arrives and echoes it (optionally
shifted by secret per-carrier offsets), and the verifier turns the
returning phases into a wrapped phase profile.  Sign convention: the
measured entry for carrier i is wrap(reference - received), which in the
noiseless benign case equals the round-trip phase 4pi*f_i*d/c.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .core import DEFAULT_C, TWO_PI, FrequencyPlan, PhaseProfile, RangeEstimate, wrap
from .signals import Tone, ToneObservation, estimate_phase


class Verifier:
    """Trusted device that measures and checks the prover's distance."""

    def __init__(self, plan: FrequencyPlan, window_len: int = 8, c: float = DEFAULT_C):
        if window_len < 1:
            raise ValueError(f"window_len must be >= 1, got {window_len}")
        self.plan = plan
        self.c = c
        self.window_len = window_len
        self.reference_phases = np.zeros(plan.count)
        self.history = deque(maxlen=window_len)

    def interrogate(self, carrier: int, rng: np.random.Generator) -> Tone:
        """Emit the interrogation tone for one carrier at a fresh random phase."""
        frequency = self.plan.frequency(carrier)
        phase = rng.uniform(0.0, TWO_PI)
        self.reference_phases[carrier] = phase
        return Tone(frequency, 1.0, phase)

    def measure_profile(self, responses, secret_offsets=None) -> PhaseProfile:
        """Wrapped phase differences between the stored references and the echoes.

        responses: one ToneObservation per carrier, in carrier order.  When the
        prover applies shared secret offsets, passing them here removes them so
        the benign profile is recovered exactly.
        """
        responses = list(responses)
        if len(responses) != self.plan.count:
            raise ValueError(
                f"expected {self.plan.count} responses, got {len(responses)}"
            )
        estimates = np.array([estimate_phase(obs) for obs in responses])
        phases = self.reference_phases - estimates
        if secret_offsets is not None:
            phases = phases + np.asarray(secret_offsets, dtype=float)
        return PhaseProfile(self.plan, wrap(phases))

    def smoothed_distance(self, estimate: RangeEstimate) -> float:
        """Push a fresh estimate into the sliding window and return its mean."""
        self.history.append(estimate.distance)
        return float(np.mean(self.history))


class Prover:
    """Honest device that phase-locks to the interrogation tone and echoes it."""

    def __init__(self, secret_offsets=None, lock_error_std: float = 0.0):
        if lock_error_std < 0:
            raise ValueError("lock_error_std must be non-negative")
        self.secret_offsets = (
            None if secret_offsets is None else np.asarray(secret_offsets, dtype=float)
        )
        self.lock_error_std = lock_error_std

    def respond(
        self,
        incoming: ToneObservation,
        carrier: int,
        rng: np.random.Generator | None = None,
    ) -> Tone:
        """Echo the estimated incoming phase on the same carrier.

        Adds the secret offset for this carrier when offsets are enabled, plus
        a Gaussian lock error when the lock is modelled as imperfect.
        """
        phase = estimate_phase(incoming)
        if self.secret_offsets is not None:
            phase += self.secret_offsets[carrier]
        if self.lock_error_std > 0:
            if rng is None:
                raise ValueError("imperfect lock requires an rng")
            phase += rng.normal(scale=self.lock_error_std)
        return Tone(incoming.tone.frequency, 1.0, wrap(phase))
