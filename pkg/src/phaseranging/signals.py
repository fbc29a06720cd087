"""Complex-phasor model of continuous-wave ranging tones.

A tone is amplitude * exp(j*phase) at a single carrier.  For CW signals,
propagation, delay, mixing and filtering are exact amplitude/phase
transforms, so no sampled passband waveforms are needed; the
double-frequency product that a hardware mixer's low-pass filter removes
is simply dropped analytically.  Noise enters only at observation
points, as circularly symmetric complex Gaussian samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_C, TWO_PI, wrap


class PhaseEstimationError(RuntimeError):
    """Phase cannot be recovered from an observation (zero-magnitude mean)."""


@dataclass(frozen=True)
class Tone:
    """Single CW carrier as observed at one point in space."""

    frequency: float
    amplitude: float
    phase: float

    def __post_init__(self):
        if not (math.isfinite(self.frequency) and self.frequency > 0):
            raise ValueError(f"frequency must be positive, got {self.frequency}")
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise ValueError(f"amplitude must be non-negative, got {self.amplitude}")
        object.__setattr__(self, "phase", wrap(self.phase))

    def phasor(self) -> complex:
        return self.amplitude * complex(math.cos(self.phase), math.sin(self.phase))


@dataclass(frozen=True)
class ToneObservation:
    """Noisy I/Q samples of a tone at a receiver.

    With zero noise every sample equals the tone's phasor exactly.
    """

    tone: Tone
    samples: np.ndarray
    noise_variance: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 1 or len(samples) < 1:
            raise ValueError("samples must be a non-empty 1-D complex array")
        if self.noise_variance < 0:
            raise ValueError("noise_variance must be non-negative")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)


def path_loss_factor(distance: float) -> float:
    """Free-space amplitude factor, 1/d normalized to unity at 1 m."""
    if distance <= 1.0:
        return 1.0
    return 1.0 / distance


def propagate(
    tone: Tone, distance: float, c: float = DEFAULT_C, path_loss: bool = False
) -> Tone:
    """Tone after travelling `distance`: a delay of d/c, i.e. a phase rotation."""
    if distance < 0:
        raise ValueError(f"distance must be non-negative, got {distance}")
    phase = wrap(tone.phase - TWO_PI * tone.frequency * distance / c)
    amplitude = tone.amplitude
    if path_loss:
        amplitude *= path_loss_factor(distance)
    return Tone(tone.frequency, amplitude, phase)


def apply_delay(tone: Tone, delta_t: float) -> Tone:
    """Tone after an ideal delay line; for CW this is a pure phase rotation."""
    if delta_t < 0:
        raise ValueError(f"delay must be non-negative, got {delta_t}")
    return Tone(
        tone.frequency,
        tone.amplitude,
        wrap(tone.phase - TWO_PI * tone.frequency * delta_t),
    )


def mix_and_filter(tone: Tone, mixer_phase: float, gain: float = 2.0) -> Tone:
    """Mix a tone with a double-frequency reference and keep the difference term.

    The surviving low-pass product carries phase mixer_phase - tone.phase at
    the original carrier frequency and half the input amplitude; `gain` is
    the re-amplification applied after the filter (default restores unity).
    """
    if gain <= 0:
        raise ValueError(f"gain must be positive, got {gain}")
    return Tone(
        tone.frequency,
        0.5 * gain * tone.amplitude,
        wrap(mixer_phase - tone.phase),
    )


def superpose(tones) -> Tone:
    """Coherent sum of co-channel tones (resultant phasor).

    A zero-magnitude resultant is degenerate; its phase is 0 by convention.
    """
    tones = list(tones)
    if not tones:
        raise ValueError("superpose needs at least one tone")
    frequency = tones[0].frequency
    for t in tones[1:]:
        if t.frequency != frequency:
            raise ValueError(
                f"cannot superpose tones at {t.frequency} Hz and {frequency} Hz"
            )
    resultant = sum(t.phasor() for t in tones)
    magnitude = abs(resultant)
    # below float residue of the summation the phase is meaningless
    degenerate = magnitude <= 1e-12 * sum(t.amplitude for t in tones)
    phase = 0.0 if degenerate else math.atan2(resultant.imag, resultant.real)
    return Tone(frequency, magnitude, wrap(phase))


def observe(
    tone: Tone,
    snr_db,
    samples: int = 64,
    rng: np.random.Generator | None = None,
) -> ToneObservation:
    """Sample a tone at a receiver with the given per-sample SNR.

    snr_db is relative to the tone's own power; None or +inf means a
    noiseless observation.  Noisy observations require an explicit rng so
    that every draw is attributable to a seeded stream.
    """
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    phasor = tone.phasor()
    noiseless = snr_db is None or snr_db == math.inf
    if noiseless:
        return ToneObservation(tone, np.full(samples, phasor), 0.0)
    if rng is None:
        raise ValueError("noisy observation requires an rng")
    noise_variance = tone.amplitude**2 / 10.0 ** (snr_db / 10.0)
    scale = math.sqrt(noise_variance / 2.0)
    noise = rng.normal(scale=scale, size=samples) + 1j * rng.normal(
        scale=scale, size=samples
    )
    return ToneObservation(tone, phasor + noise, noise_variance)


def estimate_phase(observation: ToneObservation) -> float:
    """Phase of the sample-averaged phasor, wrapped to [0, 2pi)."""
    mean = observation.samples.mean()
    if abs(mean) == 0.0:
        raise PhaseEstimationError("sample mean has zero magnitude")
    return wrap(float(np.angle(mean)))


def batched_phase_estimates(
    phases,
    amplitudes,
    snr_db,
    samples: int,
    rng: np.random.Generator | None,
):
    """Vectorized equivalent of observe + estimate_phase over arrays of tones.

    The mean of `samples` i.i.d. complex Gaussian noise samples of variance
    sigma^2 is itself complex Gaussian with variance sigma^2/samples, so the
    averaged phasor is drawn directly; the resulting phase estimates have
    exactly the distribution of the scalar path.
    """
    phases = np.asarray(phases, dtype=float)
    amplitudes = np.broadcast_to(np.asarray(amplitudes, dtype=float), phases.shape)
    return batched_phasor_phase_estimates(
        amplitudes * np.exp(1j * phases), snr_db, samples, rng
    )


def batched_phasor_phase_estimates(
    phasors,
    snr_db,
    samples: int,
    rng: np.random.Generator | None,
):
    """Phase estimates of received phasors (possibly superposed) with noise
    at snr_db relative to each phasor's own power.

    The noise mean is drawn in the tone's own frame: circular symmetry makes
    angle(A*exp(j*phi) + n) and phi + angle(A + n) identically distributed,
    and the latter gives scenarios sharing a stream identical estimator
    error realizations (common random numbers across paired experiments).
    """
    phasors = np.asarray(phasors, dtype=complex)
    if snr_db is None or snr_db == math.inf:
        return wrap(np.angle(phasors))
    if rng is None:
        raise ValueError("noisy observation requires an rng")
    amplitudes = np.abs(phasors)
    noise_variance = amplitudes**2 / 10.0 ** (snr_db / 10.0)
    scale = np.sqrt(noise_variance / (2.0 * samples))
    error = np.angle(
        amplitudes + rng.normal(scale=scale) + 1j * rng.normal(scale=scale)
    )
    return wrap(np.angle(phasors) + error)
