"""Multicarrier phase-ranging math.

Distance falls out of a frequency-stepped phase profile in three steps:
wrap the per-carrier round-trip phase into [0, 2pi), straighten the
wrapped differences into a monotone sequence, and fit a line of phase
against carrier frequency.  The slope maps to distance via
d = c/(4pi) * slope, unambiguous only up to d_max = c / (2 * delta_f);
anything beyond folds back ("rolls over") into [0, d_max).

Everything here is a pure function of its inputs; values are immutable
and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# The round numbers quoted everywhere in this domain (75 m at 2 MHz hops,
# a rollover every 500 ns, 37.5 m at 4 MHz) assume c = 3.0e8 m/s, so that
# is the default.  The exact constant is available for callers that care.
DEFAULT_C = 3.0e8
EXACT_C = 299_792_458.0


class DegeneratePlanError(ValueError):
    """Carrier frequencies cannot support an unambiguous distance estimate."""


def wrap(theta):
    """Wrap an angle in radians into [0, 2pi).  Accepts scalars or arrays."""
    wrapped = np.asarray(theta, dtype=float) % TWO_PI
    # Tiny negative inputs round up to exactly 2pi under fmod; keep the
    # interval half-open.
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    if np.ndim(theta) == 0:
        return float(wrapped)
    return wrapped


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class FrequencyPlan:
    """Evenly spaced ranging carriers: carrier i sits at f_start + i*delta_f."""

    f_start: float
    delta_f: float
    count: int

    def __post_init__(self):
        _require_finite("f_start", self.f_start)
        _require_finite("delta_f", self.delta_f)
        if self.f_start <= 0:
            raise ValueError(f"f_start must be positive, got {self.f_start}")
        if self.delta_f <= 0:
            raise ValueError(f"delta_f must be positive, got {self.delta_f}")
        if self.count < 2:
            raise ValueError(f"need at least 2 carriers, got {self.count}")

    def frequencies(self) -> np.ndarray:
        return self.f_start + self.delta_f * np.arange(self.count)

    def frequency(self, i: int) -> float:
        if not 0 <= i < self.count:
            raise IndexError(f"carrier {i} out of range for count {self.count}")
        return self.f_start + self.delta_f * i

    def max_unambiguous_distance(self, c: float = DEFAULT_C) -> float:
        return max_unambiguous_distance(self.delta_f, c)

    @classmethod
    def ism(cls) -> "FrequencyPlan":
        """Commercial 2.4 GHz ISM ranging profile: 20 carriers, 2 MHz hops."""
        return cls(f_start=2.403e9, delta_f=2.0e6, count=20)

    @classmethod
    def simulation_band(cls, delta_f: float = 2.0e6) -> "FrequencyPlan":
        """Carriers covering 2.40-2.48 GHz inclusive at the given hop size."""
        count = round(80.0e6 / delta_f) + 1
        return cls(f_start=2.40e9, delta_f=delta_f, count=count)


@dataclass(frozen=True)
class PhaseProfile:
    """Per-carrier wrapped round-trip phase differences, one per carrier."""

    plan: FrequencyPlan
    phases: np.ndarray

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=float)
        if phases.shape != (self.plan.count,):
            raise ValueError(
                f"profile needs {self.plan.count} phases, got shape {phases.shape}"
            )
        if not np.all(np.isfinite(phases)):
            raise ValueError("phases must be finite")
        if np.any(phases < 0.0) or np.any(phases >= TWO_PI):
            raise ValueError("phases must be wrapped into [0, 2pi)")
        phases = phases.copy()
        phases.setflags(write=False)
        object.__setattr__(self, "phases", phases)


@dataclass(frozen=True)
class RangeEstimate:
    """Result of a phase-slope fit.

    distance is folded into [0, d_max); intercept absorbs the integer
    whole-cycle ambiguity that a single carrier cannot resolve.
    """

    slope: float  # radians per Hz
    intercept: float  # radians
    distance: float  # metres, in [0, d_max)
    residual_rms: float  # radians
    d_max: float  # metres


def wrapped_roundtrip_phase(d: float, f: float, c: float = DEFAULT_C) -> float:
    """Wrapped phase difference a verifier measures for a round trip over d.

    The full round-trip phase is 4pi*d*f/c (out and back); whole cycles
    are invisible, so only the wrapped value is observable.
    """
    for name, value in (("d", d), ("f", f), ("c", c)):
        _require_finite(name, value)
    if d < 0:
        raise ValueError(f"distance must be non-negative, got {d}")
    if f <= 0:
        raise ValueError(f"frequency must be positive, got {f}")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    return wrap(4.0 * math.pi * d * f / c)


def two_frequency_distance(
    theta1: float, theta2: float, f1: float, f2: float, c: float = DEFAULT_C
) -> float:
    """Unambiguous distance from the wrapped phase pair of two carriers."""
    if f2 == f1:
        raise DegeneratePlanError("identical carrier frequencies cannot range")
    if f2 < f1:
        raise DegeneratePlanError("f2 must exceed f1")
    d_max = max_unambiguous_distance(f2 - f1, c)
    d = c / (4.0 * math.pi) * wrap(theta2 - theta1) / (f2 - f1)
    return fold_distance(d, d_max)


def synthesize_phase_profile(
    d: float, plan: FrequencyPlan, c: float = DEFAULT_C
) -> PhaseProfile:
    """Ideal noiseless profile a verifier would measure at distance d."""
    if d < 0:
        raise ValueError(f"distance must be non-negative, got {d}")
    phases = wrap(4.0 * math.pi * d * plan.frequencies() / c)
    return PhaseProfile(plan, phases)


def straighten(profile: PhaseProfile) -> np.ndarray:
    """Unwrap a profile into a monotone sequence of cumulative phases.

    Adjacent wrapped differences are read as the smallest non-negative
    increment (a negative raw difference gains 2pi), which is the right
    reading for non-negative distances where phase grows with frequency.
    """
    phases = profile.phases
    increments = wrap(np.diff(phases))
    # An increment within float error of a whole turn is a whole turn; the
    # fitted distance is periodic in d_max, so reading it as zero cannot
    # change the folded result and keeps the output monotone.
    increments[increments > TWO_PI - 1e-9] = 0.0
    out = np.empty(len(phases))
    out[0] = phases[0]
    out[1:] = phases[0] + np.cumsum(increments)
    return out


def fit_slope(
    straightened, plan: FrequencyPlan, c: float = DEFAULT_C
) -> RangeEstimate:
    """Least-squares line of unwrapped phase against carrier frequency."""
    y = np.asarray(straightened, dtype=float)
    if y.shape != (plan.count,):
        raise ValueError(
            f"expected {plan.count} straightened phases, got shape {y.shape}"
        )
    f = plan.frequencies()
    f_centered = f - f.mean()
    slope = float(f_centered @ (y - y.mean()) / (f_centered @ f_centered))
    intercept = float(y.mean() - slope * f.mean())
    residuals = y - (slope * f + intercept)
    residual_rms = float(np.sqrt(np.mean(residuals**2)))
    d_max = max_unambiguous_distance(plan.delta_f, c)
    distance = fold_distance(c / (4.0 * math.pi) * slope, d_max)
    return RangeEstimate(
        slope=slope,
        intercept=intercept,
        distance=distance,
        residual_rms=residual_rms,
        d_max=d_max,
    )


def max_unambiguous_distance(delta_f: float, c: float = DEFAULT_C) -> float:
    """Largest distance measurable without rollover for a given hop size."""
    if not delta_f > 0:
        raise ValueError(f"delta_f must be positive, got {delta_f}")
    return c / (2.0 * delta_f)


def fold_distance(d: float, d_max: float) -> float:
    """Fold a distance into [0, d_max), the rollover the slope fit exhibits."""
    if not d_max > 0:
        raise ValueError(f"d_max must be positive, got {d_max}")
    folded = d % d_max
    if folded >= d_max or folded < 0:
        folded = 0.0
    return float(folded)
