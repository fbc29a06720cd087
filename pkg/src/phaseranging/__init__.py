"""Signal-level simulator and analysis toolkit for multicarrier phase-based
ranging: the ranging math itself, distance-decreasing relay attacker models,
countermeasures, and a reproducible Monte Carlo experiment harness."""

from .core import (
    DEFAULT_C,
    EXACT_C,
    DegeneratePlanError,
    FrequencyPlan,
    PhaseProfile,
    RangeEstimate,
    fit_slope,
    fold_distance,
    max_unambiguous_distance,
    straighten,
    synthesize_phase_profile,
    two_frequency_distance,
    wrap,
    wrapped_roundtrip_phase,
)
from .signals import (
    PhaseEstimationError,
    Tone,
    ToneObservation,
    apply_delay,
    estimate_phase,
    mix_and_filter,
    observe,
    propagate,
    superpose,
)
from .actors import Prover, Verifier
from .attacks import (
    AmplifyOnly,
    AttackerConfig,
    CycleSlip,
    DelayPlan,
    OtfMixer,
    RandomPhase,
    UniformDelay,
    plan_cycle_slip,
    plan_mixer_phases,
    plan_uniform_delay,
    predict_prover_phase,
    run_amplify_only,
    run_cycle_slip,
    run_mixer,
    run_random_phase,
    run_uniform_delay,
)
from .countermeasures import (
    DetectorReport,
    TofGate,
    calibrate_detector,
    detect_anomaly,
    hop_schedule,
    rough_tof_gate,
    secret_phase_offsets,
    tof_precision,
)

__version__ = "0.1.0"
