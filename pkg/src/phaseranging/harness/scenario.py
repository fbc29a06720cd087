"""Scenario configuration: a versioned JSON document describing one
experiment, validated strictly (unknown fields are errors) with messages
that carry the offending field path."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..attacks import (
    AmplifyOnly,
    AttackerConfig,
    CycleSlip,
    HW_DELAY_MEAN,
    HW_DELAY_STD,
    OtfMixer,
    RandomPhase,
    UniformDelay,
)
from ..core import DEFAULT_C, EXACT_C, FrequencyPlan

SCHEMA_VERSION = 1

RELAY_VARIANTS = (UniformDelay, CycleSlip, OtfMixer, RandomPhase)


class ConfigError(ValueError):
    """A scenario document failed validation; message names the field."""


@dataclass(frozen=True)
class Scenario:
    """Fully resolved description of one experiment."""

    plan: FrequencyPlan
    d_vp: float
    scenario_id: str = "scenario"
    d_va: float | None = None
    d_ap: float | None = None
    snr_db: float | None = None
    samples_per_carrier: int = 64
    attacker: AttackerConfig | None = None
    attacker_tx_amplitude: float = 1.0
    prover_in_range: bool = False
    path_loss: bool = False
    lock_error_std: float = 0.0
    hop_seed: int | None = None
    offsets_seed: int | None = None
    detector_threshold: float | None = None
    tof_gate_rate: float | None = None
    window_len: int = 8
    steps: int = 1
    attack_start: int = 0
    iterations: int = 1
    seed: int = 0
    c: float = DEFAULT_C

    def __post_init__(self):
        if self.d_vp < 0:
            raise ConfigError("geometry.d_vp_m: must be non-negative")
        for name, value in (("d_va_m", self.d_va), ("d_ap_m", self.d_ap)):
            if value is not None and value < 0:
                raise ConfigError(f"geometry.{name}: must be non-negative")
        if self.samples_per_carrier < 1:
            raise ConfigError("noise.samples_per_carrier: must be >= 1")
        if self.attacker_tx_amplitude <= 0:
            raise ConfigError("attacker_tx_amplitude: must be positive")
        if self.lock_error_std < 0:
            raise ConfigError("prover.lock_error_std_rad: must be non-negative")
        if self.window_len < 1:
            raise ConfigError("window_len: must be >= 1")
        if self.steps < 1:
            raise ConfigError("timeline.steps: must be >= 1")
        if self.attack_start < 0:
            raise ConfigError("timeline.attack_start: must be non-negative")
        if self.iterations < 1:
            raise ConfigError("iterations: must be >= 1")
        if self.c <= 0:
            raise ConfigError("speed_of_light: must be positive")
        if self.prover_in_range and not self.path_loss:
            raise ConfigError(
                "path_loss: interference from an in-range prover needs path "
                "loss enabled (relative amplitudes are the whole effect)"
            )
        if isinstance(self.attacker, RELAY_VARIANTS):
            if self.d_va is None or self.d_ap is None:
                raise ConfigError(
                    "geometry: relay attackers need d_va_m and d_ap_m"
                )


def _check_keys(obj: dict, allowed, path: str):
    unknown = set(obj) - set(allowed)
    if unknown:
        key = sorted(unknown)[0]
        where = f"{path}.{key}" if path else key
        raise ConfigError(f"{where}: unknown field")


def _get(obj: dict, key: str, path: str, kind, default=..., allow_none=False):
    where = f"{path}.{key}" if path else key
    if key not in obj:
        if default is ...:
            raise ConfigError(f"{where}: required field missing")
        return default
    value = obj[key]
    if value is None:
        if allow_none:
            return None
        raise ConfigError(f"{where}: must not be null")
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        value = float(value)
        if math.isnan(value):
            raise ConfigError(f"{where}: must not be NaN")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected a boolean, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
        return value
    if kind is dict:
        if not isinstance(value, dict):
            raise ConfigError(f"{where}: expected an object, got {value!r}")
        return value
    raise AssertionError(kind)


def _parse_plan(obj: dict, path: str) -> FrequencyPlan:
    if "preset" in obj:
        _check_keys(obj, {"preset", "delta_f_hz"}, path)
        preset = _get(obj, "preset", path, str)
        if preset == "ism":
            if "delta_f_hz" in obj:
                raise ConfigError(f"{path}.delta_f_hz: not valid with the ism preset")
            return FrequencyPlan.ism()
        if preset == "sim-band":
            delta_f = _get(obj, "delta_f_hz", path, float, default=2.0e6)
            return FrequencyPlan.simulation_band(delta_f)
        raise ConfigError(f"{path}.preset: unknown preset {preset!r}")
    _check_keys(obj, {"f_start_hz", "delta_f_hz", "count"}, path)
    try:
        return FrequencyPlan(
            f_start=_get(obj, "f_start_hz", path, float),
            delta_f=_get(obj, "delta_f_hz", path, float),
            count=_get(obj, "count", path, int),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _parse_attacker(obj: dict, path: str) -> AttackerConfig | None:
    variant = _get(obj, "variant", path, str)
    try:
        if variant == "none":
            _check_keys(obj, {"variant"}, path)
            return None
        if variant == "amplify-only":
            _check_keys(obj, {"variant", "gain"}, path)
            return AmplifyOnly(gain=_get(obj, "gain", path, float, default=4.0))
        if variant == "uniform-delay":
            _check_keys(
                obj,
                {"variant", "d_target_m", "extra_delay_ns", "hw_delay_mean_ns", "hw_delay_std_ns"},
                path,
            )
            extra_ns = _get(obj, "extra_delay_ns", path, float, default=None, allow_none=True)
            return UniformDelay(
                d_target=_get(obj, "d_target_m", path, float, default=None, allow_none=True),
                extra_delay=None if extra_ns is None else extra_ns * 1e-9,
                hw_delay_mean=_get(obj, "hw_delay_mean_ns", path, float, default=HW_DELAY_MEAN * 1e9) * 1e-9,
                hw_delay_std=_get(obj, "hw_delay_std_ns", path, float, default=HW_DELAY_STD * 1e9) * 1e-9,
            )
        if variant == "cycle-slip":
            _check_keys(obj, {"variant", "d_target_m"}, path)
            return CycleSlip(d_target=_get(obj, "d_target_m", path, float))
        if variant == "otf-mixer":
            _check_keys(
                obj,
                {"variant", "d_target_m", "knows_d_ap", "knows_offsets", "detection_delay_ns"},
                path,
            )
            return OtfMixer(
                d_target=_get(obj, "d_target_m", path, float),
                knows_d_ap=_get(obj, "knows_d_ap", path, bool, default=True),
                knows_offsets=_get(obj, "knows_offsets", path, bool, default=False),
                detection_delay=_get(obj, "detection_delay_ns", path, float, default=0.0) * 1e-9,
            )
        if variant == "random-phase":
            _check_keys(obj, {"variant", "seed"}, path)
            return RandomPhase(seed=_get(obj, "seed", path, int, default=None, allow_none=True))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.variant: unknown variant {variant!r}")


TOP_LEVEL_KEYS = {
    "version",
    "id",
    "plan",
    "geometry",
    "noise",
    "attacker",
    "attacker_tx_amplitude",
    "prover_in_range",
    "path_loss",
    "prover",
    "countermeasures",
    "window_len",
    "timeline",
    "iterations",
    "seed",
    "speed_of_light",
}


def scenario_from_json(doc: dict) -> Scenario:
    """Parse and validate a scenario document (already JSON-decoded)."""
    if not isinstance(doc, dict):
        raise ConfigError("document: expected a JSON object")
    _check_keys(doc, TOP_LEVEL_KEYS, "")
    version = _get(doc, "version", "", int)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"version: unsupported schema version {version}")

    plan = _parse_plan(_get(doc, "plan", "", dict), "plan")

    geometry = _get(doc, "geometry", "", dict)
    _check_keys(geometry, {"d_vp_m", "d_va_m", "d_ap_m"}, "geometry")
    d_vp = _get(geometry, "d_vp_m", "geometry", float)
    d_va = _get(geometry, "d_va_m", "geometry", float, default=None, allow_none=True)
    d_ap = _get(geometry, "d_ap_m", "geometry", float, default=None, allow_none=True)

    noise = _get(doc, "noise", "", dict, default={})
    _check_keys(noise, {"snr_db", "samples_per_carrier"}, "noise")
    snr_db = _get(noise, "snr_db", "noise", float, default=None, allow_none=True)
    samples = _get(noise, "samples_per_carrier", "noise", int, default=64)

    attacker_obj = _get(doc, "attacker", "", dict, default={"variant": "none"})
    attacker = _parse_attacker(attacker_obj, "attacker")

    prover = _get(doc, "prover", "", dict, default={})
    _check_keys(prover, {"lock_error_std_rad"}, "prover")
    lock_error_std = _get(prover, "lock_error_std_rad", "prover", float, default=0.0)

    cm = _get(doc, "countermeasures", "", dict, default={})
    _check_keys(
        cm,
        {"hop_seed", "secret_offsets_seed", "detector_threshold_rad", "tof_gate_data_rate_bps"},
        "countermeasures",
    )
    hop_seed = _get(cm, "hop_seed", "countermeasures", int, default=None, allow_none=True)
    offsets_seed = _get(cm, "secret_offsets_seed", "countermeasures", int, default=None, allow_none=True)
    detector_threshold = _get(cm, "detector_threshold_rad", "countermeasures", float, default=None, allow_none=True)
    tof_gate_rate = _get(cm, "tof_gate_data_rate_bps", "countermeasures", float, default=None, allow_none=True)

    timeline = _get(doc, "timeline", "", dict, default={})
    _check_keys(timeline, {"steps", "attack_start"}, "timeline")

    c_value = doc.get("speed_of_light", DEFAULT_C)
    if c_value == "exact":
        c = EXACT_C
    elif isinstance(c_value, (int, float)) and not isinstance(c_value, bool):
        c = float(c_value)
    else:
        raise ConfigError("speed_of_light: expected a number or \"exact\"")

    prover_in_range = _get(doc, "prover_in_range", "", bool, default=False)
    path_loss = _get(doc, "path_loss", "", bool, default=prover_in_range)

    return Scenario(
        scenario_id=_get(doc, "id", "", str, default="scenario"),
        plan=plan,
        d_vp=d_vp,
        d_va=d_va,
        d_ap=d_ap,
        snr_db=snr_db,
        samples_per_carrier=samples,
        attacker=attacker,
        attacker_tx_amplitude=_get(doc, "attacker_tx_amplitude", "", float, default=1.0),
        prover_in_range=prover_in_range,
        path_loss=path_loss,
        lock_error_std=lock_error_std,
        hop_seed=hop_seed,
        offsets_seed=offsets_seed,
        detector_threshold=detector_threshold,
        tof_gate_rate=tof_gate_rate,
        window_len=_get(doc, "window_len", "", int, default=8),
        steps=_get(timeline, "steps", "timeline", int, default=1),
        attack_start=_get(timeline, "attack_start", "timeline", int, default=0),
        iterations=_get(doc, "iterations", "", int, default=1),
        seed=_get(doc, "seed", "", int, default=0),
        c=c,
    )
