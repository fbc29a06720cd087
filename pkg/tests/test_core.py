"""Ranging-core math against independent oracles.

Expected values marked as derived are computed with exact rational
arithmetic (fractions.Fraction) on the closed-form round-trip phase, or
by brute-force round trips, never with the code path under test.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from phaseranging.core import (
    DEFAULT_C,
    TWO_PI,
    DegeneratePlanError,
    FrequencyPlan,
    PhaseProfile,
    fit_slope,
    fold_distance,
    max_unambiguous_distance,
    straighten,
    synthesize_phase_profile,
    two_frequency_distance,
    wrap,
    wrapped_roundtrip_phase,
)


def rational_roundtrip_phase(d_m, f_hz, c=300_000_000):
    """Exact oracle: (4*d*f/c mod 2) * pi via rational arithmetic."""
    turns = 4 * Fraction(d_m) * Fraction(f_hz) / Fraction(c)
    return float((turns % 2) * Fraction(math.pi))


class TestWrap:
    def test_idempotent(self):
        rng = np.random.default_rng(1)
        for theta in rng.uniform(-50, 50, 200):
            assert wrap(wrap(theta)) == wrap(theta)

    def test_additive_modulo(self):
        rng = np.random.default_rng(2)
        for a, b in rng.uniform(-30, 30, (200, 2)):
            assert wrap(a + b) == pytest.approx(wrap(wrap(a) + wrap(b)), abs=1e-9) or (
                # both sides may legally land on opposite ends of the interval
                abs(wrap(a + b) - wrap(wrap(a) + wrap(b))) > TWO_PI - 1e-9
            )

    def test_period_invariance(self):
        for theta in (0.0, 0.3, 3.0, 6.28):
            for k in (-3, -1, 1, 7):
                assert wrap(theta + TWO_PI * k) == pytest.approx(wrap(theta), abs=1e-9)

    def test_interval_half_open(self):
        assert wrap(TWO_PI) == 0.0
        assert wrap(-1e-22) == 0.0
        assert 0.0 <= wrap(-0.1) < TWO_PI

    def test_array_input(self):
        out = wrap(np.array([0.0, TWO_PI + 1.0, -1.0]))
        assert out.shape == (3,)
        assert np.all((out >= 0) & (out < TWO_PI))


class TestFrequencyPlan:
    def test_ism_profile(self):
        plan = FrequencyPlan.ism()
        assert plan.f_start == 2.403e9
        assert plan.delta_f == 2e6
        assert plan.count == 20
        f = plan.frequencies()
        assert f[0] == 2.403e9
        assert f[-1] == 2.441e9
        assert np.all(np.diff(f) > 0)

    def test_simulation_band(self):
        plan = FrequencyPlan.simulation_band(2e6)
        assert plan.count == 41
        assert plan.frequencies()[-1] == pytest.approx(2.48e9)
        assert FrequencyPlan.simulation_band(1e6).count == 81

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(f_start=0.0, delta_f=1e6, count=2),
            dict(f_start=-2e9, delta_f=1e6, count=2),
            dict(f_start=2e9, delta_f=0.0, count=2),
            dict(f_start=2e9, delta_f=-1e6, count=2),
            dict(f_start=2e9, delta_f=1e6, count=1),
            dict(f_start=math.nan, delta_f=1e6, count=2),
        ],
    )
    def test_invalid_plans_rejected(self, kwargs):
        with pytest.raises(ValueError):
            FrequencyPlan(**kwargs)


class TestWrappedRoundtripPhase:
    def test_zero_distance(self):
        for f in (1e6, 2.4e9, 5.8e9):
            assert wrapped_roundtrip_phase(0.0, f) == 0.0

    def test_eighth_wavelength_roundtrip(self):
        f = 2.4e9
        assert wrapped_roundtrip_phase(DEFAULT_C / (8 * f), f) == pytest.approx(
            math.pi / 2, abs=1e-12
        )

    def test_30m_ism_carrier_against_rational_oracle(self):
        # 4*30*2403/300 mod 2 = 1.2, so the wrapped phase is 1.2*pi
        assert rational_roundtrip_phase(30, 2_403_000_000) == pytest.approx(
            1.2 * math.pi, abs=1e-12
        )
        assert wrapped_roundtrip_phase(30.0, 2.403e9) == pytest.approx(
            1.2 * math.pi, abs=1e-9
        )

    def test_random_cases_against_rational_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            d = int(rng.integers(0, 400))
            f_mhz = int(rng.integers(100, 6000))
            expected = rational_roundtrip_phase(d, f_mhz * 1_000_000)
            got = wrapped_roundtrip_phase(float(d), f_mhz * 1e6)
            # compare on the circle: endpoints 0 and 2pi are the same angle
            delta = abs(got - expected)
            assert min(delta, TWO_PI - delta) < 1e-7

    @pytest.mark.parametrize(
        "d,f", [(-1.0, 2.4e9), (math.nan, 2.4e9), (1.0, 0.0), (1.0, -5.0), (1.0, math.inf)]
    )
    def test_rejects_bad_inputs(self, d, f):
        with pytest.raises(ValueError):
            wrapped_roundtrip_phase(d, f)


class TestTwoFrequencyDistance:
    def test_equal_phases_zero_distance(self):
        assert two_frequency_distance(1.3, 1.3, 2.403e9, 2.405e9) == 0.0

    def test_30m_roundtrip_oracle(self):
        # synthesize both phases from d=30 and invert
        f1, f2 = 2.403e9, 2.405e9
        t1 = wrapped_roundtrip_phase(30.0, f1)
        t2 = wrapped_roundtrip_phase(30.0, f2)
        assert wrap(t2 - t1) == pytest.approx(0.8 * math.pi, abs=1e-9)
        assert two_frequency_distance(t1, t2, f1, f2) == pytest.approx(30.0, abs=1e-9)

    def test_wrap_limit_approaches_d_max(self):
        f1, f2 = 2.403e9, 2.405e9
        d = two_frequency_distance(0.0, TWO_PI - 1e-9, f1, f2)
        assert d == pytest.approx(75.0, abs=1e-6)

    def test_degenerate_plan(self):
        with pytest.raises(DegeneratePlanError):
            two_frequency_distance(0.1, 0.2, 2.4e9, 2.4e9)
        with pytest.raises(DegeneratePlanError):
            two_frequency_distance(0.1, 0.2, 2.41e9, 2.40e9)


class TestSynthesizeProfile:
    def test_zero_distance_all_zero(self):
        profile = synthesize_phase_profile(0.0, FrequencyPlan.ism())
        assert np.all(profile.phases == 0.0)

    def test_slope_ratio_10m_vs_20m(self):
        plan = FrequencyPlan.simulation_band(2e6)
        est10 = fit_slope(straighten(synthesize_phase_profile(10.0, plan)), plan)
        est20 = fit_slope(straighten(synthesize_phase_profile(20.0, plan)), plan)
        assert est20.slope / est10.slope == pytest.approx(2.0, rel=1e-9)

    def test_d_max_profile_constant_and_folds_to_zero(self):
        plan = FrequencyPlan.simulation_band(2e6)
        profile = synthesize_phase_profile(75.0, plan)
        # every carrier advances by a whole number of cycles relative to d=0,
        # leaving one constant offset across the band
        circular = np.abs(profile.phases - profile.phases[0])
        assert np.all(np.minimum(circular, TWO_PI - circular) < 1e-9)
        est = fit_slope(straighten(profile), plan)
        assert abs(est.distance) < 1e-6 or abs(est.distance - 75.0) < 1e-6

    def test_matches_per_carrier_op(self):
        plan = FrequencyPlan.ism()
        profile = synthesize_phase_profile(12.34, plan)
        for i in range(plan.count):
            assert profile.phases[i] == pytest.approx(
                wrapped_roundtrip_phase(12.34, plan.frequency(i)), abs=1e-9
            )


class TestStraighten:
    def test_all_zero(self):
        plan = FrequencyPlan.ism()
        out = straighten(PhaseProfile(plan, np.zeros(plan.count)))
        assert np.all(out == 0.0)

    def test_constant_increment_for_30m(self):
        # increment per 2 MHz hop at 30 m: 4*30*2/300 mod 2 = 0.8 turns
        plan = FrequencyPlan.ism()
        out = straighten(synthesize_phase_profile(30.0, plan))
        increments = np.diff(out)
        expected = float((4 * Fraction(30) * Fraction(2) / 300 % 2) * Fraction(math.pi))
        assert np.allclose(increments, expected, atol=1e-9)
        assert np.all(increments > 0)

    def test_near_d_max_round_trip(self):
        plan = FrequencyPlan.ism()
        d = 74.999
        est = fit_slope(straighten(synthesize_phase_profile(d, plan)), plan)
        assert est.distance == pytest.approx(d, abs=1e-6)

    def test_non_decreasing_for_positive_distance(self):
        plan = FrequencyPlan.simulation_band(1e6)
        rng = np.random.default_rng(4)
        for d in rng.uniform(0, 300, 20):
            out = straighten(synthesize_phase_profile(d, plan))
            assert np.all(np.diff(out) >= 0)


class TestFitSlope:
    def test_noiseless_30m_round_trip(self):
        plan = FrequencyPlan.ism()
        est = fit_slope(straighten(synthesize_phase_profile(30.0, plan)), plan)
        assert est.distance == pytest.approx(30.0, abs=1e-6)
        assert est.residual_rms < 1e-9

    def test_zero_distance(self):
        plan = FrequencyPlan.ism()
        est = fit_slope(straighten(synthesize_phase_profile(0.0, plan)), plan)
        assert est.distance == 0.0

    def test_round_trip_many_distances(self):
        plan = FrequencyPlan.ism()
        d_max = plan.max_unambiguous_distance()
        rng = np.random.default_rng(5)
        for d in rng.uniform(0, d_max * 0.999, 50):
            est = fit_slope(straighten(synthesize_phase_profile(d, plan)), plan)
            assert abs(est.distance - d) < 1e-6

    def test_rollover_periodicity(self):
        plan = FrequencyPlan.ism()
        d_max = plan.max_unambiguous_distance()
        rng = np.random.default_rng(6)
        for _ in range(20):
            d = rng.uniform(0, d_max)
            k = int(rng.integers(1, 5))
            base = fit_slope(straighten(synthesize_phase_profile(d, plan)), plan)
            shifted = fit_slope(
                straighten(synthesize_phase_profile(d + k * d_max, plan)), plan
            )
            assert shifted.distance == pytest.approx(base.distance, abs=1e-6)

    def test_two_carrier_agreement(self):
        plan = FrequencyPlan(f_start=2.403e9, delta_f=2e6, count=2)
        rng = np.random.default_rng(7)
        for d in rng.uniform(0, 74.9, 30):
            profile = synthesize_phase_profile(d, plan)
            est = fit_slope(straighten(profile), plan)
            direct = two_frequency_distance(
                profile.phases[0], profile.phases[1], plan.frequency(0), plan.frequency(1)
            )
            assert est.distance == pytest.approx(direct, abs=1e-9)

    def test_random_phases_mean_near_half_d_max(self):
        plan = FrequencyPlan.simulation_band(2e6)
        d_max = plan.max_unambiguous_distance()
        rng = np.random.default_rng(8)
        fitted = []
        for _ in range(1000):
            profile = PhaseProfile(plan, rng.uniform(0.0, TWO_PI, plan.count))
            fitted.append(fit_slope(straighten(profile), plan).distance)
        assert np.mean(fitted) == pytest.approx(d_max / 2, rel=0.10)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            fit_slope(np.zeros(5), FrequencyPlan.ism())

    def test_negative_slope_folds_non_negative(self):
        plan = FrequencyPlan.ism()
        # strictly decreasing straightened sequence gives a negative raw slope
        est = fit_slope(-np.linspace(0, 3.0, plan.count), plan)
        assert 0.0 <= est.distance < est.d_max
        assert est.slope < 0


class TestMaxUnambiguousDistance:
    def test_published_hop_table(self):
        assert max_unambiguous_distance(0.5e6) == 300.0
        assert max_unambiguous_distance(1e6) == 150.0
        assert max_unambiguous_distance(2e6) == 75.0
        assert max_unambiguous_distance(4e6) == 37.5

    def test_algebraic_identity(self):
        assert max_unambiguous_distance(DEFAULT_C / 2) == 1.0

    def test_strictly_decreasing_in_hop(self):
        hops = np.linspace(0.1e6, 10e6, 40)
        values = [max_unambiguous_distance(h) for h in hops]
        assert np.all(np.diff(values) < 0)

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            max_unambiguous_distance(0.0)
        with pytest.raises(ValueError):
            max_unambiguous_distance(-1e6)


class TestFoldDistance:
    def test_amplify_only_anchor(self):
        assert fold_distance(53.0, 37.5) == pytest.approx(15.5, abs=1e-12)

    def test_in_range_unchanged(self):
        assert fold_distance(30.0, 75.0) == 30.0

    def test_just_past_rollover(self):
        assert fold_distance(76.0, 75.0) == pytest.approx(1.0, abs=1e-12)

    def test_negative_input_folds_up(self):
        assert fold_distance(-1.0, 75.0) == pytest.approx(74.0, abs=1e-12)

    def test_result_in_interval(self):
        rng = np.random.default_rng(9)
        for d in rng.uniform(-500, 500, 200):
            folded = fold_distance(d, 37.5)
            assert 0.0 <= folded < 37.5
