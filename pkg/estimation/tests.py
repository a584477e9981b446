import json
import math
from io import StringIO

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from core.context import ProcessKind, Side
from core.exceptions import InsufficientTailDataError
from spectra.bounds import brownian_small_ball, chung_bounds, lambda1

from .exit_times import (
    calibrate,
    estimate_exit_rate,
    fit_exit_rate,
    report_bound_bracket,
    simulate_exit_times,
)
from .identities import (
    expected_area_variance,
    increment_report,
    scaling_distribution_check,
    scaling_identity_check,
    timechange_report,
    timechange_samples,
)
from .processes import bridge_maxima, bridge_step_sups, kind_norms, reference_rate
from .results import RateFit, ScalingComparison, SmallBallEstimate, SurvivalCurve
from .serializers import RateFitRecordSerializer, SmallBallRecordSerializer
from .small_ball import (
    coupled_small_ball,
    estimate_small_ball,
    estimate_small_ball_grid,
    fit_small_ball_rate,
    horizon_scaling_check,
    sample_running_sups,
)
from .statistics import (
    clopper_pearson,
    ks_two_sample,
    variance_estimate,
    weighted_linear_fit,
    wilson_interval,
)

def synthetic_estimates(rate: float, offset: float = 0.0) -> list[SmallBallEstimate]:
    estimates = []
    for epsilon in (0.8, 1.0, 1.2, 1.5):
        p = math.exp(-rate / epsilon**2 + offset)
        estimates.append(
            SmallBallEstimate(
                kind=ProcessKind.BM2,
                epsilon=epsilon,
                p_hat=p,
                ci_low=p,
                ci_high=p,
                n_paths=1000,
                steps=100,
                seed=0,
                successes=round(1000 * p),
            )
        )
    return estimates


def exponential_curve(rate: float, n: int, censor_at: float | None = None) -> SurvivalCurve:
    """Exit times at the exact quantiles of Exp(rate)."""
    times = -np.log1p(-(np.arange(n) + 0.5) / n) / rate
    t_max = float(times[-1]) + 1.0 if censor_at is None else censor_at
    censored = times > t_max
    return SurvivalCurve.from_exit_times(np.minimum(times, t_max), censored, t_max)


class IntervalTests(SimpleTestCase):
    def test_wilson_contains_estimate(self):
        for successes, n in ((5, 100), (50, 100), (1, 3), (999, 1000)):
            low, high = wilson_interval(successes, n)
            self.assertLessEqual(low, successes / n)
            self.assertGreaterEqual(high, successes / n)

    def test_wilson_is_one_sided_at_the_edges(self):
        low, high = wilson_interval(0, 100)
        self.assertEqual(low, 0.0)
        self.assertGreater(high, 0.0)
        self.assertLess(high, 0.05)
        low, high = wilson_interval(100, 100)
        self.assertEqual(high, 1.0)
        self.assertLess(low, 1.0)

    def test_wilson_rejects_bad_counts(self):
        with self.assertRaises(ValidationError):
            wilson_interval(0, 0)
        with self.assertRaises(ValidationError):
            wilson_interval(5, 4)

    def test_clopper_pearson(self):
        self.assertEqual(clopper_pearson(0, 10)[0], 0.0)
        self.assertEqual(clopper_pearson(10, 10)[1], 1.0)
        low, high = clopper_pearson(90, 100)
        self.assertLess(low, 0.9)
        self.assertGreater(high, 0.9)
        self.assertAlmostEqual(clopper_pearson(0, 10)[1], 1 - 0.025**0.1, places=10)


class KolmogorovSmirnovTests(SimpleTestCase):
    def test_identical_samples(self):
        result = ks_two_sample(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.0, 3.0]))
        self.assertEqual(result.statistic, 0.0)
        self.assertEqual(result.p_value, 1.0)

    def test_disjoint_supports(self):
        result = ks_two_sample(np.zeros(3), np.ones(3))
        self.assertEqual(result.statistic, 1.0)
        self.assertEqual((result.n1, result.n2), (3, 3))

    def test_same_law(self):
        a = np.random.default_rng(101).standard_normal(10_000)
        b = np.random.default_rng(202).standard_normal(10_000)
        self.assertGreater(ks_two_sample(a, b).p_value, 0.001)

    def test_different_laws(self):
        a = np.random.default_rng(1).standard_normal(2000)
        b = np.random.default_rng(2).standard_normal(2000) * 2.0
        self.assertLess(ks_two_sample(a, b).p_value, 1e-6)

    def test_empty_input_rejected(self):
        with self.assertRaises(ValidationError):
            ks_two_sample(np.array([]), np.ones(3))


class LinearFitTests(SimpleTestCase):
    def test_exact_line(self):
        x = np.array([1.0, 2.0, 3.0, 4.0])
        fit = weighted_linear_fit(x, 2.5 * x - 1.0, np.array([1.0, 2.0, 3.0, 4.0]))
        self.assertAlmostEqual(fit.slope, 2.5, places=12)
        self.assertAlmostEqual(fit.intercept, -1.0, places=12)
        self.assertGreater(fit.slope_stderr, 0.0)

    def test_degenerate_design_rejected(self):
        with self.assertRaises(ValidationError):
            weighted_linear_fit(np.ones(3), np.arange(3.0), np.ones(3))


class SmallBallRateFitTests(SimpleTestCase):
    def test_noiseless_rate(self):
        fit = fit_small_ball_rate(synthetic_estimates(3.0))
        self.assertAlmostEqual(fit.rate, 3.0, places=10)
        self.assertAlmostEqual(fit.intercept, 0.0, places=10)
        self.assertEqual(fit.window, (0.8, 1.5))
        self.assertEqual(fit.n_points, 4)

    def test_noiseless_rate_with_offset(self):
        fit = fit_small_ball_rate(synthetic_estimates(3.0, offset=0.7))
        self.assertAlmostEqual(fit.rate, 3.0, places=10)
        self.assertAlmostEqual(fit.intercept, -0.7, places=10)

    def test_rejects_degenerate_input(self):
        estimates = synthetic_estimates(3.0)
        same_epsilon = [estimates[0]] * 4
        with self.assertRaises(ValidationError):
            fit_small_ball_rate(same_epsilon)
        with self.assertRaises(ValidationError):
            fit_small_ball_rate(estimates[:2])
        with self.assertRaises(ValidationError):
            fit_small_ball_rate([])
        zero = SmallBallEstimate(ProcessKind.BM2, 0.5, 0.0, 0.0, 0.01, 1000, 100, 0, 0)
        with self.assertRaises(ValidationError):
            fit_small_ball_rate([*estimates, zero])
        mixed = SmallBallEstimate(ProcessKind.BM1, 0.7, 0.1, 0.08, 0.12, 1000, 100, 0, 100)
        with self.assertRaises(ValidationError):
            fit_small_ball_rate([*estimates, mixed])


class ExitRateFitTests(SimpleTestCase):
    def test_recovers_synthetic_rate(self):
        for rate in (0.5, 2.0, 3.5):
            fit = fit_exit_rate(exponential_curve(rate, 20_000), ProcessKind.HEIS, seed=0)
            self.assertLess(abs(fit.rate - rate), 2 * fit.stderr)
            self.assertLess(abs(fit.intercept), 0.05)
            self.assertLess(fit.window[0], fit.window[1])
            self.assertGreaterEqual(fit.n_points, 100)

    def test_recovers_rate_under_censoring(self):
        curve = exponential_curve(2.0, 20_000, censor_at=1.5)
        self.assertGreater(curve.final_survival, 0.02)
        fit = fit_exit_rate(curve, ProcessKind.BM2, seed=0)
        self.assertEqual(fit.window[1], 1.5)
        self.assertLess(abs(fit.rate - 2.0), 2 * fit.stderr)

    def test_insufficient_tail_data(self):
        with self.assertRaisesMessage(InsufficientTailDataError, "insufficient tail data"):
            fit_exit_rate(exponential_curve(2.0, 200), ProcessKind.BM1, seed=0)

    def test_horizon_too_short(self):
        curve = exponential_curve(2.0, 5000, censor_at=0.3)
        with self.assertRaises(ValidationError):
            fit_exit_rate(curve, ProcessKind.BM1, seed=0)

    def test_invalid_window(self):
        curve = exponential_curve(2.0, 5000)
        for window in ((0.3, 0.02), (0.0, 0.3), (0.1, 1.0)):
            with self.assertRaises(ValidationError):
                fit_exit_rate(curve, ProcessKind.BM1, seed=0, window=window)

    def test_survival_curve(self):
        curve = SurvivalCurve.from_exit_times(
            np.array([3.0, 1.0, 5.0, 2.0]), np.array([False, False, True, False]), 5.0
        )
        np.testing.assert_array_equal(curve.times, [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(curve.survival, [0.75, 0.5, 0.25])
        self.assertEqual(curve.exits, 3)
        self.assertEqual(curve.final_survival, 0.25)
        self.assertEqual(curve.survival_at(0.5), 1.0)
        self.assertEqual(curve.survival_at(2.0), 0.5)

    def test_bound_bracket_report(self):
        def fit(rate: float) -> RateFit:
            return RateFit(ProcessKind.HEIS, rate, 0.01, 0.0, (0.1, 1.0), 500, 0)

        with self.assertLogs("estimation.exit_times", "INFO") as logs:
            self.assertTrue(report_bound_bracket(fit(3.5)))
        self.assertIn("inside", logs.output[0])
        with self.assertLogs("estimation.exit_times", "WARNING") as logs:
            self.assertFalse(report_bound_bracket(fit(2.5)))
            self.assertFalse(report_bound_bracket(fit(4.5)))
        self.assertEqual(len(logs.output), 2)


class ProcessTests(SimpleTestCase):
    def test_kind_norms(self):
        planar = np.array([[3.0, -4.0]])
        area = np.array([-9.0])
        self.assertEqual(kind_norms(ProcessKind.BM1, planar, area)[0], 3.0)
        self.assertEqual(kind_norms(ProcessKind.BM2, planar, area)[0], 5.0)
        self.assertEqual(kind_norms(ProcessKind.AREA, planar, area)[0], 3.0)
        self.assertAlmostEqual(kind_norms(ProcessKind.HEIS, planar, area)[0], (625 + 81) ** 0.25)

    def test_reference_rates(self):
        self.assertEqual(reference_rate(ProcessKind.BM1), lambda1(1))
        self.assertEqual(reference_rate(ProcessKind.BM2), lambda1(2))
        self.assertEqual(reference_rate(ProcessKind.AREA), math.pi / 4)
        self.assertIsNone(reference_rate(ProcessKind.HEIS))

    def test_bridge_maxima(self):
        a, b = np.array([0.2, -1.0]), np.array([0.5, -2.0])
        np.testing.assert_allclose(bridge_maxima(a, b, 0.1, np.ones(2)), [0.5, -1.0], atol=1e-12)
        uniforms = 1.0 - np.random.default_rng(0).random(100_000)
        maxima = bridge_maxima(np.zeros(uniforms.size), np.zeros(uniforms.size), 1.0, uniforms)
        expected = math.exp(-0.5)
        sigma = math.sqrt(expected * (1 - expected) / uniforms.size)
        self.assertLess(abs(np.mean(maxima >= 0.5) - expected), 4 * sigma)

    def test_bridge_sups_bound_the_grid_points(self):
        rng = np.random.default_rng(1)
        previous = rng.normal(size=(500, 2))
        planar = previous + rng.normal(scale=0.1, size=(500, 2))
        for kind in (ProcessKind.BM1, ProcessKind.BM2):
            sups = bridge_step_sups(kind, previous, planar, 0.01, rng)
            ends = np.maximum(
                kind_norms(kind, previous, np.zeros(500)), kind_norms(kind, planar, np.zeros(500))
            )
            self.assertTrue(np.all(sups >= ends), kind)

    def test_bridge_monitoring_raises_running_sups(self):
        kinds = [ProcessKind.BM1, ProcessKind.BM2, ProcessKind.HEIS]
        bridged = sample_running_sups(kinds, 300, 40, seed=3, threads=1)
        grid = sample_running_sups(kinds, 300, 40, seed=3, threads=1, bridge=False)
        self.assertTrue(np.all(bridged[:, :2] >= grid[:, :2]))
        self.assertTrue(np.all(bridged[:, :2].mean(axis=0) > grid[:, :2].mean(axis=0)))
        np.testing.assert_array_equal(bridged[:, 2], grid[:, 2])


class SmallBallEstimateTests(SimpleTestCase):
    def test_large_ball_contains_every_path(self):
        estimate = estimate_small_ball(ProcessKind.BM1, 10.0, 500, 50, seed=1, threads=1)
        self.assertEqual(estimate.p_hat, 1.0)
        self.assertEqual(estimate.rate_estimate, 0.0)
        self.assertEqual(estimate.ci_high, 1.0)
        self.assertLessEqual(estimate.ci_low, estimate.p_hat)

    def test_zero_successes_is_not_an_error(self):
        estimate = estimate_small_ball(ProcessKind.HEIS, 0.05, 200, 50, seed=1, threads=1)
        self.assertEqual(estimate.p_hat, 0.0)
        self.assertEqual(estimate.ci_low, 0.0)
        self.assertGreater(estimate.ci_high, 0.0)
        self.assertEqual(estimate.rate_estimate, math.inf)

    def test_rejects_bad_parameters(self):
        with self.assertRaises(ValidationError):
            estimate_small_ball(ProcessKind.BM1, -1.0, 100, 10)
        with self.assertRaises(ValidationError):
            estimate_small_ball(ProcessKind.BM1, 1.0, 0, 10)

    def test_bm1_matches_reflection_series(self):
        estimate = estimate_small_ball(ProcessKind.BM1, 0.5, 20_000, 100, seed=3, threads=1)
        expected = brownian_small_ball(0.5)
        sigma = math.sqrt(expected * (1 - expected) / estimate.n_paths)
        self.assertLess(abs(estimate.p_hat - expected), 4 * sigma)

    def test_monotone_in_epsilon(self):
        estimates = estimate_small_ball_grid(
            ProcessKind.HEIS, [0.6, 0.8, 1.0, 1.3], 1000, 50, seed=5, threads=1
        )
        p = [estimate.p_hat for estimate in estimates]
        self.assertEqual(p, sorted(p))

    def test_coupling(self):
        sups = sample_running_sups(
            [ProcessKind.HEIS, ProcessKind.BM2], 500, 50, seed=2, threads=1, bridge=False
        )
        self.assertTrue(np.all(sups[:, 0] >= sups[:, 1]))
        heis, bm2 = coupled_small_ball(1.0, 500, 50, seed=2, threads=1)
        self.assertLessEqual(heis.successes, bm2.successes)
        self.assertLessEqual(heis.p_hat, bm2.p_hat)

    def test_shared_noise_across_kinds(self):
        joint = sample_running_sups([ProcessKind.BM1, ProcessKind.AREA], 100, 20, seed=8, threads=1)
        alone = sample_running_sups([ProcessKind.BM1], 100, 20, seed=8, threads=1)
        np.testing.assert_array_equal(joint[:, 0], alone[:, 0])

    def test_thread_count_does_not_change_estimates(self):
        serial = sample_running_sups([ProcessKind.HEIS], 700, 30, seed=4, threads=1)
        parallel = sample_running_sups([ProcessKind.HEIS], 700, 30, seed=4, threads=3)
        np.testing.assert_array_equal(serial, parallel)

    def test_horizon_scaling(self):
        comparison = horizon_scaling_check(ProcessKind.BM2, 1.5, 4.0, 2000, 50, seed=6, threads=1)
        self.assertEqual(comparison.horizon, 4.0)
        self.assertTrue(comparison.agrees(sigmas=4.0))

    def test_record_fields(self):
        estimate = estimate_small_ball(ProcessKind.BM2, 1.0, 100, 20, seed=9, threads=1)
        record = SmallBallRecordSerializer(estimate).data
        self.assertEqual(
            list(record), ["kind", "epsilon", "p_hat", "ci_low", "ci_high", "n_paths", "steps", "seed"]
        )
        self.assertEqual(record["kind"], "bm2")
        fit = fit_exit_rate(exponential_curve(2.0, 5000), ProcessKind.BM2, seed=9)
        record = RateFitRecordSerializer(fit).data
        self.assertEqual(
            list(record), ["kind", "rate", "stderr", "intercept", "window", "n_points", "seed"]
        )
        self.assertEqual(len(record["window"]), 2)


class ExitTimeSimulationTests(SimpleTestCase):
    def test_bridge_monitored_rates(self):
        for kind, seed in ((ProcessKind.BM1, 11), (ProcessKind.BM2, 12)):
            _, fit = estimate_exit_rate(kind, 8.0, 3000, 100, seed=seed, threads=1)
            self.assertLess(abs(fit.rate - reference_rate(kind)), 4 * fit.stderr, kind)

    def test_refinement_follows_the_same_paths(self):
        coarse = simulate_exit_times(ProcessKind.BM2, 4.0, 400, 50, seed=5, threads=1, substeps=2)
        fine = simulate_exit_times(ProcessKind.BM2, 4.0, 400, 100, seed=5, threads=1)
        other = simulate_exit_times(ProcessKind.BM2, 4.0, 400, 100, seed=6, threads=1)
        self.assertAlmostEqual(coarse.t_max, fine.t_max, delta=1e-12)
        self.assertGreater(np.mean(np.abs(coarse.times - fine.times) < 0.1), 0.7)
        self.assertLess(np.mean(np.abs(other.times - fine.times) < 0.1), 0.5)

    def test_calibrate_refinement_is_coupled(self):
        report = calibrate(ProcessKind.BM1, 8.0, 3000, 50, seed=4, threads=1)
        self.assertEqual(report.steps_per_unit, 50)
        self.assertLess(report.relative_error, 4 * report.fit.stderr / report.reference)
        self.assertLess(report.refinement_shift, 0.05)
        self.assertNotEqual(report.fit, report.refined)

    def test_deterministic(self):
        first = estimate_exit_rate(ProcessKind.AREA, 10.0, 400, 20, seed=3, threads=1, min_exits=10)
        second = estimate_exit_rate(ProcessKind.AREA, 10.0, 400, 20, seed=3, threads=2, min_exits=10)
        np.testing.assert_array_equal(first[0].times, second[0].times)
        self.assertEqual(first[1], second[1])

    def test_calibrate_requires_reference(self):
        with self.assertRaises(ValidationError):
            calibrate(ProcessKind.HEIS, 8.0, 100, 10)

    @tag("slow")
    def test_calibrated_rates(self):
        for kind in (ProcessKind.BM1, ProcessKind.BM2):
            report = calibrate(kind, 8.0, 200_000, 10_000, seed=1)
            self.assertGreaterEqual(report.fit.n_points, 40_000)
            self.assertLess(report.relative_error, 0.05)
            self.assertLess(report.refinement_shift, 0.02)

    @tag("slow")
    def test_heisenberg_rate_bracket(self):
        _, fit = estimate_exit_rate(ProcessKind.HEIS, 8.0, 20_000, 10_000, seed=1)
        self.assertGreaterEqual(fit.rate, 2.80)
        self.assertLessEqual(fit.rate, 4.40)
        bounds = chung_bounds()
        self.assertGreater(fit.rate, 0.9 * bounds.lambda1_2)

    @tag("slow")
    def test_heisenberg_small_ball_matches_exit_tail(self):
        estimate = estimate_small_ball(ProcessKind.HEIS, 1.0, 20_000, 1000, seed=2)
        curve, fit = estimate_exit_rate(ProcessKind.HEIS, 8.0, 20_000, 1000, seed=2)
        modelled = math.exp(fit.intercept - fit.rate)
        self.assertLess(abs(estimate.p_hat - modelled) / modelled, 0.15)
        self.assertLess(abs(estimate.p_hat - curve.survival_at(1.0)), 0.02)

    @tag("slow")
    def test_bm1_small_ball_spot_value(self):
        estimate = estimate_small_ball(ProcessKind.BM1, 0.5, 1_000_000, 1000, seed=7)
        expected = 0.009157
        self.assertAlmostEqual(brownian_small_ball(0.5), expected, delta=1e-6)
        sigma = math.sqrt(expected * (1 - expected) / estimate.n_paths)
        self.assertLess(abs(estimate.p_hat - expected), 3 * sigma)


class IdentityCheckTests(SimpleTestCase):
    def test_scaling_identity(self):
        for epsilon in (1.0, 0.8, 2.0):
            comparison = scaling_identity_check(epsilon, 2000, 50, seed=4, threads=1)
            self.assertIsInstance(comparison, ScalingComparison)
            self.assertTrue(comparison.agrees(sigmas=4.0), comparison)
        saturated = scaling_identity_check(4.0, 2000, 50, seed=4, threads=1)
        self.assertGreater(saturated.direct_p, 0.9)
        self.assertGreater(saturated.transformed_p, 0.9)

    def test_scaling_identity_at_small_radii(self):
        for epsilon in (0.7, 0.9):
            comparison = scaling_identity_check(epsilon, 20_000, 50, seed=9, threads=1)
            self.assertGreater(comparison.direct_p, 0.0, epsilon)
            self.assertGreater(comparison.transformed_p, 0.0, epsilon)
            self.assertTrue(comparison.agrees(sigmas=4.0), comparison)

    @tag("slow")
    def test_ks_battery_over_seeds(self):
        batteries = {
            "scaling": lambda seed: scaling_distribution_check(0.25, 2000, 50, seed=seed, threads=1),
            "timechange": lambda seed: timechange_report(
                timechange_samples(2000, 100, seed=seed, threads=1), seed=seed
            ).ks,
            "increments": lambda seed: increment_report(
                1.0, 1.0, Side.LEFT, 2000, 100, seed=seed, threads=1
            ).norm_ks,
        }
        for name, check in batteries.items():
            passed = sum(check(seed).p_value > 0.01 for seed in range(10))
            self.assertGreaterEqual(passed, 9, name)

    def test_scaling_distribution(self):
        for epsilon in (0.25, 4.0):
            result = scaling_distribution_check(epsilon, 2000, 50, seed=12, threads=1)
            self.assertGreater(result.p_value, 0.001)

    def test_time_change(self):
        samples = timechange_samples(3000, 100, seed=5, threads=1)
        report = timechange_report(samples, seed=5)
        self.assertLess(abs(report.clock_mean.value - 0.25), 4 * report.clock_mean.stderr)
        self.assertLess(abs(report.area_variance.value - 0.25), 4 * report.area_variance.stderr)
        self.assertLess(
            abs(report.timechanged_variance.value - 0.25), 4 * report.timechanged_variance.stderr
        )
        self.assertGreater(report.ks.p_value, 0.001)
        self.assertTrue(np.all(samples.clocks > 0))

    def test_left_increment_is_a_fresh_path(self):
        report = increment_report(1.0, 1.0, Side.LEFT, 2000, 100, seed=6, threads=1)
        self.assertEqual(report.expected_area_variance, 0.25)
        self.assertLess(abs(report.area_variance.value - 0.25), 4 * report.area_variance.stderr)
        self.assertGreater(report.norm_ks.p_value, 0.001)

    def test_right_increment_is_not(self):
        left = increment_report(1.0, 1.0, Side.LEFT, 2000, 100, seed=6, threads=1)
        right = increment_report(1.0, 1.0, Side.RIGHT, 2000, 100, seed=6, threads=1)
        self.assertEqual(right.expected_area_variance, 2.25)
        self.assertLess(abs(right.area_variance.value - 2.25), 4 * right.area_variance.stderr)
        self.assertGreaterEqual(right.area_variance.value / left.area_variance.value, 5.0)

    def test_expected_area_variance(self):
        self.assertEqual(expected_area_variance(Side.LEFT, 3.0, 2.0), 1.0)
        self.assertEqual(expected_area_variance(Side.RIGHT, 3.0, 2.0), 13.0)

    def test_increment_parameters_validated(self):
        with self.assertRaises(ValidationError):
            increment_report(0.0, 1.0, Side.LEFT, 10, 10)
        with self.assertRaises(ValidationError):
            increment_report(1.0, -1.0, Side.RIGHT, 10, 10)

    def test_variance_estimate(self):
        samples = np.random.default_rng(0).normal(0.0, 2.0, size=50_000)
        estimate = variance_estimate(samples)
        self.assertLess(abs(estimate.value - 4.0), 4 * estimate.stderr)


class EstimationCommandTests(SimpleTestCase):
    def run_command(self, *args: str) -> str:
        out = StringIO()
        call_command(*args, stdout=out)
        return out.getvalue()

    def test_smallball_single_epsilon(self):
        data = json.loads(
            self.run_command("smallball", "--kind", "bm1", "--epsilon", "1.5", "--n-paths", "300", "--steps-per-unit", "20")
        )
        self.assertIsNone(data["fit"])
        self.assertEqual(len(data["estimates"]), 1)
        self.assertEqual(data["estimates"][0]["kind"], "bm1")
        self.assertEqual(data["estimates"][0]["steps"], 20)

    def test_smallball_grid_fits_rate(self):
        data = json.loads(
            self.run_command(
                "smallball",
                "--kind",
                "bm2",
                "--epsilon-grid",
                "0.8,1.0,1.2",
                "--n-paths",
                "2000",
                "--steps-per-unit",
                "50",
                "--seed",
                "3",
            )
        )
        self.assertEqual([row["epsilon"] for row in data["estimates"]], [0.8, 1.0, 1.2])
        self.assertEqual(data["fit"]["window"], [0.8, 1.2])
        self.assertGreater(data["fit"]["rate"], 0.0)

    def test_smallball_rejects_bad_epsilon(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_command("smallball", "--epsilon", "-1")
        self.assertEqual(ctx.exception.returncode, 2)
        with self.assertRaises(CommandError) as ctx:
            self.run_command("smallball")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_exitrate_insufficient_tail_data(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_command("exitrate", "--kind", "bm1", "--n-paths", "200", "--steps-per-unit", "20")
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("insufficient tail data", str(ctx.exception))

    def test_exitrate_csv(self):
        text = self.run_command(
            "exitrate", "--kind", "bm2", "--n-paths", "600", "--steps-per-unit", "20", "--format", "csv"
        )
        lines = text.splitlines()
        self.assertEqual(lines[0], "t,survival")
        self.assertGreater(len(lines), 500)

    def test_increments_and_timechange(self):
        data = json.loads(
            self.run_command("increments", "--side", "right", "--n-paths", "200", "--steps-per-unit", "20")
        )
        self.assertEqual(data["side"], "right")
        self.assertEqual(data["expected_area_variance"], 2.25)
        data = json.loads(self.run_command("timechange", "--n-paths", "200", "--steps-per-unit", "20"))
        self.assertEqual(set(data), {"n_samples", "clock_mean", "area_variance", "timechanged_variance", "ks", "seed"})

    def test_scalingcheck(self):
        data = json.loads(
            self.run_command(
                "scalingcheck", "--epsilon", "1.0", "--n-paths", "300", "--steps-per-unit", "20", "--horizon", "2"
            )
        )
        self.assertEqual(data["identity"]["epsilon"], 1.0)
        self.assertEqual(data["horizon"]["horizon"], 2.0)
        self.assertIn("p_value", data["distribution"])

    def test_calibrate(self):
        data = json.loads(
            self.run_command(
                "calibrate", "--process", "bm2", "--n-paths", "600", "--steps-per-unit", "20", "--seed", "7"
            )
        )
        self.assertEqual(data["kind"], "bm2")
        self.assertEqual(data["reference"], lambda1(2))
        self.assertEqual(data["steps_per_unit"], 20)
