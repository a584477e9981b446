import math
from io import StringIO

import numpy as np
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.test import SimpleTestCase, tag

from core.context import Side, Stream
from core.records import render_json
from estimation.statistics import mean_estimate, variance_estimate

from .group import (
    IDENTITY,
    GroupElement,
    SymplecticValue,
    TangentVector,
    dilate,
    dilate_points,
    distance,
    frame_at,
    homogeneous_norm,
    homogeneous_norms,
    inv,
    left_translate,
    lie_bracket,
    maurer_cartan,
    mul,
    multiply_points,
    right_translate,
    translation_differential,
)
from .paths import (
    PolygonalPath,
    horizontal_length,
    horizontality_defect,
    is_horizontal,
    polygonal_lift,
    segment_defects,
)
from .properties import run_property_suite
from .simulation import (
    HeisenbergPath,
    SimConfig,
    area_increments,
    midpoint_area_increments,
    running_sup_norm,
    scaled_path_samples,
    simulate_path,
    terminal_points,
    write_path_csv,
)


def assert_element_equal(case: SimpleTestCase, g: GroupElement, expected: tuple[float, float, float]) -> None:
    for actual, wanted in zip((g.x, g.y, g.z), expected, strict=True):
        case.assertAlmostEqual(actual, wanted, places=12)


class GroupArithmeticTests(SimpleTestCase):
    def test_mul_examples(self):
        assert_element_equal(self, mul(GroupElement(1, 0, 0), GroupElement(0, 1, 0)), (1, 1, 0.5))
        assert_element_equal(self, mul(GroupElement(2, -3, 4), IDENTITY), (2, -3, 4))
        assert_element_equal(
            self, GroupElement(0.3, -0.7, 0.2) * GroupElement(-0.3, 0.7, -0.2), (0, 0, 0)
        )

    def test_inv_examples(self):
        assert_element_equal(self, inv(GroupElement(1, 2, 3)), (-1, -2, -3))
        assert_element_equal(self, inv(IDENTITY), (0, 0, 0))
        assert_element_equal(self, inv(GroupElement(-0.5, 0.25, 1.0)), (0.5, -0.25, -1.0))

    def test_non_finite_coordinates_rejected(self):
        with self.assertRaises(ValidationError):
            GroupElement(math.nan, 0.0, 0.0)
        with self.assertRaises(ValidationError):
            GroupElement(0.0, 0.0, math.inf)

    def test_symplectic_value(self):
        self.assertEqual(float(SymplecticValue.between((1, 0), (0, 1))), 1.0)
        self.assertIsInstance(float(SymplecticValue.between((1, 0), (0, 1))), float)
        self.assertEqual(float(SymplecticValue.between((0, 1), (1, 0))), -1.0)
        self.assertEqual(float(SymplecticValue.between((2, 3), (2, 3))), 0.0)

    def test_translations(self):
        k = GroupElement(1, 2, 3)
        g = GroupElement(-1, 0.5, 2)
        assert_element_equal(self, left_translate(k, k), (0, 0, 0))
        left = left_translate(k, g)
        expected = mul(inv(k), g)
        assert_element_equal(self, left, (expected.x, expected.y, expected.z))
        right = right_translate(k, g)
        expected = mul(g, k)
        assert_element_equal(self, right, (expected.x, expected.y, expected.z))

    def test_homogeneous_norm_examples(self):
        self.assertAlmostEqual(homogeneous_norm(GroupElement(1, 1, 1)), 5**0.25, places=12)
        self.assertAlmostEqual(homogeneous_norm(GroupElement(1, 1, 1)), 1.495349, places=6)
        self.assertEqual(homogeneous_norm(IDENTITY), 0.0)
        self.assertAlmostEqual(homogeneous_norm(GroupElement(0, 0, 1)), 1.0, places=15)

    def test_homogeneous_norm_is_stable_for_huge_coordinates(self):
        g = GroupElement(1e200, 0.0, 0.0)
        self.assertAlmostEqual(homogeneous_norm(g) / 1e200, 1.0, places=12)
        self.assertTrue(math.isfinite(homogeneous_norm(GroupElement(0.0, 0.0, 1e300))))

    def test_distance_is_left_invariant_and_zero_on_diagonal(self):
        g1, g2, k = GroupElement(1, -2, 0.5), GroupElement(0.3, 0.4, -1), GroupElement(5, 1, 2)
        self.assertEqual(distance(g1, g1), 0.0)
        self.assertAlmostEqual(distance(mul(k, g1), mul(k, g2)), distance(g1, g2), places=12)
        self.assertLessEqual(distance(g1, g2), homogeneous_norm(g1) + homogeneous_norm(g2))

    def test_dilate_examples(self):
        assert_element_equal(self, dilate(2, GroupElement(1, 0, 1)), (2, 0, 4))
        g = GroupElement(0.3, -0.2, 0.7)
        assert_element_equal(self, dilate(1, g), (g.x, g.y, g.z))
        self.assertAlmostEqual(homogeneous_norm(dilate(3, GroupElement(1, 1, 1))), 4.486046, delta=1e-6)

    def test_dilate_rejects_nonpositive_factor(self):
        for lam in (0.0, -1.0, math.nan):
            with self.assertRaises(ValidationError):
                dilate(lam, IDENTITY)
            with self.assertRaises(ValidationError):
                dilate_points(lam, np.zeros(3))

    def test_vectorized_forms_match_scalar(self):
        rng = np.random.default_rng(3)
        g, h = rng.normal(size=(2, 50, 3))
        products = multiply_points(g, h)
        for i in range(50):
            expected = mul(GroupElement.from_array(g[i]), GroupElement.from_array(h[i]))
            np.testing.assert_allclose(products[i], expected.as_array(), rtol=0, atol=1e-13)
            self.assertAlmostEqual(
                homogeneous_norms(g[i]), homogeneous_norm(GroupElement.from_array(g[i])), places=13
            )


class TangentTests(SimpleTestCase):
    def test_translation_differential_examples(self):
        v = TangentVector(IDENTITY, 0, 1, 0)
        pushed = translation_differential(GroupElement(1, 0, 7), v, Side.LEFT)
        self.assertEqual(pushed.components, (0, 1, -0.5))

        vertical = TangentVector(GroupElement(2, 2, 2), 0, 0, 1)
        for side in Side:
            pushed = translation_differential(GroupElement(3, -4, 1), vertical, side)
            self.assertEqual(pushed.components, (0, 0, 1))

        v = TangentVector(GroupElement(1, 2, 3), 0.5, -0.25, 2.0)
        pushed = translation_differential(IDENTITY, v, Side.RIGHT)
        self.assertEqual(pushed.components, v.components)
        assert_element_equal(self, pushed.base, (1, 2, 3))

    def test_translated_base_points(self):
        k = GroupElement(1, 0, 0)
        g = GroupElement(0, 1, 0)
        v = TangentVector(g, 1, 0, 0)
        left = translation_differential(k, v, Side.LEFT)
        right = translation_differential(k, v, Side.RIGHT)
        assert_element_equal(self, left.base, (-1, 1, -0.5))
        assert_element_equal(self, right.base, (1, 1, -0.5))

    def test_maurer_cartan_lands_at_identity(self):
        gamma = GroupElement(1, 2, 0.5)
        velocity = TangentVector(gamma, 0.3, -0.4, 1.0)
        pulled = maurer_cartan(gamma, velocity)
        assert_element_equal(self, pulled.base, (0, 0, 0))
        expected_v3 = 1.0 - 0.5 * (1 * -0.4 - 0.3 * 2)
        self.assertAlmostEqual(pulled.v3, expected_v3, places=14)
        self.assertEqual(pulled.horizontal, (0.3, -0.4))

    def test_frame_examples(self):
        x, y, z = frame_at(IDENTITY)
        self.assertEqual((x.components, y.components, z.components), ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
        x, y, z = frame_at(GroupElement(1, 2, 0))
        self.assertEqual(x.components, (1, 0, -1))
        self.assertEqual(y.components, (0, 1, 0.5))
        self.assertEqual(z.components, (0, 0, 1))
        shifted = frame_at(GroupElement(0, 0, 5))
        self.assertEqual(
            [v.components for v in shifted], [v.components for v in frame_at(IDENTITY)]
        )

    def test_frame_is_left_invariant(self):
        p = GroupElement(1.5, -0.5, 2.0)
        for at_e, at_p in zip(frame_at(IDENTITY), frame_at(p), strict=True):
            pulled = translation_differential(p, at_p, Side.LEFT)
            for a, b in zip(pulled.components, at_e.components, strict=True):
                self.assertAlmostEqual(a, b, places=14)

    def test_lie_bracket(self):
        self.assertEqual(lie_bracket((1, 0, 0), (0, 1, 0)), (0.0, 0.0, 1.0))
        self.assertEqual(lie_bracket((0, 1, 0), (1, 0, 0)), (0.0, 0.0, -1.0))
        self.assertEqual(lie_bracket((1, 0, 0), (0, 0, 1)), (0.0, 0.0, 0.0))


class PolygonalPathTests(SimpleTestCase):
    def test_lift_encloses_signed_area(self):
        square = polygonal_lift([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
        self.assertAlmostEqual(square.vertices[-1, 2], 1.0, places=15)
        triangle = polygonal_lift([(0, 0), (1, 0), (0, 1), (0, 0)])
        self.assertAlmostEqual(triangle.vertices[-1, 2], 0.5, places=15)
        segment = polygonal_lift([(0, 0), (3.0, -2.0)])
        self.assertEqual(segment.vertices[-1, 2], 0.0)

    def test_lift_is_horizontal(self):
        rng = np.random.default_rng(11)
        path = polygonal_lift(np.cumsum(rng.normal(size=(500, 2)), axis=0))
        self.assertLessEqual(horizontality_defect(path), 1e-12 * path.scale)
        self.assertTrue(is_horizontal(path))

    def test_defect_examples(self):
        vertical = PolygonalPath(np.array([[0, 0, 0], [0, 0, 1]]), np.array([0.0, 1.0]))
        self.assertEqual(horizontality_defect(vertical), 1.0)
        self.assertFalse(is_horizontal(vertical))
        line = PolygonalPath(np.array([[0, 0, 0], [1, 1, 0]]), np.array([0.0, 1.0]))
        self.assertEqual(horizontality_defect(line), 0.0)

    def test_midpoint_defects_equal_left_point(self):
        rng = np.random.default_rng(5)
        path = PolygonalPath(rng.normal(size=(100, 3)), np.arange(100.0))
        np.testing.assert_allclose(
            segment_defects(path), segment_defects(path, midpoint=True), rtol=0, atol=1e-12
        )

    def test_invalid_paths_rejected(self):
        with self.assertRaises(ValidationError):
            horizontality_defect(PolygonalPath(np.zeros((1, 3)), np.zeros(1)))
        with self.assertRaises(ValidationError):
            PolygonalPath(np.zeros((2, 3)), np.array([1.0, 1.0]))
        with self.assertRaises(ValidationError):
            PolygonalPath(np.zeros((0, 3)), np.zeros(0))
        with self.assertRaises(ValidationError):
            polygonal_lift([])

    def test_horizontal_length(self):
        square = polygonal_lift([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])
        self.assertAlmostEqual(horizontal_length(square), 4.0, places=14)
        vertical = PolygonalPath(np.array([[0, 0, 0], [0, 0, 1]]), np.array([0.0, 1.0]))
        self.assertEqual(horizontal_length(vertical), math.inf)
        self.assertEqual(horizontal_length(polygonal_lift([(1, 1)])), 0.0)


class SimulationTests(SimpleTestCase):
    def test_zero_steps_gives_identity_path(self):
        path = simulate_path(SimConfig(seed=1, steps=0))
        self.assertEqual(len(path), 1)
        np.testing.assert_array_equal(path.points, np.zeros((1, 3)))
        stats = path.stats()
        self.assertEqual((stats.g_star, stats.b_star, stats.a_star), (0.0, 0.0, 0.0))

    def test_same_config_is_bit_identical(self):
        cfg = SimConfig(seed=42, steps=1000, path_index=3)
        first, second = simulate_path(cfg), simulate_path(cfg)
        np.testing.assert_array_equal(first.points, second.points)
        other = simulate_path(SimConfig(seed=42, steps=1000, path_index=4))
        self.assertFalse(np.array_equal(first.points, other.points))

    def test_path_invariants(self):
        path = simulate_path(SimConfig(seed=7, horizon=2.0, steps=5000))
        np.testing.assert_array_equal(path.points[0], np.zeros(3))
        self.assertEqual(path.times[0], 0.0)
        self.assertEqual(path.times[-1], 2.0)
        self.assertTrue(np.all(np.diff(path.sup_norm) >= 0))
        np.testing.assert_array_equal(
            path.sup_norm, np.maximum.accumulate(homogeneous_norms(path.points))
        )
        scale = max(1.0, float(np.max(np.abs(path.area))))
        self.assertLessEqual(horizontality_defect(path.as_polygonal()), 1e-12 * scale)

    def test_stats_bound(self):
        stats = simulate_path(SimConfig(seed=9, steps=2000)).stats()
        self.assertLessEqual(stats.g_star**4, stats.b_star**4 + stats.a_star**2 + 1e-12)
        self.assertGreaterEqual(stats.g_star, stats.b_star)

    def test_running_sup_norm_examples(self):
        path = HeisenbergPath(
            times=np.array([0.0, 1.0]),
            points=np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
            sup_norm=np.array([0.0, 1.0]),
        )
        stats = running_sup_norm(path)
        self.assertEqual((stats.g_star, stats.b_star, stats.a_star), (1.0, 0.0, 1.0))
        self.assertEqual(stats.w_final, (0.0, 0.0))

    def test_midpoint_area_rule_equals_left_point(self):
        rng = np.random.default_rng(2)
        w, dw = rng.normal(size=(2, 1000, 2))
        np.testing.assert_allclose(
            midpoint_area_increments(w, dw), area_increments(w, dw), rtol=0, atol=1e-14
        )

    def test_at_density(self):
        cfg = SimConfig.at_density(0, 2.5, 100)
        self.assertEqual(cfg.steps, 250)
        self.assertAlmostEqual(cfg.step_size, 0.01, places=15)
        with self.assertRaises(ValidationError):
            SimConfig(seed=-1)
        with self.assertRaises(ValidationError):
            SimConfig(seed=0, horizon=0.0)

    def test_terminal_moments(self):
        points = terminal_points(2024, Stream.PATHS, 1.0, 200, 4000, threads=1)
        area = variance_estimate(points[:, 2])
        self.assertLess(abs(area.value - 0.25), 4 * area.stderr)
        mean_area = mean_estimate(points[:, 2])
        self.assertLess(abs(mean_area.value), 4 * mean_area.stderr)
        radius = mean_estimate(np.sum(points[:, :2] ** 2, axis=1))
        self.assertLess(abs(radius.value - 2.0), 4 * radius.stderr)

    def test_results_do_not_depend_on_worker_count(self):
        serial = terminal_points(5, Stream.PATHS, 1.0, 50, 600, threads=1)
        parallel = terminal_points(5, Stream.PATHS, 1.0, 50, 600, threads=3)
        np.testing.assert_array_equal(serial, parallel)

    def test_scaled_samples_at_unit_epsilon_share_a_law(self):
        samples = scaled_path_samples(SimConfig(seed=3, steps=50), 1.0, 200, threads=1)
        self.assertEqual(samples.short.shape, (200,))
        self.assertEqual(samples.long.shape, (200,))
        self.assertTrue(np.all(samples.short >= 0))

    def test_path_csv(self):
        path = simulate_path(SimConfig(seed=1, steps=10))
        lines = write_path_csv(path, stride=4).splitlines()
        self.assertEqual(lines[0], "t,x,y,z,sup_norm")
        # Rows 0, 4, 8 and the final row 10.
        self.assertEqual(len(lines), 5)
        self.assertTrue(lines[-1].startswith("1,"))


class PropertySuiteTests(SimpleTestCase):
    def test_all_properties_pass(self):
        results = run_property_suite(seed=0, cases=2000, n_paths=3, steps=500)
        self.assertEqual(len(results), 8)
        failing = [result.name for result in results if not result.passed]
        self.assertEqual(failing, [])

    @tag("slow")
    def test_full_property_suite(self):
        results = run_property_suite(seed=1)
        self.assertTrue(all(result.passed for result in results))


class SimulateCommandTests(SimpleTestCase):
    def test_csv_dump(self):
        out = StringIO()
        call_command("simulate", "--seed", "4", "--steps-per-unit", "20", "--stride", "5", stdout=out)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], "t,x,y,z,sup_norm")
        self.assertEqual(len(lines), 1 + 5)

    def test_json_summary_is_reproducible(self):
        outputs = []
        for _ in range(2):
            out = StringIO()
            call_command(
                "simulate", "--seed", "4", "--steps-per-unit", "100", "--format", "json", stdout=out
            )
            outputs.append(out.getvalue())
        self.assertEqual(outputs[0], outputs[1])
        self.assertIn('"g_star"', outputs[0])
        self.assertTrue(outputs[0].endswith("}\n"))
        self.assertEqual(render_json({"a": 1}), '{\n  "a": 1\n}\n')
