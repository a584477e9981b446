import json
import math
from io import StringIO

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings, tag

from core.context import Stream, TraceMode
from heisenberg.simulation import SimConfig, simulate_path
from spectra.bounds import chung_bounds

from .lil import (
    LILTrace,
    band_check,
    default_band,
    default_checkpoints,
    lil_trace,
    lil_traces,
    phi,
    write_trace_csv,
)


def trace_with_terminal(value: float, mode: TraceMode = TraceMode.GROUP) -> LILTrace:
    return LILTrace.from_sups(mode, np.array([100.0]), np.array([value / phi(100.0)]))


class PhiTests(SimpleTestCase):
    def test_values(self):
        self.assertAlmostEqual(phi(math.exp(math.e)), math.exp(-math.e / 2), places=14)
        self.assertAlmostEqual(phi(math.exp(math.e)), 0.256882, delta=5e-6)
        self.assertAlmostEqual(phi(1e6), 0.00162043, delta=1e-8)

    def test_domain(self):
        for t in (2.0, math.e, 0.0, -5.0, math.inf, math.nan):
            with self.assertRaises(ValidationError):
                phi(t)

    def test_decreasing(self):
        grid = np.geomspace(math.exp(math.e), 1e12, 500)
        values = [phi(float(t)) for t in grid]
        self.assertTrue(all(a > b for a, b in zip(values, values[1:], strict=False)))


class CheckpointTests(SimpleTestCase):
    def test_default_grid(self):
        grid = default_checkpoints()
        self.assertEqual(grid[0], 100.0)
        self.assertEqual(grid[-1], 1e6)
        self.assertEqual(len(grid), 52)
        self.assertTrue(np.all(np.diff(grid) > 0))
        np.testing.assert_allclose(grid[1:-1] / grid[:-2], 1.2, rtol=1e-12)

    def test_exact_power_is_not_repeated(self):
        grid = default_checkpoints(100.0, 400.0, 2.0)
        np.testing.assert_array_equal(grid, [100.0, 200.0, 400.0])

    def test_invalid_grids(self):
        for args in ((2.0, 100.0, 1.2), (100.0, 50.0, 1.2), (100.0, 1000.0, 1.0)):
            with self.assertRaises(ValidationError):
                default_checkpoints(*args)


class TraceTests(SimpleTestCase):
    def setUp(self):
        self.cfg = SimConfig.at_density(3, 1000.0, 10, stream=Stream.LIL)
        self.checkpoints = default_checkpoints(100.0, 1000.0, 1.2)

    def test_running_min_invariants(self):
        for mode in TraceMode:
            trace = lil_trace(self.cfg, self.checkpoints, mode)
            self.assertTrue(np.all(np.diff(trace.running_min) <= 0))
            self.assertTrue(np.all(trace.stat_values >= trace.running_min))
            np.testing.assert_array_equal(trace.running_min, np.minimum.accumulate(trace.stat_values))
            self.assertEqual(trace.terminal_min, trace.running_min[-1])

    def test_deterministic(self):
        first = lil_trace(self.cfg, self.checkpoints, TraceMode.GROUP)
        second = lil_trace(self.cfg, self.checkpoints, TraceMode.GROUP)
        np.testing.assert_array_equal(first.stat_values, second.stat_values)

    def test_sup_uses_every_grid_step(self):
        trace = lil_trace(self.cfg, self.checkpoints, TraceMode.GROUP)
        path = simulate_path(self.cfg)
        indices = np.rint(self.checkpoints * 10).astype(int)
        expected = trace.phi_values * path.sup_norm[indices]
        np.testing.assert_allclose(trace.stat_values, expected, rtol=1e-9)

    def test_area_mode_uses_squared_phi(self):
        trace = lil_trace(self.cfg, self.checkpoints, TraceMode.AREA)
        path = simulate_path(self.cfg)
        indices = np.rint(self.checkpoints * 10).astype(int)
        a_star = np.maximum.accumulate(np.abs(path.area))[indices]
        np.testing.assert_allclose(trace.stat_values, trace.phi_values**2 * a_star, rtol=1e-9)

    def test_chunk_size_does_not_change_trace(self):
        reference = lil_trace(self.cfg, self.checkpoints, TraceMode.GROUP)
        with override_settings(HEISLAB={**settings.HEISLAB, "CHUNK_STEPS": 7}):
            chunked = lil_trace(self.cfg, self.checkpoints, TraceMode.GROUP)
        np.testing.assert_allclose(reference.stat_values, chunked.stat_values, rtol=1e-9)

    def test_coarser_checkpoints_dominate(self):
        fine = lil_trace(self.cfg, self.checkpoints, TraceMode.GROUP)
        coarse = lil_trace(self.cfg, self.checkpoints[::3], TraceMode.GROUP)
        np.testing.assert_array_equal(coarse.stat_values, fine.stat_values[::3])
        self.assertTrue(np.all(coarse.running_min >= fine.running_min[::3]))

    def test_invalid_checkpoints(self):
        for checkpoints in ([2.0, 10.0], [200.0, 100.0], [100.0, 2000.0], []):
            with self.assertRaises(ValidationError):
                lil_trace(self.cfg, np.array(checkpoints), TraceMode.GROUP)

    def test_batches(self):
        checkpoints = default_checkpoints(100.0, 300.0, 1.5)
        serial = lil_traces(4, TraceMode.GROUP, checkpoints, 10, seed=5, threads=1)
        parallel = lil_traces(4, TraceMode.GROUP, checkpoints, 10, seed=5, threads=2)
        self.assertEqual([trace.path_index for trace in serial], [0, 1, 2, 3])
        for a, b in zip(serial, parallel, strict=True):
            np.testing.assert_array_equal(a.stat_values, b.stat_values)
        self.assertNotEqual(serial[0].terminal_min, serial[1].terminal_min)

    def test_trace_csv(self):
        trace = lil_trace(self.cfg, self.checkpoints, TraceMode.GROUP)
        lines = write_trace_csv(trace).splitlines()
        self.assertEqual(lines[0], "t,phi,stat,running_min")
        self.assertEqual(len(lines), len(self.checkpoints) + 1)
        strided = write_trace_csv(trace, stride=5).splitlines()
        self.assertEqual(float(strided[-1].split(",")[0]), 1000.0)


class BandTests(SimpleTestCase):
    def test_default_bands(self):
        bounds = chung_bounds()
        lo, hi = default_band(TraceMode.GROUP)
        self.assertAlmostEqual(lo, 0.5 * bounds.c_lower)
        self.assertAlmostEqual(hi, 1.5 * bounds.c_upper)
        self.assertAlmostEqual(lo, 0.85, delta=0.002)
        self.assertAlmostEqual(hi, 3.11, delta=0.002)
        lo, hi = default_band(TraceMode.AREA)
        self.assertAlmostEqual(lo, 0.3927, delta=1e-4)
        self.assertAlmostEqual(hi, 1.5708, delta=1e-4)

    def test_all_inside(self):
        summary = band_check([trace_with_terminal(v) for v in (1.0, 1.5, 2.0)], (0.85, 3.11))
        self.assertEqual(summary.fraction, 1.0)
        self.assertEqual(summary.ci[1], 1.0)
        self.assertEqual(summary.n_seeds, 3)

    def test_partial_and_empty_bands(self):
        traces = [trace_with_terminal(v) for v in (0.5, 1.0, 4.0, 2.0)]
        self.assertEqual(band_check(traces, (0.85, 3.11)).fraction, 0.5)
        empty = band_check(traces, (3.0, 1.0))
        self.assertEqual(empty.fraction, 0.0)
        self.assertEqual(empty.ci[0], 0.0)

    def test_rejects_bad_input(self):
        with self.assertRaises(ValidationError):
            band_check([], (0.0, 1.0))
        mixed = [trace_with_terminal(1.0), trace_with_terminal(1.0, TraceMode.AREA)]
        with self.assertRaises(ValidationError):
            band_check(mixed, (0.0, 2.0))
        with self.assertRaises(ValidationError):
            band_check([trace_with_terminal(1.0)], (math.nan, 2.0))

    @tag("slow")
    def test_group_band_at_full_scale(self):
        traces = lil_traces(100, TraceMode.GROUP, default_checkpoints(), 10, seed=0)
        self.assertGreaterEqual(band_check(traces, default_band(TraceMode.GROUP)).fraction, 0.9)

    @tag("slow")
    def test_area_band_at_full_scale(self):
        traces = lil_traces(100, TraceMode.AREA, default_checkpoints(), 10, seed=0)
        self.assertGreaterEqual(band_check(traces, default_band(TraceMode.AREA)).fraction, 0.9)


class ChungCommandTests(SimpleTestCase):
    def run_command(self, *args: str) -> str:
        out = StringIO()
        call_command("chung", *args, stdout=out)
        return out.getvalue()

    def test_json_summary(self):
        data = json.loads(
            self.run_command("--n-seeds", "3", "--t-max", "500", "--steps-per-unit", "5", "--threads", "1")
        )
        self.assertEqual(list(data), ["mode", "band", "fraction", "ci", "n_seeds"])
        self.assertEqual(data["mode"], "group")
        self.assertEqual(data["n_seeds"], 3)
        self.assertEqual(len(data["band"]), 2)

    def test_explicit_band(self):
        data = json.loads(
            self.run_command(
                "--mode", "area", "--n-seeds", "2", "--t-max", "300", "--steps-per-unit", "5", "--band", "5,1"
            )
        )
        self.assertEqual(data["band"], [5.0, 1.0])
        self.assertEqual(data["fraction"], 0.0)

    def test_csv_trace(self):
        text = self.run_command("--format", "csv", "--t-max", "300", "--steps-per-unit", "5", "--path-index", "2")
        lines = text.splitlines()
        self.assertEqual(lines[0], "t,phi,stat,running_min")
        self.assertEqual(len(lines), len(default_checkpoints(100.0, 300.0)) + 1)

    def test_bad_grid_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_command("--t-min", "2", "--n-seeds", "1")
        self.assertEqual(ctx.exception.returncode, 2)
