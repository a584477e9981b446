"""Tests for the shared plumbing: substreams, the worker pool, records, the run archive."""

import json
import math
from io import StringIO
from unittest.mock import patch

import numpy as np
from django.core.cache import cache
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from django.urls import reverse
from rest_framework import status
from rest_framework.request import Request
from rest_framework.test import APIRequestFactory, APITestCase

from heisenberg.properties import PropertyResult

from .cache import CacheKeyGenerator, CacheManager, CacheParamBuilder
from .context import Stream
from .models import ExperimentRun
from .parallel import block_ranges, map_blocks
from .records import format_cell, render_csv, render_json, round_significant, to_plain
from .rng import bridge_substream, gaussian_increments, substream
from .validators import SEED_MAX, ParameterValidator


def squares_block(start: int, stop: int) -> np.ndarray:
    return np.arange(start, stop, dtype=float) ** 2


def noise_block(seed: int, start: int, stop: int) -> np.ndarray:
    return np.array([substream(seed, Stream.PATHS, index).standard_normal() for index in range(start, stop)])


class SubstreamTests(SimpleTestCase):
    def test_same_triple_same_draws(self):
        a = substream(7, Stream.EXIT, 3).standard_normal(5)
        b = substream(7, Stream.EXIT, 3).standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_streams_and_indices_are_distinct(self):
        base = substream(7, Stream.EXIT, 3).standard_normal(5)
        for other in (substream(7, Stream.EXIT, 4), substream(7, Stream.LIL, 3), substream(8, Stream.EXIT, 3)):
            self.assertFalse(np.array_equal(base, other.standard_normal(5)))

    def test_full_seed_range(self):
        substream(0, Stream.PATHS, 0)
        substream(SEED_MAX, Stream.PATHS, 0)
        for seed in (-1, SEED_MAX + 1):
            with self.assertRaises(ValidationError):
                substream(seed, Stream.PATHS, 0)

    def test_increment_scale(self):
        increments = gaussian_increments(substream(1, Stream.PATHS, 0), 200_000, 0.25)
        self.assertEqual(increments.shape, (200_000, 2))
        self.assertAlmostEqual(float(np.var(increments)), 0.25, delta=0.005)

    def test_bridge_child_is_deterministic_and_distinct(self):
        a = bridge_substream(7, Stream.EXIT, 3).random(5)
        np.testing.assert_array_equal(a, bridge_substream(7, Stream.EXIT, 3).random(5))
        self.assertFalse(np.array_equal(a, substream(7, Stream.EXIT, 3).random(5)))
        self.assertFalse(np.array_equal(a, bridge_substream(7, Stream.EXIT, 4).random(5)))

    def test_chunked_draws_match_one_draw(self):
        rng = substream(2, Stream.EXIT, 0)
        chunked = np.vstack([gaussian_increments(rng, 3, 0.5), gaussian_increments(rng, 5, 0.5)])
        whole = gaussian_increments(substream(2, Stream.EXIT, 0), 8, 0.5)
        np.testing.assert_array_equal(chunked, whole)


class ParallelTests(SimpleTestCase):
    def test_block_ranges(self):
        self.assertEqual(block_ranges(5, 2), [(0, 2), (2, 4), (4, 5)])
        self.assertEqual(block_ranges(0, 3), [])

    def test_order_is_preserved(self):
        np.testing.assert_array_equal(map_blocks(squares_block, 10, threads=1, block_size=3), np.arange(10.0) ** 2)

    def test_thread_count_does_not_change_result(self):
        from functools import partial  # noqa: PLC0415

        block = partial(noise_block, 11)
        serial = map_blocks(block, 40, threads=1, block_size=4)
        parallel = map_blocks(block, 40, threads=3, block_size=4)
        np.testing.assert_array_equal(serial, parallel)

    def test_empty(self):
        self.assertEqual(map_blocks(squares_block, 0, threads=1).size, 0)


class RecordTests(SimpleTestCase):
    def test_json_is_repr_exact(self):
        text = render_json({"a": 0.1, "b": 1 / 3, "c": [1, 2]})
        self.assertTrue(text.endswith("\n"))
        data = json.loads(text)
        self.assertEqual(data["b"], 1 / 3)
        self.assertEqual(list(data), ["a", "b", "c"])

    def test_plain_conversion(self):
        self.assertEqual(
            to_plain({"x": (np.float64(1.5), np.int64(2)), "y": np.array([1.0]), "z": math.inf}),
            {"x": [1.5, 2], "y": [1.0], "z": None},
        )

    def test_csv_cells(self):
        self.assertEqual(format_cell(0.1), "0.10000000000000001")
        self.assertEqual(format_cell(3), "3")
        self.assertEqual(format_cell(np.float64(2.0)), "2")
        self.assertEqual(render_csv(("t", "v"), [(1, 0.5)]), "t,v\n1,0.5\n")

    def test_round_significant(self):
        self.assertEqual(round_significant(2.0727381234567891, 15), 2.07273812345679)
        self.assertEqual(round_significant(0.0, 15), 0.0)
        self.assertTrue(math.isnan(round_significant(math.nan, 15)))


class ValidatorTests(SimpleTestCase):
    def test_positive(self):
        ParameterValidator.validate_positive("epsilon", 0.5)
        for value in (0.0, -1.0, math.nan, math.inf, "1"):
            with self.assertRaises(ValidationError):
                ParameterValidator.validate_positive("epsilon", value)

    def test_count(self):
        ParameterValidator.validate_count("n_paths", 1)
        for value in (0, 1.5, True):
            with self.assertRaises(ValidationError):
                ParameterValidator.validate_count("n_paths", value)

    def test_numpy_scalars_are_accepted(self):
        ParameterValidator.validate_positive("epsilon", np.float64(0.5))
        ParameterValidator.validate_positive("epsilon", np.int64(2))
        ParameterValidator.validate_count("n_paths", np.int64(3))
        ParameterValidator.validate_seed(np.uint64(SEED_MAX))
        with self.assertRaises(ValidationError):
            ParameterValidator.validate_count("n_paths", np.float64(3.0))
        with self.assertRaises(ValidationError):
            ParameterValidator.validate_positive("epsilon", np.float64(-0.5))
        np.testing.assert_array_equal(
            substream(np.uint64(7), Stream.EXIT, np.int64(3)).standard_normal(3),
            substream(7, Stream.EXIT, 3).standard_normal(3),
        )

    def test_window(self):
        ParameterValidator.validate_window("window", (0.02, 0.3))
        for window in ((0.3, 0.02), (0.1,), (0.1, math.nan)):
            with self.assertRaises(ValidationError):
                ParameterValidator.validate_window("window", window)


class CacheKeyTests(SimpleTestCase):
    def test_parameter_order_is_irrelevant(self):
        key1 = CacheKeyGenerator.generate_key("core", "runs", "list", page="2", command="bounds")
        key2 = CacheKeyGenerator.generate_key("core", "runs", "list", command="bounds", page="2")
        self.assertEqual(key1, key2)
        self.assertTrue(key1.startswith("core:runs:list:"))

    def test_keys_without_parameters(self):
        self.assertEqual(CacheKeyGenerator.generate_key("spectra", "bounds", "retrieve"), "spectra:bounds:retrieve")

    def test_invalidation_patterns(self):
        self.assertEqual(CacheKeyGenerator.generate_invalidation_keys("core", "runs"), ["core:runs:list:*"])

    def test_locmem_invalidation(self):
        cache.clear()
        CacheManager.set_cached("core:runs:list:abc", [1])
        CacheManager.set_cached("spectra:bounds:retrieve", [2])
        CacheManager.invalidate_cache("core:runs:list:*")
        self.assertIsNone(CacheManager.get_cached("core:runs:list:abc"))
        self.assertEqual(CacheManager.get_cached("spectra:bounds:retrieve"), [2])


class ExperimentRunModelTests(TestCase):
    def test_str_and_ordering(self):
        first = ExperimentRun.objects.create(command="bounds", seed="0")
        second = ExperimentRun.objects.create(command="smallball", seed=str(SEED_MAX))
        self.assertEqual(str(second), f"smallball (seed {SEED_MAX})")
        self.assertEqual(list(ExperimentRun.objects.all()), [second, first])
        self.assertEqual(first.parameters, {})


class RecordFlagTests(TestCase):
    def test_bounds_record(self):
        call_command("bounds", "--record", stdout=StringIO())
        run = ExperimentRun.objects.get()
        self.assertEqual(run.command, "bounds")
        self.assertEqual(run.seed, "0")
        self.assertEqual(run.parameters, {})
        self.assertIn("c_lower", run.result)

    def test_parameters_and_large_seed(self):
        out = StringIO()
        call_command(
            "smallball",
            "--kind",
            "bm1",
            "--epsilon",
            "1.5",
            "--n-paths",
            "50",
            "--steps-per-unit",
            "10",
            "--seed",
            str(SEED_MAX),
            "--record",
            stdout=out,
        )
        run = ExperimentRun.objects.get()
        self.assertEqual(run.seed, str(SEED_MAX))
        self.assertEqual(run.parameters["kind"], "bm1")
        self.assertEqual(run.parameters["n_paths"], 50)
        self.assertNotIn("record", run.parameters)
        self.assertEqual(run.result, json.loads(out.getvalue()))

    def test_failed_run_is_not_recorded(self):
        with self.assertRaises(CommandError):
            call_command("smallball", "--epsilon", "-1", "--record", stdout=StringIO())
        self.assertFalse(ExperimentRun.objects.exists())


class CommandPlumbingTests(SimpleTestCase):
    def test_bad_seed_and_threads(self):
        for args in (("--seed", "-1"), ("--threads", "0")):
            with self.assertRaises(CommandError) as ctx:
                call_command("bounds", *args, stdout=StringIO())
            self.assertEqual(ctx.exception.returncode, 2)

    def test_parser_rejection_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("bounds", "--no-such-flag", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn("--no-such-flag", str(ctx.exception))

    def test_out_file(self):
        import tempfile  # noqa: PLC0415
        from pathlib import Path  # noqa: PLC0415

        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "bounds.json"
            out = StringIO()
            call_command("bounds", "--out", str(target), stdout=out)
            self.assertEqual(out.getvalue(), "")
            self.assertIn("c_upper", json.loads(target.read_text(encoding="utf-8")))


class LabCheckCommandTests(SimpleTestCase):
    def test_small_suite_passes(self):
        out = StringIO()
        call_command("labcheck", "--cases", "500", "--n-paths", "1", "--steps", "100", stdout=out)
        results = json.loads(out.getvalue())
        self.assertEqual(len(results), 8)
        self.assertTrue(all(result["passed"] for result in results))
        self.assertEqual(list(results[0]), ["name", "cases", "failures", "worst", "tolerance", "passed"])

    def test_failure_exits_with_one(self):
        failing = [PropertyResult("associativity", 10, 1, 1.0, 1e-12)]
        out = StringIO()
        with (
            patch("core.management.commands.labcheck.run_property_suite", return_value=failing),
            self.assertRaises(CommandError) as ctx,
        ):
            call_command("labcheck", stdout=out)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("associativity", str(ctx.exception))
        self.assertFalse(json.loads(out.getvalue())[0]["passed"])

    def test_invalid_case_count(self):
        with self.assertRaises(CommandError) as ctx:
            call_command("labcheck", "--cases", "0", stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)


class ExperimentRunApiTests(APITestCase):
    def setUp(self):
        cache.clear()
        self.run = ExperimentRun.objects.create(
            command="bounds", seed="0", parameters={}, result={"c_lower": 1.7}
        )

    def test_list_and_retrieve(self):
        response = self.client.get(reverse("runs-list"))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["count"], 1)
        self.assertEqual(response.data["results"][0]["command"], "bounds")
        detail = self.client.get(reverse("runs-detail", args=[self.run.pk]))
        self.assertEqual(detail.status_code, status.HTTP_200_OK)
        self.assertEqual(detail.data["result"], {"c_lower": 1.7})

    def test_list_is_cached(self):
        self.client.get(reverse("runs-list"))
        key = CacheKeyGenerator.generate_key("core", "runs", "list", page="1")
        self.assertIsNotNone(CacheManager.get_cached(key))

    def test_new_run_invalidates_listing(self):
        self.client.get(reverse("runs-list"))
        ExperimentRun.objects.create(command="chung", seed="1")
        response = self.client.get(reverse("runs-list"))
        self.assertEqual(response.data["count"], 2)

    def test_read_only(self):
        response = self.client.post(reverse("runs-list"), {"command": "x", "seed": "1"}, format="json")
        self.assertEqual(response.status_code, status.HTTP_405_METHOD_NOT_ALLOWED)

    def test_param_builder_ignores_format(self):
        request = Request(APIRequestFactory().get("/api/runs/", {"format": "json", "page": "2"}))
        self.assertEqual(CacheParamBuilder.build_from_request(request), {"page": "2"})
