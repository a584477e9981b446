"""
CLI integration tests.

Tests cover:
1. Exit codes: 0 on success, 2 on usage errors, 1 on estimator failures
2. Byte-identical output for a fixed seed, whatever the worker count
3. The ``check`` alias for the property suite
"""

import json

from django.test import SimpleTestCase, TestCase

from core.models import ExperimentRun

from .utils import run_cli

SMALLBALL = ("smallball", "--kind", "heis", "--epsilon", "1.0", "--n-paths", "600", "--steps-per-unit", "20")
CALIBRATE = ("calibrate", "--process", "bm1", "--seed", "7", "--n-paths", "600", "--steps-per-unit", "50")
SUBCOMMANDS = (
    SMALLBALL,
    CALIBRATE,
    ("exitrate", "--kind", "bm2", "--n-paths", "1500", "--steps-per-unit", "20", "--t-max", "6"),
    ("scalingcheck", "--epsilon", "1.0", "--n-paths", "300", "--steps-per-unit", "20", "--horizon", "2"),
    ("timechange", "--n-paths", "300", "--steps-per-unit", "20"),
    ("increments", "--side", "right", "--n-paths", "300", "--steps-per-unit", "20"),
    ("chung", "--n-seeds", "6", "--t-max", "1000", "--steps-per-unit", "5"),
    ("check", "--cases", "100", "--n-paths", "4", "--steps", "20"),
    ("labcheck", "--cases", "100", "--n-paths", "4", "--steps", "20"),
    ("bounds",),
    ("simulate", "--steps-per-unit", "50"),
)


class ExitCodeTest(SimpleTestCase):
    """Exit codes of the heislab entry point"""

    def test_bounds_succeeds(self) -> None:
        """Test that a plain subcommand exits 0 with a JSON record on stdout"""
        result = run_cli("bounds")

        assert result.code == 0
        assert set(json.loads(result.stdout)) == {
            "lambda1_1",
            "lambda1_2",
            "x_star",
            "f_at_xstar",
            "c_lower",
            "c_upper",
        }

    def test_unknown_subcommand(self) -> None:
        """Test that an unknown subcommand is a usage error"""
        result = run_cli("frobnicate")

        assert result.code == 2
        assert "Unknown command" in result.stderr

    def test_unknown_flag(self) -> None:
        """Test that argparse rejections exit 2 with a one-line diagnosis"""
        result = run_cli("bounds", "--no-such-flag")

        assert result.code == 2
        lines = result.stderr.strip().splitlines()
        assert len(lines) == 1
        assert "error:" in lines[0]
        assert "--no-such-flag" in lines[0]

    def test_precondition_violation(self) -> None:
        """Test that a negative epsilon is a usage error, not a crash"""
        result = run_cli("smallball", "--epsilon", "-1")

        assert result.code == 2
        assert "epsilon must be positive" in result.stderr

    def test_insufficient_tail_data(self) -> None:
        """Test that too few window exits is a runtime failure"""
        result = run_cli("exitrate", "--kind", "bm1", "--n-paths", "200", "--steps-per-unit", "50", "--t-max", "8")

        assert result.code == 1
        assert "insufficient tail data" in result.stderr

    def test_check_alias(self) -> None:
        """Test that 'check' runs the lab's property suite"""
        result = run_cli("check", "--cases", "200", "--n-paths", "1", "--steps", "50")

        assert result.code == 0
        assert all(entry["passed"] for entry in json.loads(result.stdout))


class DeterminismTest(SimpleTestCase):
    """A fixed seed reproduces every record byte for byte"""

    def test_thread_count_does_not_change_output(self) -> None:
        """Test smallball output with one and with three workers"""
        serial = run_cli(*SMALLBALL, "--threads", "1")
        parallel = run_cli(*SMALLBALL, "--threads", "3")

        assert serial.code == parallel.code == 0
        assert serial.stdout == parallel.stdout

    def test_every_subcommand_ignores_thread_count(self) -> None:
        """Test each subcommand with one and with three workers"""
        for args in SUBCOMMANDS:
            with self.subTest(command=args[0]):
                serial = run_cli(*args, "--seed", "11", "--threads", "1")
                parallel = run_cli(*args, "--seed", "11", "--threads", "3")

                assert serial.code == parallel.code == 0, serial.stderr
                assert serial.stdout
                assert serial.stdout == parallel.stdout

    def test_calibrate_is_byte_identical(self) -> None:
        """Test two calibrate runs with the same seed"""
        first = run_cli(*CALIBRATE)
        second = run_cli(*CALIBRATE, "--threads", "2")

        assert first.code == 0
        assert first.stdout == second.stdout
        assert json.loads(first.stdout)["kind"] == "bm1"

    def test_seed_changes_output(self) -> None:
        """Test that different seeds give different samples"""
        a = run_cli("simulate", "--seed", "1", "--steps-per-unit", "50")
        b = run_cli("simulate", "--seed", "2", "--steps-per-unit", "50")

        assert a.stdout != b.stdout
        assert a.stdout.splitlines()[0] == "t,x,y,z,sup_norm"

    def test_simulate_csv_precision(self) -> None:
        """Test that CSV cells round-trip the simulated floats"""
        result = run_cli("simulate", "--seed", "3", "--steps-per-unit", "10", "--stride", "10")
        rows = result.stdout.splitlines()[1:]

        assert len(rows) == 2
        assert rows[0] == "0,0,0,0,0"
        assert all(len(cell.replace("-", "").replace(".", "").lstrip("0")) <= 17 for cell in rows[1].split(","))


class RecordFlagTest(TestCase):
    """--record archives the emitted record"""

    def test_record_from_cli(self) -> None:
        """Test that a recorded CLI run lands in the archive with its output"""
        result = run_cli("bounds", "--record", "--seed", "5")

        assert result.code == 0
        run = ExperimentRun.objects.get()
        assert run.seed == "5"
        assert run.result == json.loads(result.stdout)
