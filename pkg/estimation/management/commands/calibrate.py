from typing import Any

from django.core.management.base import CommandParser

from core.context import ProcessKind
from core.management.base import LabCommand, LabOutput, float_pair
from core.records import render_json
from estimation.exit_times import DEFAULT_WINDOW, calibrate
from estimation.serializers import CalibrationReportSerializer

CALIBRATED = (ProcessKind.BM1, ProcessKind.BM2, ProcessKind.AREA)


class Command(LabCommand):
    help = (
        "Run the exit-rate estimator on a process with a known rate and report "
        "its relative error and its shift under a twofold grid refinement."
    )

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--process",
            choices=[kind.value for kind in CALIBRATED],
            required=True,
            help="process with a closed-form rate",
        )
        parser.add_argument("--t-max", type=float, default=8.0, help="censoring time (default: 8)")
        parser.add_argument("--n-paths", type=int, default=10000, help="number of paths (default: 10000)")
        parser.add_argument(
            "--steps-per-unit",
            type=int,
            default=None,
            help="grid steps per unit time (default: $HEISLAB_STEPS_PER_UNIT, else 10000)",
        )
        parser.add_argument(
            "--window",
            type=float_pair,
            default=DEFAULT_WINDOW,
            help="survival range lo,hi of the fit window (default: 0.02,0.3)",
        )

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        report = calibrate(
            ProcessKind(options["process"]),
            options["t_max"],
            options["n_paths"],
            self.setting_default(options["steps_per_unit"], "STEPS_PER_UNIT"),
            seed,
            options["window"],
            options["threads"],
        )
        payload = CalibrationReportSerializer(report).data
        return LabOutput(render_json(payload), payload)
