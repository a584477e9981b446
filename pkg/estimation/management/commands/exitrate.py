from typing import Any

from django.core.management.base import CommandParser

from core.context import OutputFormat, ProcessKind
from core.management.base import LabCommand, LabOutput, float_pair
from core.records import render_csv, render_json
from estimation.exit_times import DEFAULT_WINDOW, estimate_exit_rate
from estimation.serializers import RateFitRecordSerializer


class Command(LabCommand):
    help = (
        "Estimate the exponential tail rate of the unit-ball exit time. "
        "CSV output dumps the empirical survival curve (t,survival) instead."
    )
    formats = (OutputFormat.JSON, OutputFormat.CSV)

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--kind",
            choices=[kind.value for kind in ProcessKind],
            default=ProcessKind.HEIS.value,
            help="driving process (default: heis)",
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
        curve, fit = estimate_exit_rate(
            ProcessKind(options["kind"]),
            options["t_max"],
            options["n_paths"],
            self.setting_default(options["steps_per_unit"], "STEPS_PER_UNIT"),
            seed,
            options["window"],
            options["threads"],
        )
        payload = RateFitRecordSerializer(fit).data
        if options["format"] == OutputFormat.CSV.value:
            rows = zip(curve.times, curve.survival, strict=True)
            return LabOutput(render_csv(("t", "survival"), rows), payload)
        return LabOutput(render_json(payload), payload)
