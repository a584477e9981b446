from typing import Any

from django.core.management.base import CommandParser

from core.context import Side
from core.management.base import LabCommand, LabOutput
from core.records import render_json
from estimation.identities import increment_report
from estimation.serializers import IncrementReportSerializer


class Command(LabCommand):
    help = (
        "Sample the left increment g_u^-1 g_{u+s} or the right increment g_{u+s} g_u^-1 "
        "and compare it with a fresh g_s."
    )

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--u", type=float, default=1.0, help="start time u (default: 1)")
        parser.add_argument("--s", type=float, default=1.0, help="increment length s (default: 1)")
        parser.add_argument(
            "--side",
            choices=[side.value for side in Side],
            default=Side.LEFT.value,
            help="increment side (default: left)",
        )
        parser.add_argument("--n-paths", type=int, default=10000, help="samples (default: 10000)")
        parser.add_argument(
            "--steps-per-unit",
            type=int,
            default=None,
            help="grid steps per unit time (default: $HEISLAB_STEPS_PER_UNIT, else 10000)",
        )

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        report = increment_report(
            options["u"],
            options["s"],
            Side(options["side"]),
            options["n_paths"],
            self.setting_default(options["steps_per_unit"], "STEPS_PER_UNIT"),
            seed,
            options["threads"],
        )
        payload = IncrementReportSerializer(report).data
        return LabOutput(render_json(payload), payload)
