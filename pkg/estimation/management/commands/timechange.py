from typing import Any

from django.core.management.base import CommandParser

from core.management.base import LabCommand, LabOutput
from core.records import render_json
from estimation.identities import timechange_report, timechange_samples
from estimation.serializers import TimeChangeReportSerializer


class Command(LabCommand):
    help = "Compare the Levy area A_1 with b(tau(1)), tau(1) = 1/4 int_0^1 |B_s|^2 ds."

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--n-paths", type=int, default=10000, help="samples per arm (default: 10000)")
        parser.add_argument(
            "--steps-per-unit",
            type=int,
            default=None,
            help="grid steps on [0,1] (default: $HEISLAB_STEPS_PER_UNIT, else 10000)",
        )

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        samples = timechange_samples(
            options["n_paths"],
            self.setting_default(options["steps_per_unit"], "STEPS_PER_UNIT"),
            seed,
            options["threads"],
        )
        payload = TimeChangeReportSerializer(timechange_report(samples, seed)).data
        return LabOutput(render_json(payload), payload)
