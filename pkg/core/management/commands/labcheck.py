from typing import Any

from django.core.management.base import CommandParser

from core.management.base import LabCommand, LabOutput
from core.records import render_json
from heisenberg.properties import run_property_suite
from heisenberg.serializers import PropertyResultSerializer


class Command(LabCommand):
    help = (
        "Run the randomized property suite of the group arithmetic and the simulator "
        "(also available as 'check'). Exits 1 if any property fails."
    )

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--cases", type=int, default=100_000, help="random cases per algebraic property (default: 100000)"
        )
        parser.add_argument("--n-paths", type=int, default=20, help="simulated paths checked (default: 20)")
        parser.add_argument("--steps", type=int, default=10_000, help="grid steps per path (default: 10000)")

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        results = run_property_suite(seed, options["cases"], options["n_paths"], options["steps"])
        payload = PropertyResultSerializer(results, many=True).data
        failed = [result.name for result in results if not result.passed]
        failure = f"properties failed: {', '.join(failed)}" if failed else None
        return LabOutput(render_json(payload), payload, failure)
