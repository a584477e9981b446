from typing import Any

from django.core.management.base import CommandParser

from core.context import ProcessKind
from core.management.base import LabCommand, LabOutput, float_list
from core.records import render_json
from estimation.serializers import SmallBallSummarySerializer
from estimation.small_ball import MIN_FIT_POINTS, estimate_small_ball_grid, fit_small_ball_rate
from heisenberg.simulation import steps_for


class Command(LabCommand):
    help = (
        "Estimate P(sup_{s<=T} |X_s| < eps) with 95% Wilson intervals; with three or "
        "more epsilons, also fit the small-deviation constant c^2."
    )

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--kind",
            choices=[kind.value for kind in ProcessKind],
            default=ProcessKind.HEIS.value,
            help="driving process (default: heis)",
        )
        parser.add_argument("--epsilon", type=float, default=None, help="ball radius")
        parser.add_argument(
            "--epsilon-grid",
            type=float_list,
            default=None,
            help="comma-separated radii sharing one set of paths",
        )
        parser.add_argument("--n-paths", type=int, default=10000, help="number of paths (default: 10000)")
        parser.add_argument(
            "--steps-per-unit",
            type=int,
            default=None,
            help="grid steps per unit time (default: $HEISLAB_STEPS_PER_UNIT, else 10000)",
        )
        parser.add_argument("--horizon", type=float, default=1.0, help="time horizon T (default: 1)")

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        epsilons = self.validate_epsilons(options["epsilon"], options["epsilon_grid"])
        steps_per_unit = self.setting_default(options["steps_per_unit"], "STEPS_PER_UNIT")
        estimates = estimate_small_ball_grid(
            ProcessKind(options["kind"]),
            epsilons,
            options["n_paths"],
            steps_for(options["horizon"], steps_per_unit),
            seed,
            options["horizon"],
            threads=options["threads"],
        )
        fit = fit_small_ball_rate(estimates) if len(set(epsilons)) >= MIN_FIT_POINTS else None
        payload = SmallBallSummarySerializer({"estimates": estimates, "fit": fit}).data
        return LabOutput(render_json(payload), payload)
