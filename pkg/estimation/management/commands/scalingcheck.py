from typing import Any

from django.core.management.base import CommandParser

from core.context import ProcessKind
from core.management.base import LabCommand, LabOutput
from core.records import render_json
from estimation.identities import scaling_distribution_check, scaling_identity_check
from estimation.serializers import ScalingCheckSerializer
from estimation.small_ball import horizon_scaling_check


class Command(LabCommand):
    help = (
        "Check P(g*_1 < eps) = P(exit time > eps^-2) and |g_eps| ~ sqrt(eps)|g_1|; "
        "with --horizon, also P(g*_T < eps) = P(g*_1 < eps / sqrt(T))."
    )

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--epsilon", type=float, default=0.8, help="ball radius (default: 0.8)")
        parser.add_argument("--n-paths", type=int, default=10000, help="paths per arm (default: 10000)")
        parser.add_argument(
            "--steps-per-unit",
            type=int,
            default=None,
            help="grid steps per arm (default: $HEISLAB_STEPS_PER_UNIT, else 10000)",
        )
        parser.add_argument("--horizon", type=float, default=None, help="also compare [0,T] against [0,1]")

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        epsilon = self.validate_epsilons(options["epsilon"], None)[0]
        steps = self.setting_default(options["steps_per_unit"], "STEPS_PER_UNIT")
        n_paths, threads = options["n_paths"], options["threads"]
        horizon = None
        if options["horizon"] is not None:
            horizon = horizon_scaling_check(
                ProcessKind.HEIS, epsilon, options["horizon"], n_paths, steps, seed, threads
            )
        payload = ScalingCheckSerializer(
            {
                "identity": scaling_identity_check(epsilon, n_paths, steps, seed, threads),
                "distribution": scaling_distribution_check(epsilon, n_paths, steps, seed, threads),
                "horizon": horizon,
            }
        ).data
        return LabOutput(render_json(payload), payload)
