from typing import Any

from django.core.management.base import CommandParser

from core.context import OutputFormat
from core.management.base import LabCommand, LabOutput
from core.records import render_json
from heisenberg.paths import horizontality_defect
from heisenberg.serializers import PathStatsSerializer
from heisenberg.simulation import SimConfig, simulate_path, write_path_csv


class Command(LabCommand):
    help = "Simulate one hypoelliptic Brownian path and dump it as CSV (t,x,y,z,sup_norm)."
    formats = (OutputFormat.CSV, OutputFormat.JSON)

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--horizon", type=float, default=1.0, help="time horizon T (default: 1)")
        parser.add_argument(
            "--steps-per-unit",
            type=int,
            default=None,
            help="grid steps per unit time (default: $HEISLAB_STEPS_PER_UNIT, else 10000)",
        )
        parser.add_argument("--stride", type=int, default=1, help="emit every n-th grid point (default: 1)")
        parser.add_argument("--path-index", type=int, default=0, help="path index within the seed (default: 0)")

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        steps_per_unit = self.setting_default(options["steps_per_unit"], "STEPS_PER_UNIT")
        cfg = SimConfig.at_density(
            seed,
            options["horizon"],
            steps_per_unit,
            record_stride=options["stride"],
            path_index=options["path_index"],
        )
        path = simulate_path(cfg)
        stats = path.stats()
        payload = PathStatsSerializer(
            {
                "seed": seed,
                "path_index": cfg.path_index,
                "horizon": cfg.horizon,
                "steps": cfg.steps,
                "g_star": stats.g_star,
                "b_star": stats.b_star,
                "a_star": stats.a_star,
                "w_final": list(stats.w_final),
                "a_final": stats.a_final,
                "horizontality_defect": horizontality_defect(path.as_polygonal()),
            }
        ).data
        if options["format"] == OutputFormat.CSV.value:
            return LabOutput(write_path_csv(path, cfg.record_stride), payload)
        return LabOutput(render_json(payload), payload)
