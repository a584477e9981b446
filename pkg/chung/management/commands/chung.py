from typing import Any

from django.core.management.base import CommandParser

from chung.lil import (
    DEFAULT_RATIO,
    DEFAULT_T_MAX,
    DEFAULT_T_MIN,
    band_check,
    default_band,
    default_checkpoints,
    lil_trace,
    lil_traces,
    trace_config,
    write_trace_csv,
)
from chung.serializers import BandSummarySerializer
from core.context import OutputFormat, TraceMode
from core.management.base import LabCommand, LabOutput, float_pair
from core.records import render_json


class Command(LabCommand):
    help = (
        "Law-of-iterated-logarithm diagnostic: running minima of phi(t) g*_t (group) or "
        "phi(t)^2 A*_t (area) against a band around the limit. CSV output dumps the "
        "trace of --path-index (t,phi,stat,running_min)."
    )
    formats = (OutputFormat.JSON, OutputFormat.CSV)

    def add_lab_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--mode",
            choices=[mode.value for mode in TraceMode],
            default=TraceMode.GROUP.value,
            help="statistic to trace (default: group)",
        )
        parser.add_argument("--n-seeds", type=int, default=100, help="independent traces (default: 100)")
        parser.add_argument(
            "--band",
            type=float_pair,
            default=None,
            help="lo,hi acceptance band (default: 0.5 and 1.5 times the Chung interval, "
            "or 0.5 and 2 times pi/4 in area mode)",
        )
        parser.add_argument(
            "--steps-per-unit",
            type=int,
            default=None,
            help="grid steps per unit time (default: $HEISLAB_LIL_STEPS_PER_UNIT, else 10)",
        )
        parser.add_argument("--t-min", type=float, default=DEFAULT_T_MIN, help="first checkpoint (default: 100)")
        parser.add_argument("--t-max", type=float, default=DEFAULT_T_MAX, help="last checkpoint (default: 1e6)")
        parser.add_argument(
            "--ratio", type=float, default=DEFAULT_RATIO, help="checkpoint growth factor (default: 1.2)"
        )
        parser.add_argument("--stride", type=int, default=1, help="CSV: emit every n-th checkpoint (default: 1)")
        parser.add_argument("--path-index", type=int, default=0, help="CSV: trace to dump (default: 0)")

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        mode = TraceMode(options["mode"])
        steps_per_unit = self.setting_default(options["steps_per_unit"], "LIL_STEPS_PER_UNIT")
        checkpoints = default_checkpoints(options["t_min"], options["t_max"], options["ratio"])

        if options["format"] == OutputFormat.CSV.value:
            cfg = trace_config(seed, float(checkpoints[-1]), steps_per_unit, options["path_index"])
            trace = lil_trace(cfg, checkpoints, mode)
            return LabOutput(write_trace_csv(trace, options["stride"]), {"terminal_min": trace.terminal_min})

        band = options["band"] or default_band(mode)
        traces = lil_traces(
            options["n_seeds"], mode, checkpoints, steps_per_unit, seed, options["threads"]
        )
        payload = BandSummarySerializer(band_check(traces, band)).data
        return LabOutput(render_json(payload), payload)
