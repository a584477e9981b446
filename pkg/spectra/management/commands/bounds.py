from dataclasses import asdict
from typing import Any

from core.management.base import LabCommand, LabOutput
from core.records import render_json, round_significant
from spectra.bounds import chung_bounds
from spectra.serializers import BoundResultSerializer

BOUNDS_DIGITS = 15


class Command(LabCommand):
    help = "Print the Dirichlet eigenvalues, x*, f(x*) and the Chung interval [c_lower, c_upper]."

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        values = {
            name: round_significant(value, BOUNDS_DIGITS)
            for name, value in asdict(chung_bounds()).items()
        }
        payload = BoundResultSerializer(values).data
        return LabOutput(render_json(payload), payload)
