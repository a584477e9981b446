"""
Shared plumbing for the lab's management commands.

Every subcommand accepts ``--seed``, ``--out``, ``--format``, ``--threads``
and ``--record``; subclasses add their own flags in ``add_lab_arguments`` and
compute their result in ``run_lab``. Input problems surface as
``ValidationError`` and become exit code 2, estimator failures surface as
``LabError`` and become exit code 1.
"""

import argparse
import logging
import math
from dataclasses import dataclass
from functools import partial
from typing import Any, ClassVar, NoReturn

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError, CommandParser

from core.context import OutputFormat
from core.exceptions import LabError
from core.records import to_plain, write_output
from core.validators import ParameterValidator

logger = logging.getLogger(__name__)

EXIT_RUNTIME_ERROR = 1
EXIT_USAGE_ERROR = 2

# Options every Django command carries; they are not part of a run's parameters.
FRAMEWORK_OPTIONS = frozenset(
    {
        "verbosity",
        "settings",
        "pythonpath",
        "traceback",
        "no_color",
        "force_color",
        "skip_checks",
        "stdout",
        "stderr",
        "out",
        "format",
        "threads",
        "record",
    }
)


def float_list(text: str) -> list[float]:
    """Parse a comma-separated list of decimal reals."""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        msg = f"expected comma-separated numbers, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from exc
    if not values:
        msg = "expected at least one number"
        raise argparse.ArgumentTypeError(msg)
    return values


def float_pair(text: str) -> tuple[float, float]:
    """Parse ``lo,hi``."""
    values = float_list(text)
    if len(values) != 2:  # noqa: PLR2004
        msg = f"expected two comma-separated numbers, got {text!r}"
        raise argparse.ArgumentTypeError(msg)
    return values[0], values[1]


def usage_error(parser: CommandParser, message: str) -> NoReturn:
    """One-line diagnosis for a rejected command line, exit code 2."""
    if parser.called_from_command_line:
        parser.exit(EXIT_USAGE_ERROR, f"{parser.prog}: error: {message}\n")
    raise CommandError(f"Error: {message}", returncode=EXIT_USAGE_ERROR)


@dataclass(frozen=True)
class LabOutput:
    text: str
    payload: Any
    failure: str | None = None


class LabCommand(BaseCommand):
    requires_system_checks: ClassVar[list[str]] = []
    formats: ClassVar[tuple[OutputFormat, ...]] = (OutputFormat.JSON,)

    def create_parser(self, prog_name: str, subcommand: str, **kwargs: Any) -> CommandParser:
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.error = partial(usage_error, parser)
        return parser

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--seed",
            type=int,
            default=None,
            help="64-bit unsigned seed (default: $HEISLAB_SEED, else 0)",
        )
        parser.add_argument("--out", default=None, help="write the result here instead of stdout")
        parser.add_argument(
            "--format",
            choices=[fmt.value for fmt in self.formats],
            default=self.formats[0].value,
            help=f"output format (default: {self.formats[0].value})",
        )
        parser.add_argument(
            "--threads",
            type=int,
            default=None,
            help="worker processes (default: machine parallelism); never changes results",
        )
        parser.add_argument(
            "--record",
            action="store_true",
            help="archive the result as an ExperimentRun",
        )
        self.add_lab_arguments(parser)

    def add_lab_arguments(self, parser: CommandParser) -> None:
        """Subcommand-specific flags."""

    def run_lab(self, seed: int, options: dict[str, Any]) -> LabOutput:
        raise NotImplementedError

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    def handle(self, *args: Any, **options: Any) -> None:
        seed = options["seed"]
        if seed is None:
            seed = settings.HEISLAB["DEFAULT_SEED"]
        try:
            ParameterValidator.validate_seed(seed)
            if options["threads"] is not None:
                ParameterValidator.validate_count("threads", options["threads"])
            logger.info("Running %s with seed %d", self.command_name, seed)
            output = self.run_lab(seed, options)
        except ValidationError as exc:
            raise CommandError("; ".join(exc.messages), returncode=EXIT_USAGE_ERROR) from exc
        except LabError as exc:
            raise CommandError(str(exc), returncode=EXIT_RUNTIME_ERROR) from exc

        write_output(output.text, options["out"], self.stdout)
        if options["record"]:
            self.record(seed, options, output.payload)
        if output.failure:
            raise CommandError(output.failure, returncode=EXIT_RUNTIME_ERROR)

    def record(self, seed: int, options: dict[str, Any], payload: Any) -> None:
        from core.models import ExperimentRun  # noqa: PLC0415

        parameters = {
            key: value
            for key, value in options.items()
            if key not in FRAMEWORK_OPTIONS and key != "seed"
        }
        run = ExperimentRun.objects.create(
            command=self.command_name,
            seed=str(seed),
            parameters=to_plain(parameters),
            result=to_plain(payload),
        )
        logger.info("Archived %s as run %d", self.command_name, run.pk)

    @staticmethod
    def validate_epsilons(epsilon: float | None, grid: list[float] | None) -> list[float]:
        if epsilon is None and grid is None:
            msg = "one of --epsilon or --epsilon-grid is required"
            raise ValidationError(msg)
        values = [epsilon] if grid is None else grid
        for value in values:
            if not (math.isfinite(value) and value > 0):
                msg = f"epsilon must be positive, got {value!r}"
                raise ValidationError(msg)
        return values

    @staticmethod
    def setting_default(value: Any, setting: str) -> Any:
        """``value`` unless it was left unset, then the HEISLAB setting."""
        return settings.HEISLAB[setting] if value is None else value
