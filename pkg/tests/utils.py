"""
Test utilities for the heislab CLI.

``run_cli`` drives ``heislab.cli.run`` in-process and captures what the
subcommand wrote, so tests can assert on exit codes and on the exact bytes
of the emitted records.
"""

from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass
from io import StringIO

from heislab.cli import run


@dataclass(frozen=True)
class CliResult:
    code: int
    stdout: str
    stderr: str


def run_cli(*args: str) -> CliResult:
    """
    Run ``heislab <args>`` and capture its output.

    Example:
        >>> result = run_cli("bounds")
        >>> result.code
        0
    """
    out, err = StringIO(), StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(["heislab", *args])
    return CliResult(code=code, stdout=out.getvalue(), stderr=err.getvalue())
