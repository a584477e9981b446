"""
Lab entry point.

``run(argv)`` dispatches a subcommand through Django's management machinery
and turns its outcome into the lab's exit codes:

- 0: success
- 1: runtime failure of an estimator (for example "insufficient tail data")
- 2: usage error (unknown subcommand, bad flag, violated precondition)
"""

import os
import sys
from collections.abc import Sequence

# Django ships its own ``check`` command; the lab's property suite is exposed
# under the same public name.
COMMAND_ALIASES = {"check": "labcheck"}
PASSTHROUGH = {"help", "version"}
EXIT_RUNTIME_ERROR = 1
EXIT_USAGE_ERROR = 2


def run(argv: Sequence[str]) -> int:
    """Run one subcommand and return its exit code."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "heislab.settings")
    try:
        import django  # noqa: PLC0415
        from django.core.management import (  # noqa: PLC0415
            execute_from_command_line,
            get_commands,
        )
    except ImportError as exc:
        msg = (
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        )
        raise ImportError(msg) from exc

    args = list(argv)
    if len(args) > 1:
        args[1] = COMMAND_ALIASES.get(args[1], args[1])
        name = args[1]
        django.setup()
        if (
            not name.startswith("-")
            and name not in PASSTHROUGH
            and name not in get_commands()
        ):
            prog = os.path.basename(args[0]) if args else "heislab"
            sys.stderr.write(
                f"Unknown command: {name!r}. Type '{prog} help' for usage.\n"
            )
            return EXIT_USAGE_ERROR

    try:
        execute_from_command_line(args)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        if isinstance(exc.code, int):
            return exc.code
        sys.stderr.write(f"{exc.code}\n")
        return EXIT_RUNTIME_ERROR
    return 0


def main() -> None:
    sys.exit(run(sys.argv))


if __name__ == "__main__":
    main()
