"""Runtime failures of the lab's estimators (exit code 1 on the CLI)."""


class LabError(RuntimeError):
    """Base class for failures that are not caused by bad input."""


class InsufficientTailDataError(LabError):
    def __init__(self, exits: int, required: int) -> None:
        self.exits = exits
        self.required = required
        super().__init__(
            f"insufficient tail data: {exits} uncensored exits in the fit "
            f"window, at least {required} required"
        )