import math
import numbers
from collections.abc import Sequence

from django.core.exceptions import ValidationError

SEED_MAX = 2**64 - 1


class ParameterValidator:
    @staticmethod
    def validate_finite(name: str, value: float) -> None:
        if not math.isfinite(value):
            msg = f"{name} must be finite, got {value!r}"
            raise ValidationError(msg)

    @staticmethod
    def validate_positive(name: str, value: float) -> None:
        if not isinstance(value, numbers.Real) or isinstance(value, bool) or not math.isfinite(value):
            msg = f"{name} must be a finite number, got {value!r}"
            raise ValidationError(msg)
        if value <= 0:
            msg = f"{name} must be positive, got {value!r}"
            raise ValidationError(msg)

    @staticmethod
    def validate_count(name: str, value: int, minimum: int = 1) -> None:
        if not isinstance(value, numbers.Integral) or isinstance(value, bool):
            msg = f"{name} must be an integer, got {value!r}"
            raise ValidationError(msg)
        if value < minimum:
            msg = f"{name} must be at least {minimum}, got {value}"
            raise ValidationError(msg)

    @staticmethod
    def validate_seed(seed: int) -> None:
        if not isinstance(seed, numbers.Integral) or isinstance(seed, bool):
            msg = f"Seed must be an integer, got {seed!r}"
            raise ValidationError(msg)
        if not 0 <= seed <= SEED_MAX:
            msg = f"Seed must be a 64-bit unsigned integer, got {seed}"
            raise ValidationError(msg)

    @staticmethod
    def validate_open_unit_interval(name: str, value: float) -> None:
        if not (math.isfinite(value) and 0.0 < value < 1.0):
            msg = f"{name} must lie in (0, 1), got {value!r}"
            raise ValidationError(msg)

    @staticmethod
    def validate_window(name: str, window: Sequence[float]) -> None:
        if len(window) != 2:  # noqa: PLR2004
            msg = f"{name} must have exactly two endpoints"
            raise ValidationError(msg)
        lo, hi = window
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
            msg = f"{name} must be an ordered pair lo < hi, got ({lo}, {hi})"
            raise ValidationError(msg)

    @staticmethod
    def validate_increasing(name: str, values: Sequence[float]) -> None:
        for previous, current in zip(values, values[1:], strict=False):
            if not current > previous:
                msg = f"{name} must be strictly increasing"
                raise ValidationError(msg)
