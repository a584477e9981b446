from enum import Enum
from typing import Any, ClassVar

from rest_framework import serializers

from .models import ExperimentRun


class EnumValueField(serializers.Field):
    """Read-only field emitting an ``Enum`` member as its value."""

    def __init__(self, **kwargs: Any) -> None:
        kwargs["read_only"] = True
        super().__init__(**kwargs)

    def to_representation(self, value: Enum | str) -> str:
        return value.value if isinstance(value, Enum) else str(value)


class PairField(serializers.ListField):
    """A (lo, hi) pair emitted as a two-element list."""

    def __init__(self, **kwargs: Any) -> None:
        kwargs.setdefault("child", serializers.FloatField())
        kwargs.setdefault("min_length", 2)
        kwargs.setdefault("max_length", 2)
        super().__init__(**kwargs)


class ExperimentRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = ExperimentRun
        fields: ClassVar[list[str]] = [
            "id",
            "command",
            "seed",
            "parameters",
            "result",
            "created_at",
        ]
        read_only_fields: ClassVar[list[str]] = fields
