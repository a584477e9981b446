from typing import Any

from django.core.exceptions import ValidationError as DjangoValidationError
from rest_framework import serializers

from .bounds import bound_f, chung_bounds, x_star


class BoundResultSerializer(serializers.Serializer):
    lambda1_1 = serializers.FloatField()
    lambda1_2 = serializers.FloatField()
    x_star = serializers.FloatField()
    f_at_xstar = serializers.FloatField()
    c_lower = serializers.FloatField()
    c_upper = serializers.FloatField()


class EigenvalueQuerySerializer(serializers.Serializer):
    """
    Optional eigenvalues ``l1``, ``l2``; omitted ones default to the unit-ball
    eigenvalues of R^1 and R^2.
    """

    l1 = serializers.FloatField(required=False, min_value=0.0)
    l2 = serializers.FloatField(required=False, min_value=0.0)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        bounds = chung_bounds()
        attrs.setdefault("l1", bounds.lambda1_1)
        attrs.setdefault("l2", bounds.lambda1_2)
        if attrs["l1"] <= 0 or attrs["l2"] <= 0:
            msg = "Eigenvalues must be positive"
            raise serializers.ValidationError(msg)
        return attrs


class XStarQuerySerializer(EigenvalueQuerySerializer):
    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        attrs = super().validate(attrs)
        try:
            attrs["value"] = x_star(attrs["l1"], attrs["l2"])
        except DjangoValidationError as exc:
            raise serializers.ValidationError(exc.messages) from exc
        return attrs


class BoundFunctionQuerySerializer(EigenvalueQuerySerializer):
    x = serializers.FloatField()

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        attrs = super().validate(attrs)
        try:
            attrs["value"] = bound_f(attrs["x"], attrs["l1"], attrs["l2"])
        except DjangoValidationError as exc:
            raise serializers.ValidationError(exc.messages) from exc
        return attrs


class EvaluationSerializer(serializers.Serializer):
    x = serializers.FloatField(required=False)
    l1 = serializers.FloatField()
    l2 = serializers.FloatField()
    value = serializers.FloatField()
