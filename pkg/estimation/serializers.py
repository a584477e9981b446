"""
JSON records of the estimation app. Declared field order is emitted key
order, so these classes fix the wire format of every estimation command.
"""

from rest_framework import serializers

from core.serializers import EnumValueField, PairField


class SmallBallRecordSerializer(serializers.Serializer):
    kind = EnumValueField()
    epsilon = serializers.FloatField()
    p_hat = serializers.FloatField()
    ci_low = serializers.FloatField()
    ci_high = serializers.FloatField()
    n_paths = serializers.IntegerField()
    steps = serializers.IntegerField()
    seed = serializers.IntegerField()


class RateFitRecordSerializer(serializers.Serializer):
    kind = EnumValueField()
    rate = serializers.FloatField()
    stderr = serializers.FloatField()
    intercept = serializers.FloatField()
    window = PairField()
    n_points = serializers.IntegerField()
    seed = serializers.IntegerField()


class SmallBallSummarySerializer(serializers.Serializer):
    """``smallball`` output: one record per epsilon, plus a rate fit on grids of three or more."""

    estimates = SmallBallRecordSerializer(many=True)
    fit = RateFitRecordSerializer(allow_null=True)


class MomentSerializer(serializers.Serializer):
    value = serializers.FloatField()
    stderr = serializers.FloatField()


class KSResultSerializer(serializers.Serializer):
    statistic = serializers.FloatField()
    p_value = serializers.FloatField()
    n1 = serializers.IntegerField()
    n2 = serializers.IntegerField()


class ScalingComparisonSerializer(serializers.Serializer):
    epsilon = serializers.FloatField()
    horizon = serializers.FloatField()
    direct_p = serializers.FloatField()
    direct_ci = PairField()
    transformed_p = serializers.FloatField()
    transformed_ci = PairField()
    z_score = serializers.FloatField()
    n_paths = serializers.IntegerField()
    seed = serializers.IntegerField()


class ScalingCheckSerializer(serializers.Serializer):
    identity = ScalingComparisonSerializer()
    distribution = KSResultSerializer()
    horizon = ScalingComparisonSerializer(allow_null=True)


class TimeChangeReportSerializer(serializers.Serializer):
    n_samples = serializers.IntegerField()
    clock_mean = MomentSerializer()
    area_variance = MomentSerializer()
    timechanged_variance = MomentSerializer()
    ks = KSResultSerializer()
    seed = serializers.IntegerField()


class IncrementReportSerializer(serializers.Serializer):
    side = EnumValueField()
    u = serializers.FloatField()
    s = serializers.FloatField()
    n_samples = serializers.IntegerField()
    area_variance = MomentSerializer()
    expected_area_variance = serializers.FloatField()
    norm_ks = KSResultSerializer()
    seed = serializers.IntegerField()


class CalibrationReportSerializer(serializers.Serializer):
    kind = EnumValueField()
    reference = serializers.FloatField()
    fit = RateFitRecordSerializer()
    relative_error = serializers.FloatField()
    refined = RateFitRecordSerializer()
    refinement_shift = serializers.FloatField()
    steps_per_unit = serializers.IntegerField()
