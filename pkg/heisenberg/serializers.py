from rest_framework import serializers


class PathStatsSerializer(serializers.Serializer):
    """Summary of one simulated path, emitted by ``simulate --format json``."""

    seed = serializers.IntegerField()
    path_index = serializers.IntegerField()
    horizon = serializers.FloatField()
    steps = serializers.IntegerField()
    g_star = serializers.FloatField()
    b_star = serializers.FloatField()
    a_star = serializers.FloatField()
    w_final = serializers.ListField(child=serializers.FloatField())
    a_final = serializers.FloatField()
    horizontality_defect = serializers.FloatField()


class PropertyResultSerializer(serializers.Serializer):
    name = serializers.CharField()
    cases = serializers.IntegerField()
    failures = serializers.IntegerField()
    worst = serializers.FloatField()
    tolerance = serializers.FloatField()
    passed = serializers.BooleanField()
