from rest_framework import serializers

from core.serializers import EnumValueField, PairField


class BandSummarySerializer(serializers.Serializer):
    mode = EnumValueField()
    band = PairField()
    fraction = serializers.FloatField()
    ci = PairField()
    n_seeds = serializers.IntegerField()
