from typing import ClassVar

from drf_spectacular.utils import extend_schema, extend_schema_view
from rest_framework import viewsets
from rest_framework.permissions import AllowAny

from .cache import CacheMixin
from .models import ExperimentRun
from .serializers import ExperimentRunSerializer


@extend_schema_view(
    list=extend_schema(
        summary="List archived runs",
        description="Runs stored with --record, newest first",
    ),
    retrieve=extend_schema(summary="Retrieve one archived run"),
)
class ExperimentRunViewSet(CacheMixin, viewsets.ReadOnlyModelViewSet):
    queryset = ExperimentRun.objects.all()
    serializer_class = ExperimentRunSerializer
    permission_classes: ClassVar[list] = [AllowAny]
    cache_app = "core"
    cache_model = "runs"
