from dataclasses import asdict
from typing import ClassVar

from drf_spectacular.utils import OpenApiParameter, extend_schema
from rest_framework import status
from rest_framework.permissions import AllowAny
from rest_framework.request import Request
from rest_framework.response import Response
from rest_framework.views import APIView

from core.cache import CacheKeyGenerator, CacheManager

from .bounds import chung_bounds
from .serializers import (
    BoundFunctionQuerySerializer,
    BoundResultSerializer,
    EvaluationSerializer,
    XStarQuerySerializer,
)

EIGENVALUE_PARAMETERS = [
    OpenApiParameter("l1", float, description="lambda_1 of the unit interval (default pi^2/8)"),
    OpenApiParameter("l2", float, description="lambda_1 of the unit disc (default j_{0,1}^2/2)"),
]


class BoundsView(APIView):
    """The Chung bound table."""

    permission_classes: ClassVar[list] = [AllowAny]

    @extend_schema(
        summary="Chung bounds",
        description="Dirichlet eigenvalues, the minimizer x* and the interval [c_lower, c_upper]",
        responses={200: BoundResultSerializer},
    )
    def get(self, request: Request) -> Response:
        data = CacheManager.get_or_compute(
            CacheKeyGenerator.generate_key("spectra", "bounds", "retrieve"),
            lambda: BoundResultSerializer(asdict(chung_bounds())).data,
        )
        return Response(data, status=status.HTTP_200_OK)


class BoundFunctionView(APIView):
    permission_classes: ClassVar[list] = [AllowAny]

    @extend_schema(
        summary="Evaluate f(x)",
        description="f(x) = l2 / sqrt(1 - x) + l1 sqrt(1 - x) / (4x) for 0 < x < 1",
        parameters=[OpenApiParameter("x", float, required=True), *EIGENVALUE_PARAMETERS],
        responses={200: EvaluationSerializer},
    )
    def get(self, request: Request) -> Response:
        query = BoundFunctionQuerySerializer(data=request.query_params)
        query.is_valid(raise_exception=True)
        return Response(EvaluationSerializer(query.validated_data).data, status=status.HTTP_200_OK)


class XStarView(APIView):
    permission_classes: ClassVar[list] = [AllowAny]

    @extend_schema(
        summary="Minimizer x*",
        description="Closed-form minimizer of f over (0, 1)",
        parameters=EIGENVALUE_PARAMETERS,
        responses={200: EvaluationSerializer},
    )
    def get(self, request: Request) -> Response:
        query = XStarQuerySerializer(data=request.query_params)
        query.is_valid(raise_exception=True)
        return Response(EvaluationSerializer(query.validated_data).data, status=status.HTTP_200_OK)
