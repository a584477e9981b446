from django.urls import path

from .views import BoundFunctionView, BoundsView, XStarView

urlpatterns = [
    path("bounds/", BoundsView.as_view(), name="spectra-bounds"),
    path("bound-f/", BoundFunctionView.as_view(), name="spectra-bound-f"),
    path("x-star/", XStarView.as_view(), name="spectra-x-star"),
]
