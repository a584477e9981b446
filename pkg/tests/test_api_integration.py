"""
API integration tests.

Tests cover:
1. Public, unauthenticated access to every read-only endpoint
2. The OpenAPI schema and Swagger UI
3. Runs recorded from the CLI showing up in the archive listing
"""

import json

from django.core.cache import cache
from rest_framework import status
from rest_framework.test import APITestCase

from .utils import run_cli


class PublicEndpointTest(APITestCase):
    """Every endpoint answers anonymous GETs"""

    def setUp(self) -> None:
        """Clear cache before each test"""
        cache.clear()

    def test_endpoints_are_public(self) -> None:
        """Test anonymous access to the archive and the bound endpoints"""
        for url in ("/api/runs/", "/api/spectra/bounds/", "/api/spectra/bound-f/?x=0.5", "/api/spectra/x-star/"):
            response = self.client.get(url)
            assert response.status_code == status.HTTP_200_OK, url

    def test_schema(self) -> None:
        """Test that the OpenAPI schema lists the lab's endpoints"""
        response = self.client.get("/schema/", HTTP_ACCEPT="application/json")

        assert response.status_code == status.HTTP_200_OK
        paths = json.loads(response.content)["paths"]
        assert "/api/runs/" in paths
        assert "/api/spectra/bounds/" in paths

    def test_swagger_ui(self) -> None:
        """Test that the Swagger UI page renders"""
        assert self.client.get("/schema/swagger-ui/").status_code == status.HTTP_200_OK


class ArchiveIntegrationTest(APITestCase):
    """Runs recorded with --record are listed by the API"""

    def setUp(self) -> None:
        """Clear cache before each test"""
        cache.clear()

    def test_recorded_run_is_listed(self) -> None:
        """Test that a cached empty listing is dropped once a run is recorded"""
        assert self.client.get("/api/runs/").data["count"] == 0

        assert run_cli("bounds", "--record").code == 0

        response = self.client.get("/api/runs/")
        assert response.data["count"] == 1
        entry = response.data["results"][0]
        assert entry["command"] == "bounds"
        assert entry["result"]["c_upper"] > entry["result"]["c_lower"]
