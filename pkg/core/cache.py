"""
Response caching for the lab's read-only API.

Two things are cached:

1. Paginated listings of archived runs, keyed by their query parameters and
   dropped whenever a run is saved or deleted (see ``core.signals``).
2. Closed-form results that never change for a given input, such as the
   Chung bound table.

Cache Key Strategy:
- Format: ``{app}:{model}:{action}:{hash(params)}``
- Example: ``core:runs:list:3f1c0e8a9b2d4c5e``
"""

import hashlib
import json
from collections.abc import Callable
from typing import Any, ClassVar

from django.conf import settings
from django.core.cache import cache
from rest_framework import status
from rest_framework.request import Request
from rest_framework.response import Response


class CacheKeyGenerator:
    """Generate consistent cache keys for API queries."""

    DEFAULT_TTL = settings.HEISLAB["CACHE_TTL"]

    @staticmethod
    def _serialize_params(params: dict[str, object]) -> str:
        return json.dumps(sorted(params.items()), default=str, sort_keys=True)

    @staticmethod
    def _hash_params(params_str: str) -> str:
        return hashlib.sha256(params_str.encode()).hexdigest()[:16]

    @staticmethod
    def generate_key(app: str, model: str, action: str, **params: object) -> str:
        """
        Examples:
            >>> CacheKeyGenerator.generate_key("spectra", "bounds", "retrieve")
            'spectra:bounds:retrieve'
            >>> CacheKeyGenerator.generate_key("core", "runs", "list", page="2")
            'core:runs:list:...'
        """
        if not params:
            return f"{app}:{model}:{action}"
        params_hash = CacheKeyGenerator._hash_params(CacheKeyGenerator._serialize_params(params))
        return f"{app}:{model}:{action}:{params_hash}"

    @staticmethod
    def generate_invalidation_keys(app: str, model: str) -> list[str]:
        """Patterns to drop after a write. Listing keys hash their parameters, so every listing goes."""
        return [f"{app}:{model}:list:*"]


class CacheManager:
    @staticmethod
    def get_cached(key: str, default: object = None) -> object:
        return cache.get(key, default)

    @staticmethod
    def set_cached(key: str, value: object, timeout: int | None = None) -> None:
        cache.set(key, value, CacheKeyGenerator.DEFAULT_TTL if timeout is None else timeout)

    @staticmethod
    def get_or_compute(key: str, compute: Callable[[], Any], timeout: int | None = None) -> Any:
        value = CacheManager.get_cached(key)
        if value is None:
            value = compute()
            CacheManager.set_cached(key, value, timeout)
        return value

    @staticmethod
    def _stored_keys() -> list[str]:
        # LocMemCache stores ":<version>:<key>"
        return [stored.split(":", 2)[-1] for stored in list(getattr(cache, "_cache", {}))]

    @staticmethod
    def invalidate_cache(patterns: str | list[str]) -> None:
        """
        Drop every key matching the given ``prefix*`` patterns: through
        ``delete_pattern`` when the backend has it, by scanning the store on
        LocMemCache.
        """
        pattern_list = [patterns] if isinstance(patterns, str) else patterns
        delete_pattern = getattr(cache, "delete_pattern", None)
        for pattern in pattern_list:
            if delete_pattern is not None:
                delete_pattern(pattern)
                continue
            prefix = pattern.rstrip("*")
            cache.delete_many([key for key in CacheManager._stored_keys() if key.startswith(prefix)])


class CacheParamBuilder:
    # Parameters that only change presentation
    NEVER_CACHE_PARAMS: ClassVar[set[str]] = {"format", "callback"}

    @staticmethod
    def build_from_request(request: Request) -> dict[str, object]:
        params: dict[str, object] = {
            name: value
            for name, value in request.query_params.items()
            if name not in CacheParamBuilder.NEVER_CACHE_PARAMS and name != "page"
        }
        params["page"] = request.query_params.get("page", "1")
        return params


class CacheMixin:
    """
    Caches successful ``list`` responses of a read-only ViewSet.

    Writes never go through the API, so invalidation is driven by model
    signals rather than by ``perform_create``/``perform_destroy`` hooks.
    """

    cache_app: str = "app"
    cache_model: str = "model"
    cache_ttl: int | None = None

    def list(self, request: Request, *args: object, **kwargs: object) -> Response:
        params = CacheParamBuilder.build_from_request(request)
        cache_key = CacheKeyGenerator.generate_key(self.cache_app, self.cache_model, "list", **params)
        cached_data = CacheManager.get_cached(cache_key)
        if cached_data is not None:
            return Response(cached_data, status=status.HTTP_200_OK)

        response = super().list(request, *args, **kwargs)
        if response.status_code == status.HTTP_200_OK:
            CacheManager.set_cached(cache_key, response.data, self.cache_ttl)
        return response
