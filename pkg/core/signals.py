"""
Signals for the core app.

Drops cached run listings whenever an archived run is created, updated or
deleted.
"""

from django.db.models.signals import post_delete, post_save
from django.dispatch import receiver

from .cache import CacheKeyGenerator, CacheManager
from .models import ExperimentRun


@receiver(post_save, sender=ExperimentRun)
@receiver(post_delete, sender=ExperimentRun)
def invalidate_run_cache_on_change(**_kwargs: object) -> None:
    for key in CacheKeyGenerator.generate_invalidation_keys("core", "runs"):
        CacheManager.invalidate_cache(key)
