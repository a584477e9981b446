from typing import ClassVar

from django.db import models


class ExperimentRun(models.Model):
    """
    One archived CLI run: the subcommand, its seed and parameters, and the
    JSON record it emitted. Written only by ``--record``; the API exposes
    the archive read-only.
    """

    command = models.CharField(max_length=50, verbose_name="Command")
    # Decimal text: a 64-bit unsigned seed does not fit a signed BigIntegerField.
    seed = models.CharField(max_length=20, verbose_name="Seed")
    parameters = models.JSONField(default=dict, verbose_name="Parameters")
    result = models.JSONField(default=dict, verbose_name="Result")
    created_at = models.DateTimeField(auto_now_add=True, verbose_name="Created At")

    class Meta:
        verbose_name = "Experiment Run"
        verbose_name_plural = "Experiment Runs"
        ordering: ClassVar[list[str]] = ["-created_at", "-id"]

    def __str__(self) -> str:
        return f"{self.command} (seed {self.seed})"
