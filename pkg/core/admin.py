from django.contrib import admin

from .models import ExperimentRun


@admin.register(ExperimentRun)
class ExperimentRunAdmin(admin.ModelAdmin):
    list_display = ("id", "command", "seed", "created_at")
    list_filter = ("command", "created_at")
    search_fields = ("command", "seed")
    readonly_fields = ("command", "seed", "parameters", "result", "created_at")
