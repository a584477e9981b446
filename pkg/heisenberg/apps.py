from django.apps import AppConfig


class HeisenbergConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "heisenberg"
    verbose_name = "Heisenberg group"
