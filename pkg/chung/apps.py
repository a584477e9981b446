from django.apps import AppConfig


class ChungConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "chung"
    verbose_name = "Law-of-iterated-logarithm diagnostics"
