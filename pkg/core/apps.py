from django.apps import AppConfig


class CoreConfig(AppConfig):
    """App configuration for the core application (number theory services and commands)."""

    name = "core"
    verbose_name = "numlab"
