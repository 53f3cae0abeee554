from django.conf import settings


def get_setting(name: str):
    """Read one knob from settings.NUMLAB (raises KeyError for unknown names)."""
    return settings.NUMLAB[name]
