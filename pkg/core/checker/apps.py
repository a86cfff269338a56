from django.apps import AppConfig


class CheckerConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'core.checker'
    verbose_name = 'Verification runs'
