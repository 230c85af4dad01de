from django.apps import AppConfig


class DslinConfig(AppConfig):
    name = 'dslin'
    verbose_name = 'DS-Lin (fixed confidence)'
