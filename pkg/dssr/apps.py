from django.apps import AppConfig


class DssrConfig(AppConfig):
    name = 'dssr'
    verbose_name = 'DS-SR (fixed budget)'
