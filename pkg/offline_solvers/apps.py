from django.apps import AppConfig


class OfflineSolversConfig(AppConfig):
    name = 'offline_solvers'
    verbose_name = 'Offline densest subgraph solvers'
