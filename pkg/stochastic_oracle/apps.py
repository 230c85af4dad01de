from django.apps import AppConfig


class StochasticOracleConfig(AppConfig):
    name = 'stochastic_oracle'
    verbose_name = 'Sampling oracle'
