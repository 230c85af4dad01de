from django.contrib.admin.apps import AdminConfig


class DensestBanditsAdminConfig(AdminConfig):
    default_site = 'densest_bandits.admin.DensestBanditsAdminSite'
