"""densest_bandits URL Configuration

The admin lives at the site root, the read-only experiment results API under
``api/``.
"""
from typing import List

from django.contrib import admin
from django.urls import (
    path,
    include,
    URLPattern,
)

from rest_framework.routers import DefaultRouter

from bench.views import (
    ExperimentBatchViewSet,
    RunRecordViewSet,
)


api_router: DefaultRouter = DefaultRouter()
api_router.register(r'batches', ExperimentBatchViewSet)
api_router.register(r'runs', RunRecordViewSet)

urlpatterns: List[URLPattern] = [
    path('api/', include(api_router.urls)),
    path('', admin.site.urls),
]
