from django.db.models import QuerySet
from rest_framework.viewsets import ReadOnlyModelViewSet

from bench.models import (
    ExperimentBatch,
    RunRecord,
)
from bench.serializers import (
    ExperimentBatchSerializer,
    RunRecordSerializer,
)


class ExperimentBatchViewSet(ReadOnlyModelViewSet):

    queryset = ExperimentBatch.objects.prefetch_related('runs')
    serializer_class = ExperimentBatchSerializer


class RunRecordViewSet(ReadOnlyModelViewSet):

    queryset = RunRecord.objects.all()
    serializer_class = RunRecordSerializer

    def get_queryset(self) -> QuerySet:

        queryset: QuerySet = super(RunRecordViewSet, self).get_queryset()
        batch: str = self.request.query_params.get('batch')

        if batch:
            queryset = queryset.filter(batch_id=batch)

        return queryset
