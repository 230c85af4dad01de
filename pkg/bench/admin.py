from django.contrib.admin import (
    ModelAdmin,
    TabularInline,
    site,
)

from bench.models import (
    ExperimentBatch,
    RunRecord,
)


RUN_RECORD_FIELDS = (
    'algo',
    'graph',
    'seed',
    'budget',
    'quality',
    'opt',
    'out_size',
    'total_queries',
    'single_edge_queries',
    'elapsed_ms',
)


class ReadOnlyAdmin(ModelAdmin):

    def has_change_permission(self, *args, **kwargs):
        return False  # Records come from the experiment commands only

    def has_add_permission(self, *args, **kwargs):
        return False


class RunRecordInline(TabularInline):

    model = RunRecord
    fields = readonly_fields = RUN_RECORD_FIELDS
    extra = 0
    can_delete = False
    show_change_link = True

    def has_add_permission(self, *args, **kwargs):
        return False


class ExperimentBatchAdmin(ReadOnlyAdmin):

    list_display = (
        '__str__',
        'algorithm',
        'graph_name',
        'opt',
        'created_time',
    )
    list_filter = (
        'algorithm',
        'graph_name',
    )

    readonly_fields = (
        'name',
        'algorithm',
        'graph_name',
        'opt',
        'created_time',
        'id',
        'graph_path',
        'weights_path',
        'config',
    )

    fieldsets = (
        (
            None,
            {
                'fields': (
                    'name',
                    'algorithm',
                    'graph_name',
                    'opt',
                    'created_time',
                )
            }
        ),
        (
            'Advanced information',
            {
                'classes': (
                    'collapse',
                ),
                'fields': (
                    'id',
                    'graph_path',
                    'weights_path',
                    'config',
                ),
            }
        ),
    )

    inlines = (
        RunRecordInline,
    )


class RunRecordAdmin(ReadOnlyAdmin):

    def run_ok(self, obj: RunRecord):
        return '✓' if obj.run_ok else '✗'

    run_ok.short_description = 'Run finished successfully?'

    list_display = (
        '__str__',
        'quality',
        'opt',
        'total_queries',
        'run_ok',
    )
    list_filter = (
        'algo',
        'graph',
    )

    readonly_fields = RUN_RECORD_FIELDS + (
        'run_ok',
        'batch',
        'id',
        'histogram',
        'error',
    )

    fieldsets = (
        (
            None,
            {
                'fields': RUN_RECORD_FIELDS + (
                    'run_ok',
                )
            }
        ),
        (
            'Advanced information',
            {
                'classes': (
                    'collapse',
                ),
                'fields': (
                    'batch',
                    'id',
                    'histogram',
                    'error',
                ),
            }
        ),
    )


site.register(ExperimentBatch, ExperimentBatchAdmin)
site.register(RunRecord, RunRecordAdmin)
