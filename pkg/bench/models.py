from typing import (
    Dict,
    Optional,
)
from uuid import (
    UUID,
    uuid4,
)

from django.core.exceptions import ObjectDoesNotExist
from django.db.models import (
    CASCADE,
    BigIntegerField,
    CharField,
    DateTimeField,
    FloatField,
    ForeignKey,
    IntegerField,
    JSONField,
    Manager,
    Model,
    TextChoices,
    TextField,
    UUIDField,
)


class Algorithm(TextChoices):

    EXACT = 'exact', 'Exact (max flow)'
    BRUTE = 'brute', 'Brute force'
    G_ORACLE = 'g_oracle', 'Greedy peeling with known weights'
    DSLIN = 'dslin', 'DS-Lin'
    DSSR = 'dssr', 'DS-SR'
    NAIVE = 'naive', 'Naive'
    R_ORACLE = 'r_oracle', 'R-Oracle'


class ExperimentBatch(Model):

    class Meta:
        verbose_name = 'experiment batch'
        verbose_name_plural = 'experiment batches'
        ordering = (
            '-created_time',
        )

    objects: Manager
    DoesNotExist: ObjectDoesNotExist

    # Assigned in save(), so an unsaved batch has no id
    id: UUID = UUIDField(
        primary_key=True,
        editable=False,
        verbose_name='Batch UUID'
    )
    name: str = CharField(blank=True, max_length=128)
    algorithm: str = CharField(max_length=16, choices=Algorithm.choices)
    graph_name: str = CharField(max_length=128)
    graph_path: str = TextField()
    weights_path: str = TextField(
        blank=True,
        help_text='Empty when knockout weights were generated for the batch'
    )
    config: Dict = JSONField(default=dict)
    opt: Optional[float] = FloatField(
        null=True,
        verbose_name='Optimal density under the true weights'
    )

    created_time = DateTimeField(auto_now_add=True)

    def save(self, *args, **kwargs) -> None:

        if not self.id:
            self.id = uuid4()

        super(ExperimentBatch, self).save(*args, **kwargs)

    def __str__(self) -> str:
        return self.name or f'{self.algorithm} on {self.graph_name}'


class RunRecord(Model):

    class Meta:
        verbose_name = 'run record'
        ordering = (
            'batch',
            'seed',
        )

    objects: Manager
    DoesNotExist: ObjectDoesNotExist

    batch: ExperimentBatch = ForeignKey(
        to=ExperimentBatch,
        on_delete=CASCADE,
        related_name='runs'
    )

    algo: str = CharField(max_length=16, choices=Algorithm.choices)
    graph: str = CharField(max_length=128)
    seed: int = BigIntegerField()
    budget: Optional[int] = BigIntegerField(null=True, blank=True)
    quality: Optional[float] = FloatField(null=True, blank=True)
    opt: Optional[float] = FloatField(null=True, blank=True)
    out_size: Optional[int] = IntegerField(null=True, blank=True)
    total_queries: Optional[int] = BigIntegerField(null=True, blank=True)
    single_edge_queries: Optional[int] = BigIntegerField(
        null=True,
        blank=True
    )
    elapsed_ms: Optional[float] = FloatField(null=True, blank=True)
    histogram: Dict = JSONField(
        default=dict,
        blank=True,
        help_text='Number of oracle queries per query size'
    )
    error: Optional[str] = TextField(
        null=True,
        editable=False,
        verbose_name='Run error message'
    )

    @property
    def run_ok(self) -> Optional[bool]:
        return self.pk and self.error is None

    @property
    def single_edge_fraction(self) -> Optional[float]:

        if not self.total_queries:
            return None

        return self.single_edge_queries / self.total_queries

    def __str__(self) -> str:
        return f'{self.algo} on {self.graph}, seed {self.seed}'
