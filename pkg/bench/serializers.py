import os
from typing import (
    Any,
    Dict,
    List,
    Union,
)

from django.conf import settings
from rest_framework.fields import (
    BooleanField,
    CharField,
    ChoiceField,
    Field,
    FloatField,
    IntegerField,
    ReadOnlyField,
)
from rest_framework.serializers import (
    ModelSerializer,
    PrimaryKeyRelatedField,
    Serializer,
    ValidationError,
)

from bench.models import (
    Algorithm,
    ExperimentBatch,
    RunRecord,
)
from bench.utils.config import ExperimentConfig
from bench.utils.csv_io import RESULT_FIELDS
from dslin.utils.runner import StopMode
from stochastic_oracle.utils.oracle import (
    MAX_SEED,
    NoiseKind,
)


# Slack allowed on quality <= OPT
OPT_SLACK: float = 1e-9


class SeedListField(Field):
    """
    Seeds as a list of integers, or as text such as "1,2,3", "1-100" or
    "0-4,10".
    """

    default_error_messages = {
        'invalid': 'Expected seeds like "1,2,3" or "1-100".',
        'empty': 'At least one seed is required.',
        'range': 'Seeds must lie in [0, 2^64).',
    }

    def to_internal_value(self, data: Union[str, List[int]]) -> List[int]:

        seeds: List[int] = []

        try:
            if isinstance(data, str):

                for part in data.replace(' ', '').split(','):

                    if not part:
                        continue

                    first, sep, last = part.partition('-')
                    seeds.extend(
                        range(int(first), int(last) + 1) if sep else [int(first)]
                    )

            else:
                seeds = [int(seed) for seed in data]

        except (TypeError, ValueError):
            self.fail('invalid')

        if not seeds:
            self.fail('empty')

        if any(not 0 <= seed < MAX_SEED for seed in seeds):
            self.fail('range')

        return seeds

    def to_representation(self, value: List[int]) -> List[int]:
        return list(value)


class ExperimentConfigSerializer(Serializer):
    """Validates a flat key=value experiment configuration."""

    algorithm = ChoiceField(choices=Algorithm.choices)
    graph = CharField()
    weights = CharField(required=False, allow_null=True, allow_blank=True)
    weight_seed = IntegerField(default=0, min_value=0)
    seeds = SeedListField(default=lambda: [0])
    out = CharField(default=lambda: settings.DSB_RESULTS_DIR)
    name = CharField(default='', allow_blank=True)
    noise = ChoiceField(
        choices=[kind.value for kind in NoiseKind],
        default=NoiseKind.GAUSSIAN.value
    )
    noise_scale = FloatField(default=lambda: settings.DSLIN_R)
    workers = IntegerField(default=lambda: settings.DSB_WORKERS, min_value=1)

    budget = IntegerField(required=False, allow_null=True, min_value=1)

    epsilon = FloatField(default=lambda: settings.DSLIN_EPSILON, min_value=0)
    delta = FloatField(default=lambda: settings.DSLIN_DELTA)
    lam = FloatField(default=lambda: settings.DSLIN_LAMBDA)
    weight_bound = FloatField(
        default=lambda: settings.DSLIN_L,
        allow_null=True,
        min_value=0
    )
    max_iters = IntegerField(
        default=lambda: settings.DSLIN_MAIN_LOOP_CAP,
        min_value=0
    )
    stop_mode = ChoiceField(
        choices=[mode.value for mode in StopMode],
        default=StopMode.CONSERVATIVE.value
    )
    trace_every = IntegerField(
        default=lambda: settings.DSLIN_TRACE_EVERY,
        min_value=1
    )
    qp_exact_max_dim = IntegerField(
        default=lambda: settings.QP_EXACT_MAX_DIM,
        min_value=0
    )
    k = IntegerField(default=lambda: settings.DSLIN_K, min_value=3)
    family_seed = IntegerField(default=0, min_value=0)

    gamma = FloatField(default=lambda: settings.R_ORACLE_GAMMA)
    r_epsilon = FloatField(default=lambda: settings.R_ORACLE_EPSILON)
    literal_lower = BooleanField(default=False)

    def validate_graph(self, value: str) -> str:

        if not os.path.isfile(value):
            raise ValidationError(f'No graph file at "{value}"')

        return value

    def validate_weights(self, value: str) -> str:

        if value and not os.path.isfile(value):
            raise ValidationError(f'No weight file at "{value}"')

        return value or None

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:

        errors: Dict[str, str] = {}

        if not 0 < attrs['delta'] < 1:
            errors['delta'] = 'Must lie in (0, 1).'

        if not attrs['lam'] > 0:
            errors['lam'] = 'Must be positive.'

        if not 0 < attrs['gamma'] < 1:
            errors['gamma'] = 'Must lie in (0, 1).'

        if not attrs['r_epsilon'] > 0:
            errors['r_epsilon'] = 'Must be positive.'

        if not attrs['noise_scale'] > 0:
            errors['noise_scale'] = 'Must be positive.'

        if errors:
            raise ValidationError(errors)

        return attrs

    def to_config(self) -> ExperimentConfig:

        data: Dict[str, Any] = dict(self.validated_data)
        data['seeds'] = tuple(data['seeds'])

        return ExperimentConfig(**data)


class RunRecordSerializer(ModelSerializer):
    """
    Serves the API and parses results CSV rows, which carry only the result
    columns.
    """

    class Meta:
        model = RunRecord
        fields = RESULT_FIELDS + (
            'id',
            'batch',
            'histogram',
            'error',
            'run_ok',
        )
        read_only_fields = (
            'id',
            'batch',
            'histogram',
            'error',
        )

    run_ok = ReadOnlyField()

    def validate(self, attrs: Dict[str, Any]) -> Dict[str, Any]:

        quality = attrs.get('quality')
        opt = attrs.get('opt')

        if (
            quality is not None
            and opt is not None
            and quality > opt + OPT_SLACK * max(1.0, abs(opt))
        ):
            raise ValidationError(
                {'quality': f'Quality {quality} exceeds OPT {opt}.'}
            )

        return attrs


class ExperimentBatchSerializer(ModelSerializer):

    class Meta:
        model = ExperimentBatch
        fields = read_only_fields = (
            'id',
            'name',
            'algorithm',
            'graph_name',
            'graph_path',
            'weights_path',
            'config',
            'opt',
            'created_time',
            'runs',
        )

    runs = PrimaryKeyRelatedField(many=True, read_only=True)
