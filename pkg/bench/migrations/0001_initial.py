from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentBatch',
            fields=[
                ('id', models.UUIDField(editable=False, primary_key=True, serialize=False, verbose_name='Batch UUID')),
                ('name', models.CharField(blank=True, max_length=128)),
                ('algorithm', models.CharField(choices=[('exact', 'Exact (max flow)'), ('brute', 'Brute force'), ('g_oracle', 'Greedy peeling with known weights'), ('dslin', 'DS-Lin'), ('dssr', 'DS-SR'), ('naive', 'Naive'), ('r_oracle', 'R-Oracle')], max_length=16)),
                ('graph_name', models.CharField(max_length=128)),
                ('graph_path', models.TextField()),
                ('weights_path', models.TextField(blank=True, help_text='Empty when knockout weights were generated for the batch')),
                ('config', models.JSONField(default=dict)),
                ('opt', models.FloatField(null=True, verbose_name='Optimal density under the true weights')),
                ('created_time', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'experiment batch',
                'verbose_name_plural': 'experiment batches',
                'ordering': ('-created_time',),
            },
        ),
        migrations.CreateModel(
            name='RunRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('algo', models.CharField(choices=[('exact', 'Exact (max flow)'), ('brute', 'Brute force'), ('g_oracle', 'Greedy peeling with known weights'), ('dslin', 'DS-Lin'), ('dssr', 'DS-SR'), ('naive', 'Naive'), ('r_oracle', 'R-Oracle')], max_length=16)),
                ('graph', models.CharField(max_length=128)),
                ('seed', models.BigIntegerField()),
                ('budget', models.BigIntegerField(blank=True, null=True)),
                ('quality', models.FloatField(blank=True, null=True)),
                ('opt', models.FloatField(blank=True, null=True)),
                ('out_size', models.IntegerField(blank=True, null=True)),
                ('total_queries', models.BigIntegerField(blank=True, null=True)),
                ('single_edge_queries', models.BigIntegerField(blank=True, null=True)),
                ('elapsed_ms', models.FloatField(blank=True, null=True)),
                ('histogram', models.JSONField(blank=True, default=dict, help_text='Number of oracle queries per query size')),
                ('error', models.TextField(editable=False, null=True, verbose_name='Run error message')),
                ('batch', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='runs', to='bench.experimentbatch')),
            ],
            options={
                'verbose_name': 'run record',
                'ordering': ('batch', 'seed'),
            },
        ),
    ]
