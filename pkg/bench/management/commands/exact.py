from bench.utils.commands import ExperimentCommand


class Command(ExperimentCommand):

    help = 'Exact densest subgraph on the true weights'
    algorithm = 'exact'
