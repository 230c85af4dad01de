from bench.utils.commands import ExperimentCommand


class Command(ExperimentCommand):

    help = 'Densest subgraph by enumerating every vertex subset (n <= 20)'
    algorithm = 'brute'
