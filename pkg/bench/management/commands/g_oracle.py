from bench.utils.commands import ExperimentCommand


class Command(ExperimentCommand):

    help = 'Greedy peeling on the true weights'
    algorithm = 'g_oracle'
