from bench.utils.commands import ExperimentCommand


class Command(ExperimentCommand):

    help = 'Uniform arm sampling with equal splitting of each observation'
    algorithm = 'naive'
    hyperparameters = (
        '--budget',
        '--k',
        '--family-seed',
        '--max-iters',
    )
