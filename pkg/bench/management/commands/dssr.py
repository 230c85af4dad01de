from bench.utils.commands import ExperimentCommand


class Command(ExperimentCommand):

    help = 'Fixed-budget peeling from single-edge and star queries'
    algorithm = 'dssr'
    hyperparameters = (
        '--budget',
    )
