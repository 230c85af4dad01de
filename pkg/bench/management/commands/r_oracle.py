from bench.utils.commands import ExperimentCommand


class Command(ExperimentCommand):

    help = 'Interval-refining baseline started from [w - 1, w + 1]'
    algorithm = 'r_oracle'
    hyperparameters = (
        '--gamma',
        '--r-epsilon',
    )
    accepts_literal_lower = True
