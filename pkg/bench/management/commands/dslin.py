from bench.utils.commands import ExperimentCommand


class Command(ExperimentCommand):

    help = 'Linear-bandit densest subgraph search over a family of arms'
    algorithm = 'dslin'
    hyperparameters = (
        '--epsilon',
        '--delta',
        '--lambda',
        '--L',
        '--k',
        '--family-seed',
        '--max-iters',
        '--stop-mode',
        '--trace-every',
        '--qp-exact-max-dim',
    )
