from typing import Optional


def check_stop(
    f_hat: float,
    width: float,
    size: int,
    radius: float,
    bound: float,
    epsilon: float,
    second_best: Optional[float] = None,
) -> bool:
    """
    Stopping rule for DS-Lin:

        f(S) - C ||chi_E(S)||_{A^-1} / |S|  >=  second + C U / 2 - epsilon

    ``second_best`` defaults to f(S) itself, which can only over-state the
    true second-best density.
    """

    second: float = f_hat if second_best is None else second_best

    return f_hat - radius * width / size >= second + radius * bound / 2 - epsilon
