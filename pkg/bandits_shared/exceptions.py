from typing import Optional


class DensestBanditsError(Exception):
    pass


class FileFormatError(DensestBanditsError, ValueError):

    def __init__(self, message: str, line_number: Optional[int] = None):

        self.line_number = line_number

        if line_number is not None:
            message = f'line {line_number}: {message}'

        super(FileFormatError, self).__init__(message)


class GraphFormatError(FileFormatError):
    pass


class WeightFileError(GraphFormatError):
    pass


class ConfigFileError(FileFormatError):
    pass


class DomainError(DensestBanditsError, ValueError):
    pass


class BudgetTooSmallError(DomainError):

    def __init__(self, budget: int, minimum_budget: int):

        self.budget = budget
        self.minimum_budget = minimum_budget

        super(BudgetTooSmallError, self).__init__(
            f'Budget {budget} is too small, the smallest feasible budget '
            f'is {minimum_budget}'
        )


class DegenerateIntervalError(DomainError):
    pass


class ArmFamilyError(DomainError):
    pass


class InternalConsistencyError(DensestBanditsError, RuntimeError):
    pass


class BudgetExceededError(InternalConsistencyError):
    pass
