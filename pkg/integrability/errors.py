from typing import List


class SingularWeightError(ValueError):
    """A weight denominator vanished: the spectral argument sits on a pole."""


class SiteRangeError(ValueError):
    pass


class ConventionError(AssertionError):
    """The monodromy blocks do not reproduce the pseudovacuum actions.

    This is a programming error, never a user error.
    """


class DegenerateParametersError(ArithmeticError):
    pass


class DegenerateRootsError(ValueError):
    pass


class RootCollisionError(ArithmeticError):
    pass


class PermutationCapError(ValueError):
    pass


class SolverFailureError(ArithmeticError):
    trace: List[str]

    def __init__(self, message: str, trace: List[str]):
        super().__init__(message)
        self.trace = trace

    def __str__(self):
        tail = "; ".join(self.trace[-5:])
        return f"{super().__str__()} (last steps: {tail})" if tail else super().__str__()
