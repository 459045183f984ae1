"""Exception types shared across the package.

Validation problems (bad shapes, bad parameter ranges) derive from
``ValueError``; numerical failures (non-convergence, singular systems)
derive from ``RuntimeError``.  The command line maps the former to exit
code 1 and the latter to exit code 2.
"""


class DimensionMismatchError(ValueError):
    """Two inputs that must share a trait range or state count do not."""


class EmptyPopulationError(ValueError):
    """A population statistic was requested for a (numerically) empty population."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance.

    Carries the last residual and the iteration count so callers can
    report how close the solver got.
    """

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SingularMatrixError(RuntimeError):
    """A linear system was singular beyond the pivot tolerance.

    For stationary-distribution solves this signals a reducible or
    near-reducible chain.
    """
