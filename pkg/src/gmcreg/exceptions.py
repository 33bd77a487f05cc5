"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """An iterative routine failed to converge within its iteration budget.

    The partially-converged result is attached so callers can inspect or
    reuse it.

    Attributes
    ----------
    best : object
        Best estimate available when the iteration budget ran out.  A float
        for spectral-norm estimation, an ``InnerSolution`` for the penalty
        inner problem.
    iterations : int
        Number of iterations performed.
    """

    def __init__(self, message, best=None, iterations=0):
        super().__init__(message)
        self.best = best
        self.iterations = iterations
