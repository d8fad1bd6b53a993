"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """Input violates a documented precondition."""


class NotPositiveSemidefinite(ValueError):
    """Matrix has an eigenvalue below the PSD tolerance."""


class NumericFailure(RuntimeError):
    """An iterative routine did not converge.

    ``best_value`` holds the best estimate reached before giving up, when one exists.
    """

    def __init__(self, message: str, best_value: float | None = None):
        super().__init__(message)
        self.best_value = best_value
