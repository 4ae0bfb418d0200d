"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Matrix or vector dimensions do not line up."""


class StructureError(ValueError):
    """A container violates a structural requirement (depth, breakpoints, signs)."""


class NumericError(ValueError):
    """Non-finite input, or a computed value left the double range."""


class DegenerateBudgetError(ValueError):
    """A norm cap is zero or negative, so the operator/Frobenius ratio is undefined."""


class ConvergenceError(RuntimeError):
    """Iteration cap reached before the requested tolerance.

    ``last_estimate`` carries the final iterate's value for diagnostics.
    """

    def __init__(self, message: str, last_estimate=None):
        super().__init__(message)
        self.last_estimate = last_estimate
