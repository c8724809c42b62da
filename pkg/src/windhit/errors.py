"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NonConvergenceError(RuntimeError):
    """An iterative scheme (series or quadrature) hit its refinement cap
    before reaching the requested tolerance."""


class StepUnderflowError(RuntimeError):
    """A path simulation was configured with a non-positive or degenerate
    time step / step floor."""
