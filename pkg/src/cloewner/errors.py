"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NumericalOverflowError(ArithmeticError):
    """A flow state became non-finite; distinct from a detected life-time."""


class SingularityError(ArithmeticError):
    """The backward flow came within machine distance of the ODE singularity."""


class InconsistencyError(RuntimeError):
    """Two routes that must agree, such as trace versus forward flow, did not."""
