"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a mathematical precondition of an operation."""


class LogTermRequiredError(DomainError):
    """A series ODE solution would need a logarithmic term.

    Raised when the resonance obstruction of a Frobenius-type recurrence
    does not vanish; this signals inadmissible coefficient data, not a
    solver limitation.
    """


class ConsistencyError(RuntimeError):
    """Over-determined constant matching failed beyond tolerance."""


class UnbalanceableError(DomainError):
    """No end configuration can make the flux polynomials sum to zero."""
