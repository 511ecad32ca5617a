"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates an operation's precondition."""


class EscapeError(DomainError):
    """An orbit left the unit interval where the operation needs it to stay."""
