"""Exception hierarchy shared by the whole package."""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad dimensions, invalid fan, ...)."""


class NotAmpleError(InputError):
    """Divisor fails strict convexity where the pipeline requires an ample one."""


class InternalError(RuntimeError):
    """An internal invariant of the engine broke; indicates a bug, not bad input."""


class CriterionMismatch(InternalError):
    """The exact counting oracle and the wall criterion disagree.

    Carries a ``reproducer`` dict (fan, divisor coefficients, multiplicities,
    both verdicts) so the offending instance can be replayed.
    """

    def __init__(self, message: str, reproducer: dict | None = None):
        super().__init__(message)
        self.reproducer = reproducer or {}
