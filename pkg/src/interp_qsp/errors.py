"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Malformed or out-of-domain input."""


class PreconditionError(ValueError):
    """Input violates an operation's mathematical precondition."""


class BranchCutError(PreconditionError):
    """An eigenphase sits on the principal-log branch cut at -1."""


class AliasingError(InvalidInputError):
    """Too few sample points for the requested degree."""


class NormViolationError(PreconditionError):
    """A function or matrix exceeds the unit bound it must respect."""


class ParityError(InvalidInputError):
    """A function does not have the parity it was declared with."""


class OutOfRegimeError(PreconditionError):
    """A closed-form bound is used outside the range where it holds."""


class UnknownFunctionError(InvalidInputError, KeyError):
    """Name not present in the function catalog."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""
