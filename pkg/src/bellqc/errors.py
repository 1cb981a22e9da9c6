"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class ContractViolationError(ValueError):
    """An operator or state fails a structural invariant (Hermiticity, norm)."""


class ParseError(InvalidInputError):
    """A dataset file could not be parsed."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f"{':' if where else 'line '}{line}"
        super().__init__(f"{where}: {message}" if where else message)


class NumericError(ArithmeticError):
    """A cost or gradient evaluation produced a non-finite value."""
