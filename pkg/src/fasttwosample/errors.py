"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class DataError(ValueError):
    """Input data could not be parsed or is inconsistent.

    ``row`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, path=None, row=None, column=None):
        self.path = path
        self.row = row
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class SingularMatrixError(ArithmeticError):
    """A symmetric solve failed even after ridge escalation."""

    def __init__(self, message, ridge):
        self.ridge = ridge
        super().__init__(f"{message} (last ridge tried: {ridge:.3e})")
