"""Exception types shared across the package."""


class SingularMatrixError(ArithmeticError):
    """Raised when LU factorization meets a pivot below the singularity threshold.

    The offending column index is stored in ``column``.
    """

    def __init__(self, column: int, pivot: float):
        self.column = column
        self.pivot = pivot
        super().__init__(
            f"matrix is singular to working precision (column {column}, pivot {pivot:.3e})"
        )


class ProblemFileError(ValueError):
    """Raised on malformed problem files; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
