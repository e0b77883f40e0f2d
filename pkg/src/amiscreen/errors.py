"""Exception types shared across the toolkit."""


class SchemaError(ValueError):
    """A table's columns do not match the declared schema."""


class ParseError(ValueError):
    """A cell could not be parsed; carries its row/column location."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


class StratificationError(ValueError):
    """A class-aware split or fold plan cannot be built from the given labels."""


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class SingularCovarianceError(ValueError):
    """A covariance matrix is singular and no regularization was requested."""

    def __init__(self, message: str, class_label: object = None):
        super().__init__(message)
        self.class_label = class_label
