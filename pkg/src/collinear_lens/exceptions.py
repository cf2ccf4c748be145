"""Exception types shared across the package.

Every numerical failure mode gets its own class so the CLI can map it to a
stable exit code and callers can catch exactly what they expect.
"""

from __future__ import annotations


class CollinearLensError(Exception):
    """Base class for all package-specific errors."""


class DataError(CollinearLensError):
    """Malformed input data: non-finite values, ragged CSV rows, bad names."""


class ConfigError(CollinearLensError):
    """Invalid run configuration (bad flags, missing required options)."""


class NumericalError(CollinearLensError):
    """Base for failures of numerical preconditions."""


class DegenerateRegressorError(NumericalError):
    """A regressor is constant (zero variance after centering).

    Univariate slopes on such a column are undefined, so it is rejected at
    fit time rather than silently producing NaNs.
    """

    def __init__(self, column: str):
        self.column = column
        super().__init__(f"explanatory column {column!r} is constant; "
                         "its slope is undefined")


class CompleteMulticollinearityError(NumericalError):
    """The centered design is rank deficient (exact linear dependence)."""

    def __init__(self, columns, rank: int, n_columns: int):
        self.columns = tuple(columns)
        self.rank = rank
        self.n_columns = n_columns
        names = ", ".join(self.columns) if self.columns else "<unidentified>"
        super().__init__(
            f"complete multicollinearity: design has rank {rank} < {n_columns}; "
            f"dependent column set: {names}"
        )


class StructuralCollinearityError(NumericalError):
    """The pairwise-slope matrix is too ill-conditioned to invert."""

    def __init__(self, condition_number: float):
        self.condition_number = condition_number
        super().__init__(
            "structural collinearity in the pairwise-slope matrix: "
            f"condition number {condition_number:.3e} exceeds the invertibility "
            "threshold"
        )


class OrderingMismatchError(CollinearLensError):
    """Cumulative weights and differences built under different orderings."""
