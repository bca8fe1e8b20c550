"""Exception hierarchy shared by the numerical core and the CLI."""
from typing import Any, Iterable, List, Optional, Tuple


class RidgeError(Exception):
    """Base class for every error raised by this package"""


class DataError(RidgeError, ValueError):
    """Input data could not be read or does not satisfy the model assumptions"""


class DatasetNotFoundError(DataError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"Dataset file not found: {path}")


class UnknownDatasetError(DataError):
    def __init__(self, name: str, valid: Iterable[str]):
        self.name = name
        self.valid = sorted(valid)
        super().__init__(f"Unknown dataset '{name}'. Valid ids: {', '.join(self.valid)}")


class DataParseError(DataError):
    """A CSV cell or row could not be parsed; carries its location when known"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[str] = None):
        self.line = line
        self.column = column
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column '{column}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class DegenerateColumnError(DataError):
    def __init__(self, index: int, label: Optional[str] = None):
        self.index = index
        name = label or f"Column {index}"
        super().__init__(f"{name} has zero variance and cannot be standardized")


class NumericalError(RidgeError, ArithmeticError):
    """A numerical precondition failed or an algorithm did not converge"""


class NotSymmetricError(NumericalError):
    def __init__(self, asymmetry: float):
        self.asymmetry = asymmetry
        super().__init__(f"Matrix is not symmetric (max asymmetry {asymmetry:.3e})")


class ConvergenceError(NumericalError):
    def __init__(self, sweeps: int, off_norm: float):
        self.sweeps = sweeps
        self.off_norm = off_norm
        super().__init__(
            f"Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:.3e})"
        )


class SingularMatrixError(NumericalError):
    """X'X is singular or has a non-positive eigenvalue"""


class NotPositiveDefiniteError(NumericalError):
    """Matrix handed to a Cholesky solve is not positive definite"""


class DegenerateCoefficientError(NumericalError):
    """An estimator formula divides by a zero coefficient (or a zero variance estimate)"""

    def __init__(self, estimator: str, index: Optional[int] = None, reason: str = "zero coefficient"):
        self.estimator = estimator
        self.index = index
        where = f" at coordinate {index}" if index is not None else ""
        super().__init__(f"Estimator {estimator}: {reason}{where}")


class GridRunError(RidgeError):
    """One or more simulation cells failed; completed results are kept"""

    def __init__(self, completed: List[Any], failures: List[Tuple[Any, BaseException]]):
        self.completed = completed
        self.failures = failures
        labels = "; ".join(f"{cell.label()}: {error}" for cell, error in failures)
        super().__init__(f"{len(failures)} simulation cell(s) failed: {labels}")

