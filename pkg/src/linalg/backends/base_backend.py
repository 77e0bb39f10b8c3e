"""
Base Linear-Algebra Backend

Abstract base class for the scalar backends. Matrices are the backend's
native dense type (sympy Matrix for exact rationals, numpy ndarray for
floating point); both support +, -, @, scalar *, .T, .shape and 2-D slicing,
which is all the assembly code relies on.
"""

import logging
from abc import ABC, abstractmethod
from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Union

from utils.errors import DimensionMismatchError
from ..subspace import SubspaceBasis

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, float]


class Definiteness(str, Enum):
    """Definiteness class of a symmetric matrix."""

    ZERO = 'zero'
    POSITIVE_DEFINITE = 'positive-definite'
    POSITIVE_SEMIDEFINITE = 'positive-semidefinite'
    NEGATIVE_DEFINITE = 'negative-definite'
    NEGATIVE_SEMIDEFINITE = 'negative-semidefinite'
    INDEFINITE = 'indefinite'

    @property
    def is_nonnegative(self) -> bool:
        return self in (Definiteness.POSITIVE_DEFINITE, Definiteness.POSITIVE_SEMIDEFINITE)

    @property
    def is_nonpositive(self) -> bool:
        return self in (Definiteness.NEGATIVE_DEFINITE, Definiteness.NEGATIVE_SEMIDEFINITE)


class BaseBackend(ABC):
    """Abstract base class for linear-algebra backends."""

    name = 'base'

    def __init__(self, **kwargs):
        """
        Initialize the backend.

        Args:
            **kwargs: Backend-specific configuration (e.g. float_tolerance)
        """
        self.config = kwargs
        logger.debug(f"Initialized {self.__class__.__name__}")

    # -- construction -----------------------------------------------------

    @abstractmethod
    def scalar(self, value: Any) -> Any:
        """Convert an int, Fraction, float or 'p/q' string to a native scalar."""

    @abstractmethod
    def matrix(self, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> Any:
        """Build a native matrix from row-major nested sequences."""

    @abstractmethod
    def zeros(self, rows: int, cols: int) -> Any:
        """rows x cols zero matrix."""

    @abstractmethod
    def eye(self, n: int) -> Any:
        """n x n identity."""

    @abstractmethod
    def hstack(self, mats: Sequence[Any]) -> Any:
        """Concatenate matrices with equal row counts side by side."""

    @abstractmethod
    def freeze(self, m: Any) -> Any:
        """Immutable copy of m for storage inside value objects."""

    @abstractmethod
    def to_python(self, m: Any) -> List[List[Number]]:
        """Row-major entries as Fractions (exact) or floats."""

    # -- queries ------------------------------------------------------------

    @abstractmethod
    def rank(self, m: Any) -> int:
        """Dimension of the column space."""

    @abstractmethod
    def column_space(self, m: Any) -> SubspaceBasis:
        """Basis spanning exactly the columns of m."""

    @abstractmethod
    def extend_basis(self, basis: Any, candidates: Any) -> Any:
        """
        Columns that extend basis to span basis + candidates.

        Args:
            basis: Columns from a SubspaceBasis of this backend (may be empty)
            candidates: Matrix with the same row count

        Returns:
            Matrix whose columns, appended to basis, keep it independent and
            span every candidate column
        """

    @abstractmethod
    def solve_right(self, c: Any, rhs: Any) -> Optional[Any]:
        """Some X with c @ X = rhs, or None when a column of rhs is outside im(c)."""

    @abstractmethod
    def is_zero(self, m: Any) -> bool:
        """True when every entry is zero (within tolerance on the float backend)."""

    @abstractmethod
    def equal(self, a: Any, b: Any) -> bool:
        """Entrywise equality (within tolerance on the float backend)."""

    @abstractmethod
    def definiteness(self, m: Any) -> Definiteness:
        """Definiteness class of a symmetric matrix."""

    # -- shared helpers ---------------------------------------------------

    def block_diag(self, blocks: Sequence[Any]) -> Any:
        """Block-diagonal matrix with the given blocks in order."""
        rows = sum(b.shape[0] for b in blocks)
        cols = sum(b.shape[1] for b in blocks)
        result = self.zeros(rows, cols)
        r = c = 0
        for b in blocks:
            h, w = b.shape
            if h and w:
                result[r:r + h, c:c + w] = b
            r += h
            c += w
        return result

    def block(self, m: Any, i: int, j: int, height: int, width: int) -> Any:
        """Block (i, j) of m when m is tiled by height x width blocks."""
        return m[i * height:(i + 1) * height, j * width:(j + 1) * width]

    def is_symmetric(self, m: Any) -> bool:
        return m.shape[0] == m.shape[1] and self.equal(m, m.T)

    def is_invertible(self, m: Any) -> bool:
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]

    def require_shape(self, m: Any, shape: tuple, what: str) -> None:
        """Raise DimensionMismatchError unless m has the given shape."""
        if tuple(m.shape) != tuple(shape):
            raise DimensionMismatchError(f"{what} has shape {tuple(m.shape)}, expected {tuple(shape)}")
