"""
Exact Rational Backend

Dense rational linear algebra on sympy matrices. Elimination runs on
sympy's DomainMatrix over QQ, so verdicts such as "rank = 6" are exact.
"""

import logging
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, Rational
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from utils.errors import DimensionMismatchError
from ..subspace import SubspaceBasis
from .base_backend import BaseBackend, Definiteness

logger = logging.getLogger(__name__)


class ExactBackend(BaseBackend):
    """Exact rational arithmetic; comparisons against zero are exact."""

    name = 'exact'

    def scalar(self, value: Any) -> Rational:
        if isinstance(value, Rational):
            return value
        if isinstance(value, Fraction):
            return Rational(value.numerator, value.denominator)
        if isinstance(value, str):
            frac = Fraction(value.strip())
            return Rational(frac.numerator, frac.denominator)
        if isinstance(value, float):
            frac = Fraction(value)
            return Rational(frac.numerator, frac.denominator)
        return Rational(value)

    def matrix(self, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> Matrix:
        rows = [list(row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(row) != cols for row in rows):
            raise DimensionMismatchError(f"Ragged matrix rows; expected {cols} entries per row")
        return Matrix(len(rows), cols, [self.scalar(x) for row in rows for x in row])

    def zeros(self, rows: int, cols: int) -> Matrix:
        return Matrix.zeros(rows, cols)

    def eye(self, n: int) -> Matrix:
        return Matrix.eye(n)

    def hstack(self, mats: Sequence[Any]) -> Matrix:
        mats = list(mats)
        nonempty = [m for m in mats if m.shape[1] > 0]
        if not nonempty:
            return Matrix.zeros(mats[0].shape[0] if mats else 0, 0)
        return Matrix.hstack(*nonempty)

    def freeze(self, m: Any) -> ImmutableMatrix:
        return ImmutableMatrix(m)

    def to_python(self, m: Any) -> List[List[Fraction]]:
        return [
            [Fraction(int(m[i, j].p), int(m[i, j].q)) for j in range(m.shape[1])]
            for i in range(m.shape[0])
        ]

    def _rref(self, m: Any) -> Tuple[DomainMatrix, Tuple[int, ...]]:
        dm = DomainMatrix.from_Matrix(Matrix(m)).convert_to(QQ)
        return dm.rref()

    def rank(self, m: Any) -> int:
        if 0 in m.shape:
            return 0
        _, pivots = self._rref(m)
        return len(pivots)

    def column_space(self, m: Any) -> SubspaceBasis:
        """Reduced-echelon basis: the nonzero rows of rref(m^T), transposed."""
        rows = m.shape[0]
        if 0 in m.shape:
            return SubspaceBasis(rows, Matrix.zeros(rows, 0), self.name)
        reduced, pivots = self._rref(m.T)
        echelon = reduced.to_Matrix()
        basis = echelon[:len(pivots), :].T if pivots else Matrix.zeros(rows, 0)
        return SubspaceBasis(rows, basis, self.name)

    def extend_basis(self, basis: Any, candidates: Any) -> Matrix:
        rows = candidates.shape[0]
        if candidates.shape[1] == 0:
            return Matrix.zeros(rows, 0)
        offset = basis.shape[1]
        stacked = self.hstack([basis, candidates])
        _, pivots = self._rref(stacked)
        fresh = [p - offset for p in pivots if p >= offset]
        if not fresh:
            return Matrix.zeros(rows, 0)
        return self.hstack([candidates[:, j:j + 1] for j in fresh])

    def solve_right(self, c: Any, rhs: Any) -> Optional[Matrix]:
        if c.shape[0] != rhs.shape[0]:
            raise DimensionMismatchError(f"solve_right: c has {c.shape[0]} rows, rhs has {rhs.shape[0]}")
        if c.shape[0] == 0:
            return Matrix.zeros(c.shape[1], rhs.shape[1])
        if c.shape[1] == 0 or rhs.shape[1] == 0:
            return Matrix.zeros(c.shape[1], rhs.shape[1]) if self.is_zero(rhs) else None
        try:
            solution, params = Matrix(c).gauss_jordan_solve(Matrix(rhs))
        except ValueError:
            return None
        if params.shape[0]:
            solution = solution.xreplace({p: 0 for p in params})
        return solution

    def is_zero(self, m: Any) -> bool:
        return all(x == 0 for x in m)

    def equal(self, a: Any, b: Any) -> bool:
        return tuple(a.shape) == tuple(b.shape) and self.is_zero(a - b)

    def definiteness(self, m: Any) -> Definiteness:
        m = Matrix(m)
        if self.is_zero(m):
            return Definiteness.ZERO
        if m.is_positive_definite:
            return Definiteness.POSITIVE_DEFINITE
        if m.is_positive_semidefinite:
            return Definiteness.POSITIVE_SEMIDEFINITE
        if m.is_negative_definite:
            return Definiteness.NEGATIVE_DEFINITE
        if m.is_negative_semidefinite:
            return Definiteness.NEGATIVE_SEMIDEFINITE
        return Definiteness.INDEFINITE
