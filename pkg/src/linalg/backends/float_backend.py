"""
Floating-Point Backend

Dense float64 linear algebra on numpy arrays. Rank decisions use the
numerical-rank convention tau = max(rows, cols) * eps * sigma_max unless an
absolute tolerance is configured.
"""

import logging
from fractions import Fraction
from typing import Any, List, Optional, Sequence

import numpy as np
import scipy.linalg

from utils.errors import DimensionMismatchError
from ..subspace import SubspaceBasis
from .base_backend import BaseBackend, Definiteness

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps

# Slack applied on top of tau for quantities that went through more than one
# orthogonalization pass (projections, residuals, eigenvalues).
ROUNDOFF_SLACK = 100.0


class FloatBackend(BaseBackend):
    """float64 arithmetic with tolerance-based zero tests."""

    name = 'float'

    def __init__(self, float_tolerance: Optional[float] = None, **kwargs):
        """
        Initialize the float backend.

        Args:
            float_tolerance: Absolute tolerance overriding the size-scaled default
        """
        super().__init__(float_tolerance=float_tolerance, **kwargs)
        self.absolute_tolerance = float_tolerance
        if float_tolerance is not None:
            logger.info(f"Float backend using absolute tolerance {float_tolerance:g}")

    def tolerance(self, shape: Sequence[int], sigma_max: float) -> float:
        """Numerical-rank threshold for a matrix of the given shape and largest singular value."""
        if self.absolute_tolerance is not None:
            return self.absolute_tolerance
        return max(shape) * EPS * sigma_max

    def scalar(self, value: Any) -> float:
        if isinstance(value, str):
            return float(Fraction(value.strip()))
        return float(value)

    def matrix(self, rows: Sequence[Sequence[Any]], cols: Optional[int] = None) -> np.ndarray:
        rows = [list(row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(row) != cols for row in rows):
            raise DimensionMismatchError(f"Ragged matrix rows; expected {cols} entries per row")
        data = [[self.scalar(x) for x in row] for row in rows]
        return np.array(data, dtype=float).reshape(len(rows), cols)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols))

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n)

    def hstack(self, mats: Sequence[Any]) -> np.ndarray:
        mats = list(mats)
        if not mats:
            return np.zeros((0, 0))
        return np.hstack([np.asarray(m, dtype=float) for m in mats])

    def block_diag(self, blocks: Sequence[Any]) -> np.ndarray:
        if not blocks:
            return np.zeros((0, 0))
        return scipy.linalg.block_diag(*[np.asarray(b, dtype=float) for b in blocks])

    def freeze(self, m: Any) -> np.ndarray:
        frozen = np.array(m, dtype=float, copy=True)
        frozen.setflags(write=False)
        return frozen

    def to_python(self, m: Any) -> List[List[float]]:
        return [[float(x) for x in row] for row in np.asarray(m).tolist()]

    def _singular_values(self, m: np.ndarray) -> np.ndarray:
        return scipy.linalg.svd(m, compute_uv=False)

    def rank(self, m: Any) -> int:
        m = np.asarray(m, dtype=float)
        if 0 in m.shape:
            return 0
        s = self._singular_values(m)
        if s[0] == 0.0:
            return 0
        return int(np.sum(s > self.tolerance(m.shape, s[0])))

    def column_space(self, m: Any) -> SubspaceBasis:
        """Orthonormal basis from the leading left singular vectors."""
        m = np.asarray(m, dtype=float)
        rows = m.shape[0]
        if 0 in m.shape:
            return SubspaceBasis(rows, np.zeros((rows, 0)), self.name)
        u, s, _ = scipy.linalg.svd(m, full_matrices=False)
        if s[0] == 0.0:
            return SubspaceBasis(rows, np.zeros((rows, 0)), self.name)
        r = int(np.sum(s > self.tolerance(m.shape, s[0])))
        return SubspaceBasis(rows, u[:, :r], self.name)

    def extend_basis(self, basis: Any, candidates: Any) -> np.ndarray:
        basis = np.asarray(basis, dtype=float)
        candidates = np.asarray(candidates, dtype=float)
        rows = candidates.shape[0]
        if candidates.shape[1] == 0:
            return np.zeros((rows, 0))
        scale = np.linalg.norm(candidates, 2)
        if scale == 0.0:
            return np.zeros((rows, 0))

        residual = candidates
        if basis.shape[1]:
            # two projection passes keep the residual orthogonal to basis
            residual = residual - basis @ (basis.T @ residual)
            residual = residual - basis @ (basis.T @ residual)

        u, s, _ = scipy.linalg.svd(residual, full_matrices=False)
        threshold = self.tolerance(candidates.shape, scale)
        if self.absolute_tolerance is None:
            threshold *= ROUNDOFF_SLACK
        keep = int(np.sum(s > threshold))
        return u[:, :keep]

    def solve_right(self, c: Any, rhs: Any) -> Optional[np.ndarray]:
        c = np.asarray(c, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        if c.shape[0] != rhs.shape[0]:
            raise DimensionMismatchError(f"solve_right: c has {c.shape[0]} rows, rhs has {rhs.shape[0]}")
        if c.shape[0] == 0:
            return np.zeros((c.shape[1], rhs.shape[1]))
        if c.shape[1] == 0 or rhs.shape[1] == 0:
            return np.zeros((c.shape[1], rhs.shape[1])) if self.is_zero(rhs) else None

        x, *_ = np.linalg.lstsq(c, rhs, rcond=None)
        residual = np.linalg.norm(c @ x - rhs, axis=0)
        sigma_max = np.linalg.norm(c, 2)
        scale = sigma_max * np.linalg.norm(x, axis=0) + np.linalg.norm(rhs, axis=0)
        if self.absolute_tolerance is not None:
            threshold = self.absolute_tolerance * (1.0 + scale)
        else:
            threshold = ROUNDOFF_SLACK * max(c.shape) * EPS * scale
        if np.all(residual <= threshold):
            return x
        return None

    def _entry_threshold(self, *mats: np.ndarray) -> float:
        largest = max((float(np.max(np.abs(m))) if m.size else 0.0) for m in mats)
        shape = max((max(m.shape) if m.size else 1) for m in mats)
        base = self.absolute_tolerance if self.absolute_tolerance is not None else ROUNDOFF_SLACK * shape * EPS
        return base * (1.0 + largest)

    def is_zero(self, m: Any) -> bool:
        m = np.asarray(m, dtype=float)
        if m.size == 0:
            return True
        base = self.absolute_tolerance if self.absolute_tolerance is not None else ROUNDOFF_SLACK * max(m.shape) * EPS
        return bool(np.all(np.abs(m) <= base))

    def equal(self, a: Any, b: Any) -> bool:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.shape != b.shape:
            return False
        if a.size == 0:
            return True
        return bool(np.all(np.abs(a - b) <= self._entry_threshold(a, b)))

    def definiteness(self, m: Any) -> Definiteness:
        m = np.asarray(m, dtype=float)
        if self.is_zero(m):
            return Definiteness.ZERO
        eigenvalues = np.linalg.eigvalsh((m + m.T) / 2.0)
        threshold = self.tolerance(m.shape, float(np.max(np.abs(eigenvalues))))
        if self.absolute_tolerance is None:
            threshold *= ROUNDOFF_SLACK
        positive = eigenvalues > threshold
        negative = eigenvalues < -threshold
        if positive.all():
            return Definiteness.POSITIVE_DEFINITE
        if negative.all():
            return Definiteness.NEGATIVE_DEFINITE
        if not negative.any():
            return Definiteness.POSITIVE_SEMIDEFINITE
        if not positive.any():
            return Definiteness.NEGATIVE_SEMIDEFINITE
        return Definiteness.INDEFINITE
