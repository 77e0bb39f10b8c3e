"""
Subspace Utilities

Subspace bases over a backend, membership tests, and the invariant-image
fixpoint that yields controllable subspaces for one or many system maps.
"""

import logging
from dataclasses import dataclass
from typing import Any, Sequence

from utils.errors import DimensionMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SubspaceBasis:
    """
    Basis of a subspace of R^ambient_dim.

    Only backends create instances (column_space / fixpoint), so the columns
    are independent: reduced-echelon on the exact backend, orthonormal on
    the float backend.
    """

    ambient_dim: int
    basis: Any
    backend_name: str

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def contains(backend, space: SubspaceBasis, candidates: Any) -> bool:
    """
    Check that every column of candidates lies in the subspace.

    Args:
        backend: Linear-algebra backend that built the subspace
        space: Subspace to test against
        candidates: ambient_dim x k matrix

    Returns:
        bool: True when no candidate column leaves the subspace
    """
    if candidates.shape[0] != space.ambient_dim:
        raise DimensionMismatchError(
            f"Candidate vectors have {candidates.shape[0]} rows, subspace lives in R^{space.ambient_dim}"
        )
    return backend.extend_basis(space.basis, candidates).shape[1] == 0


def is_invariant(backend, space: SubspaceBasis, maps: Sequence[Any]) -> bool:
    """Check map(space) ⊆ space for every map."""
    if space.dim == 0:
        return True
    return all(contains(backend, space, m @ space.basis) for m in maps)


def invariant_image_fixpoint(maps: Sequence[Any], seed: SubspaceBasis, backend) -> SubspaceBasis:
    """
    Smallest subspace containing seed and invariant under every map.

    Each round pushes only the newest basis vectors through all maps and keeps
    the images that are independent of the current basis, so the loop ends
    after at most ambient_dim rounds.

    Args:
        maps: Square matrices of size seed.ambient_dim
        seed: Starting subspace
        backend: Linear-algebra backend

    Returns:
        SubspaceBasis: The invariant closure of seed
    """
    for index, m in enumerate(maps):
        if m.shape != (seed.ambient_dim, seed.ambient_dim):
            raise DimensionMismatchError(
                f"Map {index} has shape {m.shape}, expected {seed.ambient_dim}x{seed.ambient_dim}"
            )

    basis = seed.basis
    frontier = seed.basis
    rounds = 0

    while frontier.shape[1] > 0 and maps:
        rounds += 1
        images = backend.hstack([m @ frontier for m in maps])
        fresh = backend.extend_basis(basis, images)
        basis = backend.hstack([basis, fresh])
        frontier = fresh
        logger.debug(f"Fixpoint round {rounds}: +{fresh.shape[1]} -> dim {basis.shape[1]}")

    result = backend.column_space(basis)
    if not is_invariant(backend, result, maps):
        logger.warning("Fixpoint result failed the invariance re-check; tolerance may be too tight")
    logger.debug(f"Fixpoint converged after {rounds} round(s) at dim {result.dim}/{seed.ambient_dim}")
    return result
