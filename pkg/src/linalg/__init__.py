"""
Linear-Algebra Kernel

Backend-agnostic rank, column spaces, right-hand solves and the
invariant-image fixpoint.
"""

from .backends import BaseBackend, Definiteness, ExactBackend, FloatBackend, get_backend, resolve_backend_name
from .subspace import SubspaceBasis, contains, invariant_image_fixpoint, is_invariant

__all__ = [
    'BaseBackend',
    'Definiteness',
    'ExactBackend',
    'FloatBackend',
    'SubspaceBasis',
    'contains',
    'get_backend',
    'invariant_image_fixpoint',
    'is_invariant',
    'resolve_backend_name',
]
