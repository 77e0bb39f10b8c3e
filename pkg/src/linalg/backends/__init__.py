"""
Linear-Algebra Backends

Exact rational and floating-point implementations of the same dense kernel.
"""

import logging
from typing import Optional

from .base_backend import BaseBackend, Definiteness
from .exact_backend import ExactBackend
from .float_backend import FloatBackend

logger = logging.getLogger(__name__)

__all__ = [
    'BaseBackend',
    'Definiteness',
    'ExactBackend',
    'FloatBackend',
    'get_backend',
    'resolve_backend_name',
]


def resolve_backend_name(requested: str, all_rational: bool) -> str:
    """
    Pick the concrete backend for a request.

    Args:
        requested: 'auto', 'exact' or 'float'
        all_rational: Whether every input entry is rational

    Returns:
        str: 'exact' or 'float'
    """
    if requested == 'auto':
        return 'exact' if all_rational else 'float'
    if requested == 'exact' and not all_rational:
        logger.warning("Exact backend requested with float inputs; floats are converted to their exact binary value")
    return requested


def get_backend(name: str, float_tolerance: Optional[float] = None) -> BaseBackend:
    """
    Instantiate a backend by name.

    Args:
        name: 'exact' or 'float'
        float_tolerance: Absolute tolerance override for the float backend

    Returns:
        BaseBackend: Backend instance
    """
    if name == 'exact':
        return ExactBackend()
    if name == 'float':
        return FloatBackend(float_tolerance=float_tolerance)
    raise ValueError(f"Unknown backend: {name}")
