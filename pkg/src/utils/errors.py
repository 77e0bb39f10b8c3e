"""
Error Types

This module defines the exception hierarchy raised by matnet and a helper
that logs a failure with its location before the CLI turns it into an exit code.
"""

import logging
from typing import Optional

logger = logging.getLogger(__name__)


class MatnetError(Exception):
    """Base class for every error raised deliberately by matnet."""

    exit_code = 2


class DimensionMismatchError(MatnetError):
    """Matrix shapes are incompatible for the requested operation."""


class InvalidNodeError(MatnetError):
    """Node id out of range, self-loop, or duplicate unordered pair."""


class GraphCompatibilityError(MatnetError):
    """Graphs combined into a union or switching family differ in n, d or leaders."""


class InvalidWeightError(MatnetError):
    """An edge weight is zero, asymmetric or not d x d."""


class PartitionError(MatnetError):
    """A partition is malformed or does not match the node set."""


class PreconditionError(MatnetError):
    """A theorem hypothesis declared as a precondition does not hold."""


class SpecValidationError(MatnetError):
    """
    A network specification failed to parse or validate.

    Attributes:
        location: Where the problem was found, e.g. 'line 4 col 9' or 'edges/2/weight'
    """

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class CorpusRegressionError(MatnetError):
    """One or more built-in examples no longer reproduce their expected values."""

    exit_code = 3


def handle_matnet_error(error: MatnetError, operation: str) -> int:
    """
    Log a MatnetError with appropriate context.

    Args:
        error (MatnetError): The raised error
        operation (str): Description of the operation that failed

    Returns:
        int: Exit code the CLI should return
    """
    logger.error(f"Error during {operation}")
    logger.error(f"Error Type: {type(error).__name__}")
    logger.error(f"Error Message: {error}")

    if isinstance(error, SpecValidationError):
        logger.error("Check the network specification against config/network_schema.json.")
    elif isinstance(error, PreconditionError):
        logger.error("The requested theorem check needs an equitable, cell-homogeneous partition.")

    return error.exit_code
