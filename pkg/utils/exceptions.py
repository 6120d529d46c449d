"""
Custom Exceptions for Schinzel Lab.
Provides specific exception types for better error handling and CLI exit codes.
"""

from typing import Optional, Dict, Any


class SchinzelLabException(Exception):
    """Base exception for the Schinzel Lab library and CLI."""

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        code: str = "SCHINZEL_ERROR",
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.code = code
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for JSON error reports."""
        return {
            "error": True,
            "code": self.code,
            "message": self.message,
            "details": self.details
        }


# ============================================
# Configuration Exceptions
# ============================================

class ConfigurationError(SchinzelLabException):
    """Raised when there's a configuration error."""

    def __init__(self, message: str, config_key: str = ""):
        super().__init__(
            message=message,
            code="CONFIG_ERROR",
            details={"config_key": config_key}
        )


# ============================================
# Permutation Exceptions
# ============================================

class MalformedPermutationError(SchinzelLabException):
    """Raised when cycle notation or an image array does not describe a bijection."""

    def __init__(self, message: str, text: str = "", degree: Optional[int] = None):
        super().__init__(
            message=message,
            code="PERM_MALFORMED",
            details={"text": text[:200], "degree": degree}
        )


class DegreeMismatchError(SchinzelLabException):
    """Raised when permutations of different degrees are combined."""

    def __init__(self, left: int, right: int, operation: str = ""):
        super().__init__(
            message=f"Degree mismatch in {operation or 'operation'}: {left} != {right}",
            code="PERM_DEGREE_MISMATCH",
            details={"left": left, "right": right, "operation": operation}
        )


# ============================================
# Group Exceptions
# ============================================

class OrderBoundExceededError(SchinzelLabException):
    """Raised when a group is larger than the configured desk-scale bound."""

    exit_code = 2

    def __init__(self, bound: int, order: Optional[int] = None, context: str = ""):
        message = f"Group order exceeds bound {bound}"
        if order is not None:
            message += f" (order {order})"
        if context:
            message += f" while {context}"
        super().__init__(
            message=message,
            code="ORDER_BOUND_EXCEEDED",
            details={"bound": bound, "order": order, "context": context}
        )
        self.bound = bound
        self.order = order


class BruteForceBoundError(SchinzelLabException):
    """Raised when a scan over S_n is requested above the brute-force degree."""

    exit_code = 2

    def __init__(self, degree: int, bound: int, operation: str = ""):
        super().__init__(
            message=f"Degree {degree} exceeds brute-force bound {bound} for {operation or 'scan'}",
            code="BRUTE_FORCE_BOUND",
            details={"degree": degree, "bound": bound, "operation": operation}
        )
        self.degree = degree
        self.bound = bound


class NotASubgroupError(SchinzelLabException):
    """Raised when a claimed subgroup is not contained in its parent."""

    def __init__(self, message: str = "H is not a subgroup of G"):
        super().__init__(message=message, code="NOT_A_SUBGROUP")


class ElementNotInGroupError(SchinzelLabException):
    """Raised when an element outside the group is passed to a group operation."""

    def __init__(self, element: str, operation: str = ""):
        super().__init__(
            message=f"Element {element} does not lie in the group",
            code="ELEMENT_NOT_IN_GROUP",
            details={"element": element, "operation": operation}
        )


class InvalidAutomorphismError(SchinzelLabException):
    """Raised when generator images do not extend to a bijective homomorphism."""

    def __init__(self, reason: str):
        super().__init__(
            message=f"Generator images do not define an automorphism: {reason}",
            code="INVALID_AUTOMORPHISM",
            details={"reason": reason}
        )
        self.reason = reason


# ============================================
# Tuple / Nielsen Exceptions
# ============================================

class MalformedTupleError(SchinzelLabException):
    """Raised when a branch-cycle tuple violates a structural precondition."""

    def __init__(self, message: str, condition: str = ""):
        super().__init__(
            message=message,
            code="TUPLE_MALFORMED",
            details={"condition": condition}
        )
        self.condition = condition


# ============================================
# Extension / Wreath Exceptions
# ============================================

class ExtensionPreconditionError(SchinzelLabException):
    """Raised when (G, gamma, sigma_infty, v) cannot build an extension group."""

    def __init__(self, message: str, condition: str = ""):
        super().__init__(
            message=message,
            code="EXTENSION_PRECONDITION",
            details={"condition": condition}
        )


class BlockStructureError(SchinzelLabException):
    """Raised when a permutation does not respect the v blocks of n letters."""

    def __init__(self, message: str, n: int = 0, v: int = 0):
        super().__init__(
            message=message,
            code="BLOCK_STRUCTURE",
            details={"n": n, "v": v}
        )


# ============================================
# Catalog Exceptions
# ============================================

class CatalogParameterError(SchinzelLabException):
    """Raised when a catalog constructor gets parameters outside its range."""

    def __init__(self, message: str, parameter: str = "", value: Any = None):
        super().__init__(
            message=message,
            code="CATALOG_PARAMETER",
            details={"parameter": parameter, "value": value}
        )


# ============================================
# Internal Consistency
# ============================================

class InvariantViolationError(SchinzelLabException):
    """Raised when an internal cross-check fails; never silently ignored."""

    exit_code = 3

    def __init__(self, message: str, invariant: str = "", details: Optional[Dict[str, Any]] = None):
        payload = {"invariant": invariant}
        payload.update(details or {})
        super().__init__(
            message=message,
            code="INVARIANT_VIOLATION",
            details=payload
        )


# ============================================
# Cache Exceptions
# ============================================

class CacheError(SchinzelLabException):
    """Raised when the result cache cannot be read or written."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(
            message=message,
            code="CACHE_ERROR",
            details={"path": path}
        )


def handle_exception(e: Exception) -> Dict[str, Any]:
    """
    Convert any exception to a standardized error response.

    Args:
        e: The exception to handle

    Returns:
        Dictionary with error information
    """
    if isinstance(e, SchinzelLabException):
        return e.to_dict()

    return {
        "error": True,
        "code": "UNKNOWN_ERROR",
        "message": str(e),
        "details": {"type": type(e).__name__}
    }
