"""
Core Errors Module

Standardized error classes shared by the numerical library, the CLI and the
HTTP surface. Each error knows its machine-readable code, the HTTP status it maps
to and the CLI exit status of its category (2 = config error, 3 = numeric error).

Usage:
    from ffdrive.core.errors import ValidationError, NumericError, error_payload

    raise ValidationError("t_f must be positive", details={"field": "t_f"})
    raise NumericError("empty trust window", details={"slice_index": 17})

    payload = error_payload("validation_error", "bad config", run_id="expansion-1a2b")
"""

import logging
from typing import Optional, Dict, Any

from ffdrive.constants.constants import EXIT_CONFIG_ERROR, EXIT_NUMERIC_ERROR

logger = logging.getLogger(__name__)


# ==================== Base Error Class ====================

class AppError(Exception):
    """
    Base application error class.

    Attributes:
        code: Error code (e.g., "validation_error", "empty_window")
        message: Human-readable error message
        details: Optional additional error context
        status_code: HTTP status code for this error type
        exit_code: CLI exit status for this error type
    """

    category = "internal_error"

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        status_code: int = 500,
        exit_code: int = 1
    ):
        super().__init__(message)
        self.message = message
        self.code = code or self._default_code()
        self.details = details or {}
        self.status_code = status_code
        self.exit_code = exit_code

    def _default_code(self) -> str:
        """snake_case class name without the Error suffix."""
        name = self.__class__.__name__
        if name.endswith("Error"):
            name = name[:-5]

        result = []
        for i, char in enumerate(name):
            if char.isupper() and i > 0:
                result.append("_")
            result.append(char.lower())

        return "".join(result)

    def with_slice(self, slice_index: int) -> "AppError":
        """Attach the designer slice index the error was raised from."""
        self.details.setdefault("slice_index", slice_index)
        return self

    def to_dict(self, run_id: Optional[str] = None) -> Dict[str, Any]:
        """
        Convert error to a JSON-ready dict.

        Args:
            run_id: Optional scenario run id

        Returns:
            Error dict with category, code, message, details, run_id
        """
        result = {
            "category": self.category,
            "code": self.code,
            "message": self.message,
        }

        if self.details:
            result["details"] = self.details

        if run_id:
            result["run_id"] = run_id

        return result


# ==================== Config-Error Category ====================

class ValidationError(AppError):
    """Invalid input: scenario fields, grid parameters, operation preconditions."""

    category = "config_error"

    def __init__(
        self,
        message: str = "Validation failed",
        details: Optional[Dict[str, Any]] = None,
        code: str = "validation_error"
    ):
        super().__init__(
            message=message,
            code=code,
            details=details,
            status_code=400,
            exit_code=EXIT_CONFIG_ERROR
        )


class GridMismatchError(ValidationError):
    """Two fields sampled on different grids were combined."""

    def __init__(
        self,
        message: str = "Fields live on incompatible grids",
        details: Optional[Dict[str, Any]] = None
    ):
        super().__init__(message=message, details=details, code="grid_mismatch")


class NotFoundError(AppError):
    """Unknown builtin scenario or missing config file."""

    category = "config_error"

    def __init__(
        self,
        message: str = "Resource not found",
        details: Optional[Dict[str, Any]] = None
    ):
        super().__init__(
            message=message,
            code="not_found",
            details=details,
            status_code=404,
            exit_code=EXIT_CONFIG_ERROR
        )


# ==================== Numeric-Error Category ====================

class NumericError(AppError):
    """A numerical step failed (non-finite values, empty window, divergence)."""

    category = "numeric_error"

    def __init__(
        self,
        message: str = "Numerical failure",
        details: Optional[Dict[str, Any]] = None,
        code: str = "numeric_error"
    ):
        super().__init__(
            message=message,
            code=code,
            details=details,
            status_code=422,
            exit_code=EXIT_NUMERIC_ERROR
        )


class EmptyWindowError(NumericError):
    """No grid point of a slice passes the trust-window criteria."""

    def __init__(
        self,
        message: str = "Trust window is empty",
        details: Optional[Dict[str, Any]] = None
    ):
        super().__init__(message=message, details=details, code="empty_window")


class CollinearityError(NumericError):
    """Endpoint amplitudes cancel (a_i = -a_f), so N(t) is undefined."""

    def __init__(
        self,
        message: str = "Interpolation endpoints are anti-collinear",
        details: Optional[Dict[str, Any]] = None
    ):
        super().__init__(message=message, details=details, code="collinearity")


# ==================== Helper Functions ====================

def error_payload(
    code: str,
    message: str,
    details: Optional[Dict[str, Any]] = None,
    run_id: Optional[str] = None,
    category: Optional[str] = None
) -> Dict[str, Any]:
    """
    Create a standardized error payload dict.

    Example:
        >>> payload = error_payload("validation_error", "t_f missing", run_id="abc")
        >>> payload["code"]
        'validation_error'
    """
    result: Dict[str, Any] = {
        "code": code,
        "message": message,
    }

    if category:
        result["category"] = category

    if details:
        result["details"] = details

    if run_id:
        result["run_id"] = run_id

    return result


def to_http_exception(error: AppError):
    """
    Convert AppError to FastAPI HTTPException.

    Example:
        >>> http_exc = to_http_exception(ValidationError("bad grid"))
        >>> http_exc.status_code
        400
    """
    from fastapi import HTTPException

    run_id = None
    try:
        from ffdrive.core.logging import get_run_id
        run_id = get_run_id()
        if run_id == "-":
            run_id = None
    except ImportError:
        pass

    if error.status_code >= 500:
        logger.error(f"Internal error ({error.code}): {error.message}")

    return HTTPException(
        status_code=error.status_code,
        detail=error.to_dict(run_id=run_id)
    )
