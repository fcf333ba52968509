"""
Error handling utilities and the domain exception hierarchy.
"""
import traceback
from typing import Any, Callable, Dict, Optional, Tuple, Type, TypeVar

from .logger import get_logger

logger = get_logger(__name__)

R = TypeVar('R')


class DSGError(Exception):
    """Base class for every error raised by this package."""

    code = "error"
    exit_code = 1


class InvalidArgumentError(DSGError, ValueError):
    """A parameter or flag is outside its admissible range."""

    code = "bad_args"
    exit_code = 2


class EmptySubsetError(InvalidArgumentError):
    """Density requested for an empty vertex set."""

    def __init__(self, message: str = "empty subset has undefined density"):
        super().__init__(message)


class GraphFormatError(DSGError, ValueError):
    """Malformed or non-simple graph input."""

    code = "bad_input"
    exit_code = 3


class InfeasiblePrivacyError(DSGError, ValueError):
    """Requested (eps, delta) target lies outside the range the calibration admits."""

    code = "infeasible_privacy"
    exit_code = 4


class BoundaryViolation(DSGError, RuntimeError):
    """Node-side code tried to reach data outside its own view."""

    code = "boundary_violation"


class OracleLimitError(DSGError, ValueError):
    """Instance exceeds an exact oracle's size limit."""

    code = "oracle_limit"
    exit_code = 3


class ProtocolError(DSGError, RuntimeError):
    """Misuse of the protocol runtime or a replay mismatch."""

    code = "protocol_error"


def safe_execute(func: Callable[..., R],
                 *args: Any,
                 default_return: Optional[R] = None,
                 error_message: str = "call failed",
                 expected: Tuple[Type[BaseException], ...] = (DSGError,),
                 **kwargs: Any) -> Optional[R]:
    """
    Call ``func`` and fall back to ``default_return`` on an expected error.

    Only exceptions listed in ``expected`` are swallowed and logged as a
    warning with their exit code; anything else propagates.
    """
    try:
        return func(*args, **kwargs)
    except expected as e:
        exit_code = getattr(e, "exit_code", 1)
        logger.warning(f"{error_message} ({type(e).__name__}, exit code {exit_code}): {e}")
        return default_return


class ErrorResponse:
    """JSON error body the CLI prints to stderr."""

    @staticmethod
    def create(message: str, code: str = "error", exit_code: int = 1,
               details: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        return {
            "success": False,
            "error": {"code": code, "exit_code": exit_code, "message": message, "details": details or {}},
        }

    @staticmethod
    def from_exception(exception: BaseException, include_traceback: bool = False) -> Dict[str, Any]:
        """Code and exit code come from the exception class for DSGError subclasses."""
        details: Dict[str, Any] = {"type": type(exception).__name__}
        if include_traceback:
            details["traceback"] = traceback.format_exc()
        return ErrorResponse.create(
            message=str(exception),
            code=getattr(exception, "code", "error"),
            exit_code=getattr(exception, "exit_code", 1),
            details=details,
        )
