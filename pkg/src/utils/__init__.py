"""
Utils package initialization.
"""
from .logger import get_logger
from .error_handler import (
    safe_execute,
    ErrorResponse,
    DSGError,
    InvalidArgumentError,
    EmptySubsetError,
    GraphFormatError,
    InfeasiblePrivacyError,
    BoundaryViolation,
    OracleLimitError,
    ProtocolError,
)

__all__ = [
    'get_logger',
    'safe_execute',
    'ErrorResponse',
    'DSGError',
    'InvalidArgumentError',
    'EmptySubsetError',
    'GraphFormatError',
    'InfeasiblePrivacyError',
    'BoundaryViolation',
    'OracleLimitError',
    'ProtocolError',
]
