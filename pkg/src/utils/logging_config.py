"""
Console logging for the command-line runner.

Log records go to stderr; stdout carries result tables and JSON reports only.
"""
import logging
import sys

from ..config import LOG_LEVEL
from .logger import ROOT_NAME, get_logger

CONSOLE_FORMAT = "%(levelname)s %(name)s: %(message)s"


def configure_logging(debug: bool = False) -> None:
    """
    Attach a stderr handler to the package logger for one CLI invocation.

    Args:
        debug: Show DEBUG records on the console instead of WARNING and above
    """
    package_logger = logging.getLogger(ROOT_NAME)
    # replace the console handler of an earlier invocation, keep the file handler
    for handler in list(package_logger.handlers):
        if type(handler) is logging.StreamHandler:
            package_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG if debug else logging.WARNING)
    console_handler.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    package_logger.addHandler(console_handler)
    package_logger.propagate = False
    package_logger.setLevel(logging.DEBUG if debug else LOG_LEVEL)
    if debug:
        get_logger(__name__).debug("debug logging enabled")
