"""
Package loggers.

Every module logs under the ``dsg`` namespace, and a single rotating file
handler on that namespace collects the records of all of them.
"""
import logging
from logging.handlers import RotatingFileHandler

from ..config import LOG_DIR, LOG_FILE_BACKUPS, LOG_FILE_MAX_BYTES, LOG_LEVEL

ROOT_NAME = "dsg"
FILE_FORMAT = "%(asctime)s - %(name)s - %(lineno)s - %(levelname)s - %(message)s"


def _package_logger() -> logging.Logger:
    package_logger = logging.getLogger(ROOT_NAME)
    if not any(isinstance(handler, RotatingFileHandler) for handler in package_logger.handlers):
        package_logger.setLevel(LOG_LEVEL)
        file_handler = RotatingFileHandler(
            LOG_DIR / "dsg.log",
            maxBytes=LOG_FILE_MAX_BYTES,
            backupCount=LOG_FILE_BACKUPS,
            encoding="utf-8",
        )
        file_handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
        package_logger.addHandler(file_handler)
    return package_logger


def get_logger(name: str) -> logging.Logger:
    """
    Logger for a module: ``src.harness.runner`` becomes ``dsg.harness.runner``.

    Args:
        name: Module name, usually ``__name__``

    Returns:
        Logger instance below the package logger
    """
    _package_logger()
    short = name[len("src."):] if name.startswith("src.") else name
    return logging.getLogger(f"{ROOT_NAME}.{short}")
