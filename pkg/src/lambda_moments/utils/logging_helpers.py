"""
Logging setup for lambda-moments.

Library modules only create loggers with ``logging.getLogger(__name__)``;
handlers are installed by applications (the CLI) through setup_logging.
"""

import logging

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "lambda_moments"

# Track the handler we installed so repeated setup does not stack handlers
_handler: RichHandler | None = None


def setup_logging(
    level: str = "WARNING",
    debug: bool = False,
) -> logging.Logger:
    """
    Route the package's log records to standard error through rich.

    Args:
        level: Logging level name (DEBUG, INFO, WARNING, ERROR)
        debug: Force DEBUG and show source locations

    Returns:
        The package logger

    Example:
        ```python
        from lambda_moments.utils import setup_logging

        setup_logging("INFO")
        ```
    """
    global _handler

    logger = logging.getLogger(PACKAGE_LOGGER)
    if _handler is not None:
        logger.removeHandler(_handler)

    _handler = RichHandler(
        console=Console(stderr=True),
        show_path=debug,
        rich_tracebacks=debug,
    )
    _handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(_handler)
    logger.setLevel(logging.DEBUG if debug else level.upper())
    logger.propagate = False
    return logger
