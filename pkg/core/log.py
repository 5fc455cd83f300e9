"""
Rich logging helper shared by the pipeline components.
"""
import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

ROOT = "ngon"


def get_logger(name: str, level: Optional[int] = None, console: Optional[Console] = None) -> logging.Logger:
    """
    Return a named logger under the ``ngon`` hierarchy; the RichHandler is attached to the root once.

    Args:
        name (str): Logger name, usually the owning class or module.
        level (int, optional): Logging level. Unset loggers inherit from the root.
        console (Console, optional): Console to render to. A stderr console is created if omitted.

    Returns:
        logging.Logger: The configured logger.
    """
    root = logging.getLogger(ROOT)
    if not root.handlers:
        handler = RichHandler(
            console=console or Console(stderr=True),
            markup=True,
            show_time=True,
            show_level=True,
            show_path=False,
        )
        root.addHandler(handler)
        root.setLevel(logging.INFO)
    logger = root if name == ROOT else logging.getLogger(f"{ROOT}.{name}")
    if level is not None:
        logger.setLevel(level)
    return logger


def set_level(level: int) -> None:
    """Set the level of every ``ngon`` logger at once."""
    get_logger(ROOT).setLevel(level)
    for name, logger in logging.Logger.manager.loggerDict.items():
        if name.startswith(f"{ROOT}.") and isinstance(logger, logging.Logger):
            logger.setLevel(logging.NOTSET)


def kv(**fields: object) -> str:
    """Format structured diagnostics as ``key=value`` pairs for debug records."""
    return " ".join(f"{key}={value:.6g}" if isinstance(value, float) else f"{key}={value}" for key, value in fields.items())
