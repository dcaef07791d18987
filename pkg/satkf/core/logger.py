import logging
from functools import lru_cache

from rich.logging import RichHandler

from .config import get_settings

ROOT_LOGGER = "satkf"


@lru_cache(maxsize=1)
def configure_logging() -> logging.Logger:
    """attach a rich handler to the package logger, once"""
    logger = logging.getLogger(ROOT_LOGGER)
    handler = RichHandler(show_path=False, rich_tracebacks=True, markup=False)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(get_settings().LOG_LEVEL)
    logger.propagate = False
    return logger


def get_logger(name: str) -> logging.Logger:
    """child logger under the package root"""
    configure_logging()
    if name.startswith(ROOT_LOGGER):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")
