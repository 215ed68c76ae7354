"""
Logging configuration for ECFCensus
"""
import logging
import sys
from pathlib import Path

from .settings import settings


def setup_logging():
    """Configure logging for the application

    Log records go to stderr; stdout carries result rows only.
    A file handler is added when ``settings.log_file`` is set.
    """
    handlers = [logging.StreamHandler(sys.stderr)]

    if settings.log_file:
        log_dir = Path(settings.log_file).parent
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(settings.log_file))

    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )

    # Reduce verbosity of some libraries
    logging.getLogger("numexpr").setLevel(logging.WARNING)
    logging.getLogger("concurrent.futures").setLevel(logging.WARNING)

    logger = logging.getLogger(__name__)
    logger.debug("Logging configured successfully")

    return logger
