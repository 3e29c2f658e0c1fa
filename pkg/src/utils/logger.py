import logging
import os
import sys
from logging.handlers import RotatingFileHandler

LOGGER_NAME = "idempotent_dynamics"
LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def _rotating_handler(log_config: dict) -> RotatingFileHandler | None:
    file_path = log_config.get("file_path")
    if not file_path:
        return None
    file_path = os.path.expanduser(file_path)
    os.makedirs(os.path.dirname(file_path) or ".", exist_ok=True)
    return RotatingFileHandler(
        file_path,
        maxBytes=int(log_config.get("max_file_size_mb", 10)) * 1024 * 1024,
        backupCount=int(log_config.get("backup_count", 5)),
    )


def setup_logger(config: dict) -> logging.Logger:
    """Configure the application logger once; later calls only reset the level."""
    log_config = config.get("logging", {}) or {}
    level = getattr(logging, str(log_config.get("level", "WARNING")).upper(), logging.WARNING)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    if logger.handlers:
        return logger

    formatter = logging.Formatter(LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    # stdout carries the report, so the console handler writes to stderr
    handlers = [_rotating_handler(log_config), logging.StreamHandler(sys.stderr)]
    for handler in handlers:
        if handler is None:
            continue
        handler.setLevel(level)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger
