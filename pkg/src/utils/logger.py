#!/usr/bin/env python3
"""
Logger setup for dynkin-walk
"""

import logging
from pathlib import Path
from logging.handlers import RotatingFileHandler
from typing import Optional

from ..config_manager import DEFAULT_CONFIG_DIR


def setup_logger(debug=False, log_dir: Optional[Path] = None, level: str = 'INFO'):
    """Root 'dynkin-walk' logger: rotating file always, stderr only in debug mode"""

    log_dir = Path(log_dir) if log_dir else DEFAULT_CONFIG_DIR / 'logs'
    log_dir.mkdir(parents=True, exist_ok=True)

    logger = logging.getLogger('dynkin-walk')
    logger.setLevel(logging.DEBUG if debug else getattr(logging, level.upper(), logging.INFO))

    # Clear existing handlers
    for handler in list(logger.handlers):
        handler.close()
    logger.handlers.clear()

    # File handler with rotation
    file_handler = RotatingFileHandler(
        log_dir / 'dynkin-walk.log',
        maxBytes=5*1024*1024,  # 5MB
        backupCount=3
    )
    file_handler.setLevel(logging.DEBUG)

    # Console handler
    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.DEBUG)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    file_handler.setFormatter(formatter)
    console_handler.setFormatter(formatter)

    logger.addHandler(file_handler)
    if debug:
        logger.addHandler(console_handler)

    return logger
