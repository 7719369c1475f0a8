"""
Logging setup utility for the seesaw toolkit.

This module configures logging for the entire application based on
the logging.yaml configuration file.
"""

import logging
import logging.config
import sys
from pathlib import Path
from typing import Optional

import yaml

from seesaw.config.settings import settings

FILE_HANDLERS = ("file_all", "file_json")


def setup_logging(
    config_path: Optional[str] = None,
    level: Optional[str] = None,
    log_dir: Optional[str] = None,
    log_to_file: Optional[bool] = None,
):
    """
    Setup logging configuration from YAML file

    Args:
        config_path: Path to logging configuration YAML file, relative to the project root
        level: Console level override (uses settings if not provided)
        log_dir: Directory for log files (created when file logging is on)
        log_to_file: Attach rotating file handlers (uses settings if not provided)
    """
    config_path = config_path or settings.log_config_path
    level = (level or settings.log_level).upper()
    log_dir = log_dir or settings.log_dir
    if log_to_file is None:
        log_to_file = settings.log_to_file

    project_root = Path(__file__).parent.parent.parent
    config_file = project_root / config_path

    if not config_file.exists():
        _basic_config(level)
        logging.getLogger(__name__).warning(f"Logging config file not found: {config_file}")
        return

    try:
        with open(config_file, 'r') as f:
            config = yaml.safe_load(f)

        handlers = config.get('handlers', {})
        if log_to_file:
            log_path = Path(log_dir)
            if not log_path.is_absolute():
                log_path = project_root / log_path
            log_path.mkdir(parents=True, exist_ok=True)
            for name in FILE_HANDLERS:
                if name in handlers:
                    handlers[name]['filename'] = str(log_path / Path(handlers[name]['filename']).name)
        else:
            for name in FILE_HANDLERS:
                handlers.pop(name, None)
            for logger_config in config.get('loggers', {}).values():
                logger_config['handlers'] = [
                    h for h in logger_config.get('handlers', []) if h not in FILE_HANDLERS
                ]

        if 'console' in handlers:
            handlers['console']['level'] = level

        logging.config.dictConfig(config)
        logging.getLogger(__name__).debug(f"Logging configured from {config_file}")

    except Exception as e:
        # Fallback to basic config if YAML loading fails
        _basic_config(level)
        logging.getLogger(__name__).error(f"Failed to load logging config from {config_file}: {e}")


def _basic_config(level: str):
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)]
    )
