"""Logging configuration for the reconstruction toolkit.

Structured logging with JSON or coloured text output. Console output goes
to stderr so that subcommands can print results on stdout.
"""

import json
import logging
import logging.config
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from src.config import get_settings

# Capture Python (and numpy) warnings in logging system
logging.captureWarnings(True)


class JSONFormatter(logging.Formatter):
    """Custom JSON formatter for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as JSON."""
        log_data: dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        # Pipeline extras passed through `extra=`
        for attr in ("stage", "duration_ms"):
            if hasattr(record, attr):
                log_data[attr] = getattr(record, attr)

        return json.dumps(log_data, default=str)


class TextFormatter(logging.Formatter):
    """Custom text formatter with color support."""

    COLORS = {
        "DEBUG": "\033[36m",  # Cyan
        "INFO": "\033[32m",  # Green
        "WARNING": "\033[33m",  # Yellow
        "ERROR": "\033[31m",  # Red
        "CRITICAL": "\033[41m",  # Red background
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        """Format log record with optional colors."""
        timestamp = datetime.fromtimestamp(record.created).isoformat(timespec="seconds")
        level = record.levelname

        if sys.stderr.isatty():
            color = self.COLORS.get(level, "")
            level = f"{color}{level}{self.RESET}"

        base_format = f"[{timestamp}] {level:8s} {record.name:28s} - {record.getMessage()}"

        if record.exc_info:
            base_format += f"\n{self.formatException(record.exc_info)}"

        return base_format


def setup_logging(
    level: Optional[str] = None,
    fmt: Optional[str] = None,
    log_file: Optional[str] = None,
) -> None:
    """
    Configure logging for a CLI run.

    Arguments default to the values in ``AppSettings``.

    Args:
        level: Console log level name
        fmt: 'json' or 'text'
        log_file: Optional rotating log file path
    """
    settings = get_settings()
    level = (level or settings.log_level).upper()
    fmt = fmt or settings.log_format
    log_file = log_file or settings.log_file

    handlers: dict[str, dict[str, Any]] = {
        "console": {
            "class": "logging.StreamHandler",
            "level": level,
            "formatter": fmt,
            "stream": "ext://sys.stderr",
        },
    }
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "level": "DEBUG",
            "formatter": "json",
            "filename": log_file,
            "maxBytes": 10485760,  # 10MB
            "backupCount": 5,
            "encoding": "utf-8",
        }

    logging_config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "json": {"()": JSONFormatter},
            "text": {"()": TextFormatter},
        },
        "handlers": handlers,
        "root": {
            "level": "WARNING",
            "handlers": ["console"],
        },
        "loggers": {
            "src": {
                "level": "DEBUG" if log_file else level,
                "handlers": list(handlers),
                "propagate": False,
            },
            "py.warnings": {
                "level": "WARNING",
                "handlers": list(handlers),
                "propagate": False,
            },
        },
    }

    logging.config.dictConfig(logging_config)

    logging.getLogger(__name__).debug(
        "%s logging configured: level=%s, format=%s, file=%s",
        settings.app_name,
        level,
        fmt,
        log_file,
    )
