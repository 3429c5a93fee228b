"""
Structured logging setup
Console logging plus optional JSON file logging with run correlation
"""
import logging
import logging.config
import sys
from typing import Dict, Any, Optional
import json
from datetime import datetime, timezone

from core.config.settings import Settings, settings as default_settings


_RESERVED_ATTRS = {
    'name', 'msg', 'args', 'levelname', 'levelno', 'pathname', 'filename',
    'module', 'lineno', 'funcName', 'created', 'msecs', 'relativeCreated',
    'thread', 'threadName', 'processName', 'process', 'message', 'exc_info',
    'exc_text', 'stack_info', 'taskName'
}


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging"""

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno
        }

        # Add extra fields
        for key, value in record.__dict__.items():
            if key not in _RESERVED_ATTRS:
                log_entry[key] = value

        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_entry, default=str)


class RunContextFilter(logging.Filter):
    """Stamp every record with the current run id"""

    def __init__(self, name: str = ""):
        super().__init__(name)
        self._run_id = "unknown"

    def filter(self, record: logging.LogRecord) -> bool:
        if not hasattr(record, 'run_id'):
            record.run_id = self._run_id
        return True

    def set_run_id(self, run_id: str):
        """Set run id for the current CLI invocation"""
        self._run_id = run_id


# Global run filter shared by every handler
run_filter = RunContextFilter()


def get_logging_config(config: Optional[Settings] = None) -> Dict[str, Any]:
    """Get logging configuration"""
    config = config or default_settings
    console_level = config.log.level

    handlers: Dict[str, Any] = {
        "console": {
            "level": console_level,
            "class": "logging.StreamHandler",
            "formatter": "standard",
            "stream": sys.stderr,
            "filters": ["run"]
        }
    }
    handler_names = ["console"]

    if config.log.json_file:
        config.log.logs_dir.mkdir(parents=True, exist_ok=True)
        handlers["file"] = {
            "level": "DEBUG",
            "class": "logging.handlers.RotatingFileHandler",
            "formatter": "json",
            "filename": str(config.log.logs_dir / "densepoints.log"),
            "maxBytes": 10485760,  # 10MB
            "backupCount": 5,
            "filters": ["run"]
        }
        handler_names.append("file")

    logging_config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {
                "format": "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
            },
            "json": {
                "()": JSONFormatter
            }
        },
        "filters": {
            "run": {
                "()": lambda: run_filter
            }
        },
        "handlers": handlers,
        "loggers": {
            "densepoints": {
                "level": "DEBUG",
                "handlers": handler_names,
                "propagate": False
            },
            "densepoints.geometry": {
                "level": "INFO",
                "handlers": handler_names,
                "propagate": False
            }
        },
        "root": {
            "level": "WARNING",
            "handlers": ["console"]
        }
    }

    # Adjust log levels based on environment
    if config.environment == "development":
        logging_config["loggers"]["densepoints.geometry"]["level"] = "DEBUG"
    elif config.environment == "production":
        handlers["console"]["level"] = "WARNING"
        logging_config["loggers"]["densepoints"]["level"] = "INFO"

    return logging_config


def setup_logging(config: Optional[Settings] = None) -> logging.Logger:
    """Setup logging configuration"""
    config = config or default_settings
    logging.config.dictConfig(get_logging_config(config))

    logger = logging.getLogger("densepoints")
    logger.debug(
        "Logging initialized",
        extra={
            "environment": config.environment,
            "log_level": config.log.level,
            "json_file": config.log.json_file
        }
    )
    return logger


def get_logger(name: str) -> logging.Logger:
    """Get logger instance"""
    return logging.getLogger(f"densepoints.{name}")
