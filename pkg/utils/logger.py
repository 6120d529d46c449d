"""
Logging Configuration for Schinzel Lab.
Provides centralized logging with proper formatting and levels.

Handlers write to stderr: the CLI reserves stdout for JSON reports.
"""

import logging
import sys
from typing import Optional, Any, Dict

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
FILE_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class ColoredFormatter(logging.Formatter):
    """Level names in ANSI colors, for interactive terminals."""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"

    def format(self, record: logging.LogRecord) -> str:
        levelname = record.levelname
        if levelname in self.COLORS:
            record = logging.makeLogRecord(record.__dict__)
            record.levelname = f"{self.COLORS[levelname]}{levelname}{self.RESET}"
        return super().format(record)


def setup_logger(
    name: str,
    level: Optional[str] = None,
    log_file: Optional[str] = None,
    use_colors: Optional[bool] = None
) -> logging.Logger:
    """
    Attach a stderr handler (and a file handler when a log file is configured).

    Level and log file default to LOG_LEVEL / LOG_FILE from the settings;
    colors default to whether stderr is a terminal. Idempotent per name.
    """
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    if level is None:
        from app.config import get_settings
        current = get_settings()
        level = current.log_level
        log_file = log_file or current.log_file or None

    if use_colors is None:
        use_colors = sys.stderr.isatty()

    logger.setLevel(getattr(logging, level.upper(), logging.INFO))

    formatter_class = ColoredFormatter if use_colors else logging.Formatter
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(formatter_class(LOG_FORMAT, datefmt=DATE_FORMAT))
    logger.addHandler(console)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(logging.Formatter(FILE_LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(file_handler)

    return logger


def get_logger(name: str) -> logging.Logger:
    """Logger configured from the settings."""
    return setup_logger(name)


PACKAGE_LOGGERS = ("modules", "services", "app", "search_trail")


def set_level(level: str) -> None:
    """Apply a log level to every package logger (the --log-level flag)."""
    numeric = getattr(logging, level.upper(), logging.INFO)
    # computational modules log through plain getLogger(__name__); give them a handler
    setup_logger("modules", level=level)
    for name in list(logging.root.manager.loggerDict):
        if name.split(".")[0] in PACKAGE_LOGGERS:
            logging.getLogger(name).setLevel(numeric)


class SearchTrailLogger:
    """
    Specialized logger for long-running search trails.
    Logs stage boundaries and per-candidate outcomes with structured data.
    """

    def __init__(self, name: str = "search_trail"):
        self.name = name
        self._logger: Optional[logging.Logger] = None

    @property
    def logger(self) -> logging.Logger:
        if self._logger is None:
            self._logger = setup_logger(self.name)
        return self._logger

    def log_stage(self, stage: str, **details: Any):
        """Log the start or end of a search stage."""
        message = f"STAGE: {stage}"
        if details:
            message += f" | DETAILS: {details}"
        self.logger.info(message)

    def log_candidate(self, degree: int, key: str, verdict: str, details: Optional[Dict[str, Any]] = None):
        """Log the verdict reached for one candidate class."""
        message = f"CANDIDATE: n={degree} | KEY: {key[:16]} | VERDICT: {verdict}"
        if details:
            message += f" | DETAILS: {details}"
        self.logger.debug(message)

    def log_bound_exceeded(self, degree: int, key: str, bound: int):
        """Log a candidate skipped because its group exceeds the order bound."""
        self.logger.warning(f"BOUND: n={degree} | KEY: {key[:16]} | order bound {bound} exceeded")

    def log_error(self, operation: str, error: Exception, context: Optional[dict] = None):
        """Log a failed command; the traceback only at DEBUG."""
        message = f"ERROR: {operation} | {type(error).__name__}: {error}"
        if context:
            message += f" | CONTEXT: {context}"
        self.logger.error(message, exc_info=self.logger.isEnabledFor(logging.DEBUG))


# Global search trail instance
search_trail = SearchTrailLogger()
