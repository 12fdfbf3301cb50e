"""
Logging system for the fato package.

This module provides:
1. A single `fato` logger that every module hangs a child logger from
2. Coloured, timestamped console logs on stderr (stdout carries CLI data)
3. Optional plain-text file output
4. Lazy initialisation the first time a module asks for a logger
"""

import logging
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, Union


class LogColors:
    """ANSI color codes for colored terminal output."""
    RESET = '\033[0m'

    BLUE = '\033[34m'
    GREEN = '\033[32m'
    YELLOW = '\033[33m'
    RED = '\033[31m'
    MAGENTA = '\033[35m'
    CYAN = '\033[36m'
    WHITE = '\033[37m'

    BRIGHT_GREEN = '\033[92m'
    BRIGHT_YELLOW = '\033[93m'
    BRIGHT_BLUE = '\033[94m'
    BRIGHT_RED = '\033[91m'
    BRIGHT_MAGENTA = '\033[95m'


LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s:%(funcName)s:%(lineno)d | %(message)s"
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class ColoredFormatter(logging.Formatter):
    """Pipe-separated formatter that colours each field when writing to a terminal."""

    MESSAGE_COLORS = {
        'DEBUG': LogColors.BRIGHT_BLUE,
        'INFO': LogColors.WHITE,
        'WARNING': LogColors.BRIGHT_YELLOW,
        'ERROR': LogColors.BRIGHT_RED,
        'CRITICAL': LogColors.BRIGHT_MAGENTA,
    }

    LEVEL_COLORS = {
        'DEBUG': LogColors.BLUE,
        'INFO': LogColors.GREEN,
        'WARNING': LogColors.YELLOW,
        'ERROR': LogColors.RED,
        'CRITICAL': LogColors.MAGENTA,
    }

    TIMESTAMP_COLOR = LogColors.BRIGHT_GREEN
    LOCATION_COLOR = LogColors.CYAN

    def __init__(self, use_colors: bool = True):
        self.use_colors = use_colors and sys.stderr.isatty()
        super().__init__(fmt=LOG_FORMAT, datefmt=DATE_FORMAT)

    def format(self, record):
        formatted = super().format(record)
        if not self.use_colors:
            return formatted

        parts = formatted.split(' | ')
        if len(parts) < 4:
            return formatted
        timestamp, level, location = parts[:3]
        message = ' | '.join(parts[3:])
        level_name = record.levelname
        return (
            f"{self.TIMESTAMP_COLOR}{timestamp}{LogColors.RESET} | "
            f"{self.LEVEL_COLORS.get(level_name, '')}{level}{LogColors.RESET} | "
            f"{self.LOCATION_COLOR}{location}{LogColors.RESET} | "
            f"{self.MESSAGE_COLORS.get(level_name, '')}{message}{LogColors.RESET}"
        )


def _as_level(level: Union[str, int]) -> int:
    if isinstance(level, str):
        return getattr(logging, level.upper())
    return level


class FatoLogger:
    """
    Owner of the `fato` root logger.

    A singleton, so repeated calls to `setup` replace the handlers instead of
    stacking duplicates.
    """

    _instance = None
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self.logger = logging.getLogger('fato')
            self.logger.setLevel(logging.DEBUG)
            self.logger.propagate = True
            self._handlers_added = False
            FatoLogger._initialized = True

    def setup(self,
              level: Union[str, int] = logging.INFO,
              log_file: Optional[str] = None,
              console_output: bool = True,
              file_level: Union[str, int] = logging.DEBUG,
              console_level: Union[str, int] = logging.INFO,
              auto_generate_file: bool = False) -> None:
        """
        Set up the logger with specified configuration.

        Parameters:
        -----------
        level : str or int
            Overall logging level (default: INFO)
        log_file : str, optional
            Path to log file. If None and auto_generate_file is True,
            a timestamped file name is generated.
        console_output : bool
            Whether to write logs to stderr (default: True)
        file_level : str or int
            Logging level for file output (default: DEBUG)
        console_level : str or int
            Logging level for console output (default: INFO)
        auto_generate_file : bool
            Whether to generate a log file when none is given (default: False)
        """
        if self._handlers_added:
            for handler in list(self.logger.handlers):
                handler.close()
            self.logger.handlers.clear()

        self.logger.setLevel(_as_level(level))

        if console_output:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(_as_level(console_level))
            console_handler.setFormatter(ColoredFormatter(use_colors=True))
            self.logger.addHandler(console_handler)

        if not log_file and auto_generate_file:
            log_file = self._generate_log_filename()

        if log_file:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_file, mode='a')
            file_handler.setLevel(_as_level(file_level))
            file_handler.setFormatter(logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT))
            self.logger.addHandler(file_handler)
            self.logger.info(f"Logging to file: {log_file}")

        self._handlers_added = True
        self.logger.debug("fato logging system initialized")

    def _generate_log_filename(self) -> str:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        possible_dirs = [
            Path.cwd() / "logs",
            Path.home() / "fato_logs",
            Path("/tmp") / "fato_logs",
        ]
        for log_dir in possible_dirs:
            try:
                log_dir.mkdir(parents=True, exist_ok=True)
                return str(log_dir / f"fato_{timestamp}.log")
            except (PermissionError, OSError):
                continue
        return f"fato_{timestamp}.log"

    def get_logger(self, name: Optional[str] = None) -> logging.Logger:
        if name:
            return logging.getLogger(f'fato.{name}')
        return self.logger


_fato_logger = FatoLogger()


def setup_logging(level: Union[str, int] = logging.INFO,
                  log_file: Optional[str] = None,
                  console_output: bool = True,
                  file_level: Union[str, int] = logging.DEBUG,
                  console_level: Union[str, int] = logging.INFO,
                  auto_generate_file: bool = False) -> None:
    """
    Set up logging for the fato package. Call once at application start;
    the CLI does this from its `--log-level` and `--log-file` flags.

    Examples:
    ---------
    >>> from fato import setup_logging
    >>> setup_logging(level='DEBUG', log_file='sweep.log')

    >>> # Console-only logging
    >>> setup_logging(console_level='WARNING')
    """
    _fato_logger.setup(
        level=level,
        log_file=log_file,
        console_output=console_output,
        file_level=file_level,
        console_level=console_level,
        auto_generate_file=auto_generate_file,
    )


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a logger for use in fato modules.

    Sets up console-only logging on first use when nobody configured it.
    The console level then comes from the FATO_LOG_LEVEL environment
    variable (default WARNING) so library use stays quiet.

    Parameters:
    -----------
    name : str, optional
        Child logger name; 'dynamics' gives the 'fato.dynamics' logger.

    Returns:
    --------
    logging.Logger
    """
    if not _fato_logger._handlers_added:
        env_level = os.environ.get("FATO_LOG_LEVEL", "WARNING")
        _fato_logger.setup(level=logging.DEBUG, console_level=env_level)
    return _fato_logger.get_logger(name)
