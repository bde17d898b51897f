"""Verbose logging utilities for CLI commands."""

import sys
from typing import Optional, Dict, Any, Iterable
import logging


class VerboseLogger:
    """
    Handles verbose output formatting across CLI commands.

    Provides structured, formatted output for experiment runs: the resolved
    configuration, per-replication summaries and bound checks.
    """

    THICK_LINE = "━" * 60
    THIN_LINE = "─" * 60

    def __init__(self, enabled: bool, logger: Optional[logging.Logger] = None):
        """
        Initialize VerboseLogger.

        Args:
            enabled: Whether verbose mode is enabled
            logger: Optional logger instance (defaults to stderr)
        """
        self.enabled = enabled
        self.logger = logger

    def _print(self, message: str, file=None):
        if not self.enabled:
            return
        if self.logger is not None:
            self.logger.info(message)
            return
        print(message, file=file or sys.stderr)

    def section_header(self, title: str, icon: str = ""):
        """
        Print a section header with thick line separators.

        Args:
            title: Section title
            icon: Optional emoji or icon prefix
        """
        if not self.enabled:
            return

        header_text = f"{icon} {title}" if icon else title
        self._print(self.THICK_LINE)
        self._print(header_text)
        self._print(self.THICK_LINE)

    def subsection_header(self, title: str, icon: str = ""):
        if not self.enabled:
            return

        header_text = f"{icon} {title}" if icon else title
        self._print("")
        self._print(self.THIN_LINE)
        self._print(header_text)
        self._print(self.THIN_LINE)

    def experiment_config(self, config: Dict[str, Any]):
        """
        Log the resolved experiment configuration.

        Args:
            config: Field name to value mapping
        """
        if not self.enabled:
            return

        self.section_header("EXPERIMENT", "🧪")
        for key, value in config.items():
            self._print(f"{key}: {value}")
        self._print(self.THICK_LINE)

    def replication(self, optimizer: str, gamma: float, index: int, train_final: float, test_final: float, elapsed: float):
        """
        Log one finished replication.

        Args:
            optimizer: Optimizer id
            gamma: Step size used
            index: Replication index
            train_final: Normalized train excess risk at the last checkpoint
            test_final: Normalized test excess risk at the last checkpoint
            elapsed: Wall time in seconds
        """
        if not self.enabled:
            return

        self._print(
            f"[{optimizer} gamma={gamma:.4g}] replication {index}: "
            f"train={train_final:.4e} test={test_final:.4e} ({elapsed:.1f}s)"
        )

    def bound_table(self, rows: Iterable[Dict[str, Any]]):
        """
        Log a bound-verification table, one line per checkpoint.

        Args:
            rows: Mappings with ``n``, ``upper`` and ``bound`` keys
        """
        if not self.enabled:
            return

        self.subsection_header("BOUND CHECK", "📐")
        for row in rows:
            flag = "✗" if row["upper"] > row["bound"] else "✓"
            self._print(f"{flag} n={row['n']:>10d}  mean+2se={row['upper']:.4e}  bound={row['bound']:.4e}")
        self._print(self.THIN_LINE)

    def operation(self, operation_name: str, details: Dict[str, Any]):
        """
        Log a generic operation with details.

        Args:
            operation_name: Name of the operation
            details: Dictionary of operation details
        """
        if not self.enabled:
            return

        self.section_header(operation_name.upper(), "⚙️")
        for key, value in details.items():
            self._print(f"{key}: {value}")
        self._print(self.THICK_LINE)
        self._print("")

    def warning(self, message: str):
        if not self.enabled:
            return
        self._print(f"⚠️  {message}")


def create_verbose_logger(
    enabled: bool,
    logger: Optional[logging.Logger] = None
) -> VerboseLogger:
    """
    Factory function to create a VerboseLogger instance.

    Args:
        enabled: Whether verbose mode is enabled
        logger: Optional logger instance

    Returns:
        VerboseLogger instance
    """
    return VerboseLogger(enabled=enabled, logger=logger)
