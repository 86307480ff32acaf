"""
Utility functions for lambda-moments.

Provides helpers for:
- Logging setup
- Number formatting for JSON and CSV output
"""

from .formatter import format_csv_cell, format_threshold, json_ready, round_sig
from .logging_helpers import setup_logging

__all__ = [
    "format_csv_cell",
    "format_threshold",
    "json_ready",
    "round_sig",
    "setup_logging",
]
