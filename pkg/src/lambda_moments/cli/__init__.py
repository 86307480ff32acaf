"""
CLI for lambda-moments.

Provides the ``lamom`` command with analyze, sweep, threshold,
verify-operators and simulate subcommands.
"""

from .main import cli, main

__all__ = ["cli", "main"]
