"""
Exception hierarchy shared by the library and the command line.

Each exception carries the process exit code the CLI reports for it.
"""

from typing import Optional


class CommEvalError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigurationError(CommEvalError, ValueError):
    """Invalid configuration value or command-line usage."""

    exit_code = 1


class InputError(CommEvalError, ValueError):
    """
    Malformed or inconsistent input data.

    Args:
        message: Human readable reason
        source: File name (or other origin) of the offending input
        line: 1-based line number inside ``source``
    """

    exit_code = 2

    def __init__(
        self,
        message: str,
        source: Optional[str] = None,
        line: Optional[int] = None
    ):
        self.message = message
        self.source = source
        self.line = line
        super().__init__(self._render())

    def _render(self) -> str:
        if self.source is None and self.line is None:
            return self.message
        if self.line is None:
            return f"{self.source}: {self.message}"
        return f"{self.source or '<input>'}:{self.line}: {self.message}"


class UnknownNodeError(InputError):
    """A node token that the graph or partition does not contain."""


class PartitionMismatchError(InputError):
    """Two partitions (or a partition and a graph) disagree on the node set."""


class DegenerateComputationError(CommEvalError, ArithmeticError):
    """A computation is undefined for the given input (e.g. zero total weight)."""

    exit_code = 3


class UndefinedMeasureError(DegenerateComputationError):
    """A single measure is undefined; reported per measure, not fatal."""


class GenerationError(CommEvalError):
    """Benchmark generation failed (infeasible parameters, rewiring failure)."""

    exit_code = 3
