"""
Utility functions
"""

from .config_loader import load_config, validate_config, setup_logging
from .exceptions import (
    CommEvalError,
    ConfigurationError,
    InputError,
    UnknownNodeError,
    PartitionMismatchError,
    DegenerateComputationError,
    UndefinedMeasureError,
    GenerationError,
)

__all__ = [
    'load_config',
    'validate_config',
    'setup_logging',
    'CommEvalError',
    'ConfigurationError',
    'InputError',
    'UnknownNodeError',
    'PartitionMismatchError',
    'DegenerateComputationError',
    'UndefinedMeasureError',
    'GenerationError',
]
