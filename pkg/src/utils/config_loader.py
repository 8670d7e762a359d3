"""
Configuration Loader Utility

Provides functions for loading and validating configuration, and for
configuring the logging handlers from it.
"""

import copy
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from .exceptions import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent.parent / "config.yaml"

WEIGHT_SCHEMES = ('internal-degree', 'uniform', 'strength', 'degree')
ZERO_WEIGHT_POLICIES = ('error', 'uniform')
REPORT_FORMATS = ('json', 'csv')

DEFAULT_CONFIG: Dict[str, Any] = {
    'evaluation': {
        'measures': [
            'purity',
            'inverse_purity',
            'f_measure',
            'newman_fcc',
            'nmi',
            'rand',
            'modularity',
            'topo_purity',
            'topo_inverse_purity',
            'topo_f_measure',
        ],
        'weight_scheme': 'internal-degree',
        'on_zero_weights': 'error',
        'workers': 4,
    },
    'report': {
        'format': 'json',
        'float_digits': 12,
    },
    'generation': {
        'planted': {
            'nodes': 1000,
            'communities': 10,
            'mu': 0.3,
            'avg_degree': 20.0,
            'seed': 42,
        },
        'lfr': {
            'nodes': 1000,
            'mu': 0.3,
            'gamma': 2.5,
            'beta_c': 2.0,
            'avg_degree': 20.0,
            'max_degree': 50,
            'min_community': 20,
            'max_community': 100,
            'seed': 42,
            'max_sweeps': 100,
            'max_retries': 20,
        },
    },
    'ranking': {
        'alpha': 0.05,
    },
    'experiment': {
        'networks': 5,
        'generator': 'lfr',
        'nodes': 1000,
        'mu': 0.3,
        'fractions': [0.0, 0.05, 0.2],
        'targeted_fraction': 0.05,
        'seed': 2012,
    },
    'logging': {
        'level': 'WARNING',
        'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Load configuration from YAML file.

    Values in the file are merged over the built-in defaults, so a file
    only needs to contain the keys it changes. When no path is given the
    repository's ``config.yaml`` is used if present.

    Args:
        config_path: Path to configuration file

    Returns:
        Configuration dictionary

    Raises:
        FileNotFoundError: If an explicitly given config file doesn't exist
        ConfigurationError: If config file is invalid
    """
    if config_path is None:
        if not DEFAULT_CONFIG_PATH.exists():
            logger.info("No config.yaml found, using built-in defaults")
            return copy.deepcopy(DEFAULT_CONFIG)
        config_path = DEFAULT_CONFIG_PATH

    config_file = Path(config_path)

    if not config_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    try:
        with open(config_file, 'r', encoding='utf-8') as f:
            loaded = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        logger.error(f"Error parsing configuration file: {e}")
        raise ConfigurationError(f"invalid configuration file {config_path}: {e}") from e

    if not isinstance(loaded, dict):
        raise ConfigurationError(f"configuration file {config_path} must hold a mapping")

    config = _merge(DEFAULT_CONFIG, loaded)
    logger.info(f"Configuration loaded from {config_path}")
    return config


def _number(config: Dict[str, Any], section: str, key: str, kind=float):
    value = config[section].get(key)
    if isinstance(value, bool):
        raise ConfigurationError(f"{section}.{key} must be a number, got {value!r}")
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{section}.{key} must be a number, got {value!r}") from None


def validate_config(config: Dict[str, Any]) -> bool:
    """
    Validate configuration structure.

    Args:
        config: Configuration dictionary

    Returns:
        True if valid, raises exception otherwise

    Raises:
        ConfigurationError: On a missing section, a non-numeric value where
            a number is expected, or an out-of-range value
    """
    required_sections = [
        'evaluation',
        'report',
        'generation',
        'ranking',
        'experiment',
        'logging'
    ]

    for section in required_sections:
        if not isinstance(config.get(section), dict):
            raise ConfigurationError(f"Missing required configuration section: {section}")

    evaluation = config['evaluation']
    if evaluation['weight_scheme'] not in WEIGHT_SCHEMES:
        raise ConfigurationError(
            f"unknown weight scheme '{evaluation['weight_scheme']}' "
            f"(expected one of {', '.join(WEIGHT_SCHEMES)})"
        )
    if evaluation['on_zero_weights'] not in ZERO_WEIGHT_POLICIES:
        raise ConfigurationError(
            f"unknown zero-weight policy '{evaluation['on_zero_weights']}'"
        )
    if _number(config, 'evaluation', 'workers', int) < 1:
        raise ConfigurationError("evaluation.workers must be at least 1")

    if config['report']['format'] not in REPORT_FORMATS:
        raise ConfigurationError(f"unknown report format '{config['report']['format']}'")
    if _number(config, 'report', 'float_digits', int) < 1:
        raise ConfigurationError("report.float_digits must be at least 1")

    alpha = _number(config, 'ranking', 'alpha')
    if not 0.0 < alpha < 1.0:
        raise ConfigurationError(f"ranking.alpha must lie in (0, 1), got {alpha}")

    for key, kind in (('networks', int), ('nodes', int), ('mu', float),
                      ('targeted_fraction', float), ('seed', int)):
        _number(config, 'experiment', key, kind)

    logger.info("Configuration validation successful")
    return True


def setup_logging(config: Optional[Dict[str, Any]] = None, verbose: bool = False) -> None:
    """
    Configure the root logger from the ``logging`` section.

    Args:
        config: Configuration dictionary (defaults are used when None)
        verbose: Force INFO level regardless of the configured level
    """
    section = (config or DEFAULT_CONFIG).get('logging', DEFAULT_CONFIG['logging'])
    level_name = 'INFO' if verbose else str(section.get('level', 'WARNING')).upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        raise ConfigurationError(f"unknown logging level '{level_name}'")

    logging.basicConfig(
        level=level,
        format=section.get('format', DEFAULT_CONFIG['logging']['format']),
        force=True,
    )
