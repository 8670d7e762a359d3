"""
Tests for configuration loading and validation.
"""

import logging

import pytest

from src.utils.config_loader import DEFAULT_CONFIG, load_config, setup_logging, validate_config
from src.utils.exceptions import ConfigurationError


def test_repository_config_is_valid():
    config = load_config()
    assert validate_config(config)
    assert config['experiment']['seed'] == 2012


def test_partial_file_merges_over_defaults(write):
    config = load_config(write("c.yaml", "ranking:\n  alpha: 0.01\n"))
    assert config['ranking']['alpha'] == 0.01
    assert config['evaluation'] == DEFAULT_CONFIG['evaluation']


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "missing.yaml")


@pytest.mark.parametrize("text", ["ranking: [unclosed\n", "- just\n- a list\n"])
def test_invalid_file(write, text):
    with pytest.raises(ConfigurationError):
        load_config(write("c.yaml", text))


@pytest.mark.parametrize("override", [
    "evaluation:\n  weight_scheme: pagerank\n",
    "evaluation:\n  on_zero_weights: ignore\n",
    "evaluation:\n  workers: 0\n",
    "report:\n  format: xml\n",
    "ranking:\n  alpha: 1.0\n",
    "evaluation:\n  workers: abc\n",
    "report:\n  float_digits: many\n",
    "ranking:\n  alpha: high\n",
    "experiment:\n  networks: [5]\n",
    "evaluation:\n  workers: true\n",
])
def test_validation(write, override):
    with pytest.raises(ConfigurationError):
        validate_config(load_config(write("c.yaml", override)))


def test_missing_section():
    config = dict(DEFAULT_CONFIG)
    del config['ranking']
    with pytest.raises(ConfigurationError):
        validate_config(config)


def test_setup_logging_levels():
    setup_logging(verbose=True)
    assert logging.getLogger().level == logging.INFO
    setup_logging({'logging': {'level': 'error'}})
    assert logging.getLogger().level == logging.ERROR
    with pytest.raises(ConfigurationError):
        setup_logging({'logging': {'level': 'chatty'}})
