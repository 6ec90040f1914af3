from __future__ import annotations

import copy
from pathlib import Path


def _uppercase_levels(config: dict):
    # 'debug' -> 'DEBUG' at any depth
    for key, value in config.items():
        if key == 'level' and isinstance(value, str):
            config[key] = value.upper()
        elif isinstance(value, dict):
            _uppercase_levels(value)


def setup_logging_config(log_path: str | Path, logging_config_file_path: str | Path, user_logging_config: dict | None = None) -> dict:
    '''logging.yml merged with the user's overrides, log_path attached for the per-logger file handlers'''
    from crossrec.utils.utils import load_yaml_file, deep_update
    Path(log_path).mkdir(parents=True, exist_ok=True)
    logging_config: dict = load_yaml_file(logging_config_file_path) or {}
    if user_logging_config:
        deep_update(logging_config, copy.deepcopy(user_logging_config))
    _uppercase_levels(logging_config)
    logging_config['log_path'] = str(log_path)
    return logging_config


def setup_logging(log_path: str | Path, logging_config_file_path: str | Path, user_logging_config: dict | None = None) -> dict:
    '''≈ logging.config.dictConfig(logging_config) with per-logger log files'''
    from crossrec._logging.config import PerLoggerDictConfigurator
    logging_config = setup_logging_config(log_path, logging_config_file_path, user_logging_config=user_logging_config)
    PerLoggerDictConfigurator(logging_config).configure()
    return logging_config
