import os
from pathlib import Path
from enum import StrEnum

import yaml
import numpy as np


# HACK: need to add this to yaml so that StrEnum can be dumped to yaml
yaml.SafeDumper.add_multi_representer(
    StrEnum,
    yaml.representer.SafeRepresenter.represent_str,
)
yaml.SafeDumper.add_multi_representer(
    Path,
    lambda dumper, data: dumper.represent_str(str(data))
)
yaml.SafeDumper.add_multi_representer(
    np.floating,
    lambda dumper, data: dumper.represent_float(float(data))
)
yaml.SafeDumper.add_multi_representer(
    np.integer,
    lambda dumper, data: dumper.represent_int(int(data))
)


def load_yaml_file(file_path) -> dict | list[dict] | None:
    if not os.path.exists(file_path):
        return None
    with open(file_path, 'r') as f:
        contents = list(yaml.safe_load_all(f))
        if not contents:
            return {}
        elif len(contents) == 1:
            return contents[0]
        else:
            return contents


def dump_yaml_file(file_path: str | Path, data: dict | list[dict]):
    with open(file_path, 'w') as f:
        yaml.safe_dump(data, f, default_flow_style=False, sort_keys=True)


def dump_yaml_str(data: dict) -> str:
    return yaml.safe_dump(data, default_flow_style=False, sort_keys=True)


def short_path(path: str | Path, last_n_parts: int=3) -> Path:
    parts = Path(path).parts[-last_n_parts:]
    return Path(*parts)


def parse_overrides(overrides: tuple[str, ...] | list[str]) -> dict:
    '''Parses "section.key=value" pairs into a nested dict, values are read as YAML scalars.
    e.g. ("train.epochs=5", "eval.methods=[NN, POP]") -> {'train': {'epochs': 5}, 'eval': {'methods': ['NN', 'POP']}}
    '''
    from crossrec.errors import ConfigError
    nested: dict = {}
    for override in overrides:
        if '=' not in override:
            raise ConfigError(f'invalid override {override!r}, expected "key=value"')
        key, raw_value = override.split('=', 1)
        keys = key.strip().split('.')
        if not all(keys):
            raise ConfigError(f'invalid override key {key!r}')
        node = nested
        for k in keys[:-1]:
            node = node.setdefault(k, {})
        node[keys[-1]] = yaml.safe_load(raw_value)
    return nested


def deep_update(default_dict: dict, override_dict: dict) -> dict:
    '''Updates a default dictionary with an override dictionary, supports nested dictionaries.'''
    for key, value in override_dict.items():
        default_value = default_dict.get(key)
        if isinstance(value, dict) and isinstance(default_value, dict):
            deep_update(default_value, value)
        else:
            default_dict[key] = value
    return default_dict
