'''Flags shared by the pipeline commands and the helpers that resolve their inputs.'''
from __future__ import annotations
from typing import TYPE_CHECKING
if TYPE_CHECKING:
    from crossrec.run_config import RunConfig

import functools
from pathlib import Path

import click


DEFAULT_OUT_DIR = 'crossrec-out'


def run_options(func):
    '''--config, --seed, --out and trailing "section.key=value" overrides'''
    @click.option('--config', '-c', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Run config YAML file')
    @click.option('--seed', '-s', type=int, default=None, help='Seed every stage with this value')
    @click.option('--out', '-o', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=DEFAULT_OUT_DIR, show_default=True, help='Output directory')
    @click.argument('overrides', nargs=-1)
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)
    return wrapper


def resolve_run_config(config_path: Path | None, overrides: tuple[str, ...], seed: int | None) -> RunConfig:
    from crossrec.run_config import load_run_config
    run_config = load_run_config(config_path, overrides)
    if seed is not None:
        run_config = run_config.with_seed(seed)
    return run_config


def finalize_dir(dir_path: Path, run_config: RunConfig):
    '''Echoes the resolved config into `dir_path` and refreshes its manifest.'''
    from crossrec.utils.artifacts import echo_config, write_manifest
    echo_config(dir_path, run_config.to_dict())
    write_manifest(dir_path)


def require_dir(dir_path: Path, hint: str) -> Path:
    if not dir_path.is_dir():
        raise click.UsageError(f'{dir_path} does not exist, run "crossrec {hint}" first or pass its location')
    return dir_path


def load_task_features(data_dir: Path, vocab_dir: Path):
    '''(task, feature space) from the outputs of "synth-gen" and "build-vocab"'''
    from crossrec.features.dataset import read_task
    from crossrec.features.vectorizer import FeatureSpace
    task = read_task(require_dir(data_dir, 'synth-gen'))
    features = FeatureSpace.load(require_dir(vocab_dir, 'build-vocab'))
    return task, features
