from pathlib import Path

import click

from crossrec.cli.utils import run_options, resolve_run_config, finalize_dir, require_dir


@click.command(name='build-vocab')
@click.option('--data', 'data_dir', type=click.Path(file_okay=False, path_type=Path), help='Task directory, defaults to OUT/data')
@run_options
def build_vocab(data_dir, config_path, seed, out_dir, overrides):
    """Fit the user and item vocabularies on the training logs into OUT/vocab."""
    from crossrec import cprint
    from crossrec.features.dataset import read_task
    from crossrec.features.vectorizer import FeatureSpace, PlaytimeBuckets
    from crossrec.utils.artifacts import prepare_output_dir
    run_config = resolve_run_config(config_path, overrides, seed)
    task = read_task(require_dir(data_dir or out_dir / 'data', 'synth-gen'))
    features_config = run_config.features
    histories = [example.history for example in task.source + task.target]
    features = FeatureSpace.fit(
        histories,
        task.catalogs,
        user_capacity=features_config.user_vocab_capacity,
        item_capacity=features_config.item_vocab_capacity,
        playtime_buckets=PlaytimeBuckets(
            hours=features_config.playtime_hours,
            minutes=features_config.playtime_minutes,
            seconds=features_config.playtime_seconds,
        ),
    )
    vocab_dir = prepare_output_dir(out_dir) / 'vocab'
    features.save(vocab_dir)
    finalize_dir(vocab_dir, run_config)
    cprint(f'user vocabulary {features.user_dim} terms, item vectors of dim {features.item_dim} -> {vocab_dir}', style='bold green')
