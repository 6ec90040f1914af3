from pathlib import Path

import click

from crossrec.cli.utils import run_options, resolve_run_config, finalize_dir, load_task_features


SDAE_FILENAME = 'sdae.npz'


@click.command(name='train-sdae')
@click.option('--data', 'data_dir', type=click.Path(file_okay=False, path_type=Path), help='Task directory, defaults to OUT/data')
@click.option('--vocab', 'vocab_dir', type=click.Path(file_okay=False, path_type=Path), help='Vocabulary directory, defaults to OUT/vocab')
@run_options
def train_sdae(data_dir, vocab_dir, config_path, seed, out_dir, overrides):
    """Pretrain the item SDAE on the source catalog into OUT/models/sdae.npz."""
    from crossrec import cprint
    from crossrec.enums import Domain
    from crossrec.training.trainer import pretrain_sdae
    from crossrec.utils.artifacts import prepare_output_dir
    run_config = resolve_run_config(config_path, overrides, seed)
    task, features = load_task_features(data_dir or out_dir / 'data', vocab_dir or out_dir / 'vocab')
    item_features = features.item_matrix(task.catalogs[Domain.SOURCE])
    sdae, trace = pretrain_sdae(item_features, run_config.sdae, run_config.train)
    models_dir = prepare_output_dir(out_dir) / 'models'
    sdae.dump(models_dir / SDAE_FILENAME)
    finalize_dir(models_dir, run_config)
    final_loss = f'{trace[-1]:.6f}' if trace else 'n/a'
    cprint(f'SDAE on {item_features.shape[0]} items, final reconstruction loss {final_loss} -> {models_dir / SDAE_FILENAME}', style='bold green')
