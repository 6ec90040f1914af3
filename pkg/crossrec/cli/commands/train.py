from pathlib import Path

import click

from crossrec.enums import Method
from crossrec.cli.utils import run_options, resolve_run_config, finalize_dir, load_task_features


def model_filename(method: Method | str) -> str:
    return f'{Method(method)}.npz'


def sdae_filename(method: Method | str) -> str:
    '''the SDAE a method trained jointly, next to its model'''
    return f'{Method(method)}.sdae.npz'


def load_pretrained_sdae(sdae_path: Path | None, out_dir: Path):
    '''The SDAE given by --sdae, else OUT/models/sdae.npz when "train-sdae" has run, else None'''
    from crossrec.models.sdae import SdaeModel
    from crossrec.cli.commands.train_sdae import SDAE_FILENAME
    if sdae_path is None:
        sdae_path = out_dir / 'models' / SDAE_FILENAME
        if not sdae_path.is_file():
            return None
    return SdaeModel.load(sdae_path)


@click.command()
@click.option('--method', '-m', type=click.Choice([m.value for m in Method if m.needs_model()]), default=Method.I_DSN.value, show_default=True, help='Model variant')
@click.option('--data', 'data_dir', type=click.Path(file_okay=False, path_type=Path), help='Task directory, defaults to OUT/data')
@click.option('--vocab', 'vocab_dir', type=click.Path(file_okay=False, path_type=Path), help='Vocabulary directory, defaults to OUT/vocab')
@click.option('--sdae', 'sdae_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Pretrained SDAE, defaults to OUT/models/sdae.npz when present')
@run_options
def train(method, data_dir, vocab_dir, sdae_path, config_path, seed, out_dir, overrides):
    """Train one model over the weight-decay grid and keep the selected checkpoint in OUT/models."""
    from crossrec import cprint
    from crossrec.engines.experiment_engine import ExperimentEngine, prepare_data
    from crossrec.utils.artifacts import prepare_output_dir, write_manifest
    method = Method(method)
    run_config = resolve_run_config(config_path, overrides, seed)
    seed = run_config.train.seed
    task, features = load_task_features(data_dir or out_dir / 'data', vocab_dir or out_dir / 'vocab')
    out_dir = prepare_output_dir(out_dir)
    engine = ExperimentEngine(run_config, prepare_data(task, features), out_dir=out_dir, sdae=load_pretrained_sdae(sdae_path, out_dir))
    source, val, _ = engine.splits(seed)
    sdae = engine.sdae_for_seed(seed) if method.uses_sdae() else None
    result = engine.train_method(method, seed, source, val, sdae)
    model = result.best.load_model(template=engine.build_model(seed))
    models_dir = out_dir / 'models'
    model.dump(models_dir / model_filename(method))
    if result.best.sdae_path is not None or result.best.sdae_state is not None:
        result.best.load_sdae(template=sdae).dump(models_dir / sdae_filename(method))
    finalize_dir(models_dir, run_config)
    write_manifest(out_dir / 'checkpoints')
    metric = run_config.train.selection_criterion.metric_name
    cprint(
        f'{method}: selected wd={result.best.weight_decay:g} epoch {result.best.epoch} '
        f'({metric}={result.best.metrics[metric]:.5f}) -> {models_dir / model_filename(method)}',
        style='bold green',
    )
