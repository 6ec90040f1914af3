from pathlib import Path

import click

from crossrec.cli.utils import run_options, resolve_run_config, load_task_features


@click.command()
@click.option('--data', 'data_dir', type=click.Path(file_okay=False, path_type=Path), help='Task directory, defaults to OUT/data')
@click.option('--vocab', 'vocab_dir', type=click.Path(file_okay=False, path_type=Path), help='Vocabulary directory, defaults to OUT/vocab')
@click.option('--sdae', 'sdae_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Pretrained SDAE shared by every seed, defaults to OUT/models/sdae.npz when present')
@click.option('--num-workers', '-w', type=int, default=None, help='Seeds run in parallel, defaults to the num_workers setting')
@run_options
@click.pass_context
def evaluate(ctx, data_dir, vocab_dir, sdae_path, num_workers, config_path, seed, out_dir, overrides):
    """Train and test every configured method over every seed, reports go to OUT/reports.

    --seed restricts the run to that single seed.
    """
    from rich.table import Table
    from crossrec import cprint
    from crossrec.cli.commands.train import load_pretrained_sdae
    from crossrec.engines.experiment_engine import ExperimentEngine, prepare_data
    from crossrec.evaluation.report import aggregate
    from crossrec.utils.artifacts import prepare_output_dir
    run_config = resolve_run_config(config_path, overrides, seed)
    if seed is not None:
        run_config = run_config.model_copy(update={'eval': run_config.eval.model_copy(update={'seeds': [seed]})})
    task, features = load_task_features(data_dir or out_dir / 'data', vocab_dir or out_dir / 'vocab')
    out_dir = prepare_output_dir(out_dir)
    num_workers = num_workers or ctx.obj['config'].num_workers
    engine = ExperimentEngine(
        run_config,
        prepare_data(task, features),
        out_dir=out_dir,
        num_workers=num_workers,
        sdae=load_pretrained_sdae(sdae_path, out_dir),
    )
    reports = engine.run()

    table = Table(title=f'{len(run_config.eval.seeds)} seed(s), {reports[0].n_test} test users per seed')
    for column in ('method', 'metric', 'K', 'mean', 'sd'):
        table.add_column(column, justify='right' if column in ('K', 'mean', 'sd') else 'left')
    for row in aggregate(reports):
        table.add_row(row.method, row.metric, str(row.K), f'{row.mean:.4f}', f'{row.sd:.4f}')
    cprint(table)
    cprint(f'reports -> {out_dir / "reports"}', style='bold green')
