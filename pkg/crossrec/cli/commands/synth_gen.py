import click

from crossrec.cli.utils import run_options, resolve_run_config, finalize_dir


@click.command(name='synth-gen')
@run_options
def synth_gen(config_path, seed, out_dir, overrides):
    """Generate a synthetic cross-domain task into OUT/data."""
    from crossrec import cprint
    from crossrec.features.dataset import write_task
    from crossrec.synth.generator import generate, max_label_share
    from crossrec.utils.artifacts import prepare_output_dir
    run_config = resolve_run_config(config_path, overrides, seed)
    data_dir = prepare_output_dir(out_dir) / 'data'
    task = generate(run_config.synth)
    write_task(task, data_dir)
    finalize_dir(data_dir, run_config)
    cprint(
        f'{len(task.source)} source / {len(task.target)} target / {len(task.val)} val / {len(task.test)} test users, '
        f'{task.num_labels} items (max label share {max_label_share(task):.3f}) -> {data_dir}',
        style='bold green',
    )
