from pathlib import Path

import click

from crossrec.enums import Domain, Method
from crossrec.cli.utils import DEFAULT_OUT_DIR, load_task_features


def parse_item_ids(raw: str) -> list[str]:
    item_ids = [item_id.strip() for item_id in raw.split(',') if item_id.strip()]
    if not item_ids:
        raise click.BadParameter('expected a comma-separated list of item ids', param_hint='--items')
    return item_ids


def target_histories(items: str | None, log_path: Path | None, catalogs) -> list:
    '''Target-domain histories to serve, one per user'''
    from crossrec.features.records import UserHistory, read_logs, group_histories
    if (items is None) == (log_path is None):
        raise click.UsageError('pass exactly one of --items or --log')
    if items is not None:
        item_ids = parse_item_ids(items)
        unknown = [item_id for item_id in item_ids if item_id not in catalogs[Domain.TARGET]]
        if unknown:
            raise click.BadParameter(f'not in the target catalog: {", ".join(unknown)}', param_hint='--items')
        return [UserHistory('cli', Domain.TARGET, list(enumerate(item_ids)))]
    try:
        grouped = group_histories(read_logs(log_path), catalogs)
    except (KeyError, ValueError) as err:
        raise click.BadParameter(str(err), param_hint='--log') from err
    histories = [by_domain[Domain.TARGET] for by_domain in grouped.values() if Domain.TARGET in by_domain]
    if not histories:
        raise click.BadParameter(f'{log_path} has no target-domain events', param_hint='--log')
    return histories


@click.command()
@click.option('--items', '-i', help='Comma-separated target-domain item ids of one user')
@click.option('--log', 'log_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='TSV log, every user with target events is served')
@click.option('--top-k', '-k', 'K', type=click.IntRange(min=1), default=10, show_default=True, help='Number of items to return')
@click.option('--model', 'model_path', type=click.Path(exists=True, dir_okay=False, path_type=Path), help='Model snapshot, defaults to OUT/models/I-DSN.npz')
@click.option('--data', 'data_dir', type=click.Path(file_okay=False, path_type=Path), help='Task directory holding the catalogs, defaults to OUT/data')
@click.option('--vocab', 'vocab_dir', type=click.Path(file_okay=False, path_type=Path), help='Vocabulary directory, defaults to OUT/vocab')
@click.option('--out', '-o', 'out_dir', type=click.Path(file_okay=False, path_type=Path), default=DEFAULT_OUT_DIR, show_default=True, help='Output directory of the pipeline')
def recommend(items, log_path, K, model_path, data_dir, vocab_dir, out_dir):
    """Rank source-domain items for target-domain users by v_k·u."""
    from rich.table import Table
    from crossrec import cprint
    from crossrec.cli.commands.train import model_filename
    from crossrec.evaluation.evaluator import recommend_topk
    from crossrec.models.dsn import DsnModel
    task, features = load_task_features(data_dir or out_dir / 'data', vocab_dir or out_dir / 'vocab')
    model = DsnModel.load(model_path or out_dir / 'models' / model_filename(Method.I_DSN))
    if model.input_dim != features.user_dim:
        raise click.UsageError(f'model expects {model.input_dim} input features, vocabulary has {features.user_dim}')
    item_ids = task.catalogs[Domain.SOURCE].item_ids
    if len(item_ids) != model.num_labels:
        raise click.UsageError(f'model has {model.num_labels} labels, source catalog has {len(item_ids)} items')
    for history in target_histories(items, log_path, task.catalogs):
        x = features.user_vector(history, task.catalogs).to_dense()
        recommendation = recommend_topk(model, x, K)
        table = Table(title=f'user {history.user_id} ({len(history)} target events)')
        table.add_column('rank', justify='right')
        table.add_column('item_id')
        table.add_column('score', justify='right')
        for rank, (label, score) in enumerate(zip(recommendation.labels, recommendation.scores), start=1):
            table.add_row(str(rank), item_ids[label], f'{score:.6f}')
        cprint(table)
        if recommendation.truncated:
            cprint(f'K={K} exceeds the {model.num_labels} items in the catalog, returned all of them', style='bold yellow')
