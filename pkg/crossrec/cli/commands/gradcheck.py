import click


@click.command()
@click.option('--seed', '-s', type=int, default=0, show_default=True, help='Seed of the toy graphs')
@click.option('--floor', type=click.FloatRange(min=0.0, min_open=True), default=None, help='Gradient magnitude below which errors are compared in absolute terms, default 1e-4')
def gradcheck(seed, floor):
    """Check every hand-written backward pass against central differences, exit 1 on failure."""
    from rich.table import Table
    from crossrec import cprint
    from crossrec.verification import run_verification_suite, TOLERANCE, REL_ERROR_FLOOR
    results = run_verification_suite(seed, floor=floor or REL_ERROR_FLOOR)
    table = Table(title=f'gradient checks (tolerance {TOLERANCE:g})')
    for column in ('graph', 'entries', 'max rel error', 'worst param', 'status'):
        table.add_column(column)
    for result in results:
        status = '[green]ok[/green]' if result.passed else '[red]FAILED[/red]'
        table.add_row(result.name, str(result.num_checked), f'{result.max_rel_error:.3e}', result.worst_param or '-', status)
    cprint(table)
    failed = [result.name for result in results if not result.passed]
    if failed:
        raise click.ClickException(f'{len(failed)} gradient check(s) failed: {", ".join(failed)}')
