from crossrec.cli import crossrec_group


def run_cli() -> None:
    """Application Entrypoint."""
    crossrec_group(obj={})


if __name__ == '__main__':
    run_cli()
