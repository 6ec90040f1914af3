from crossrec.cli.main import crossrec_group


__all__ = ["crossrec_group"]
