import click
from trogon import tui

from crossrec.config import get_config
from crossrec.errors import CrossRecError
from crossrec.cli.commands.config import config
from crossrec.cli.commands.synth_gen import synth_gen
from crossrec.cli.commands.build_vocab import build_vocab
from crossrec.cli.commands.train_sdae import train_sdae
from crossrec.cli.commands.train import train
from crossrec.cli.commands.evaluate import evaluate
from crossrec.cli.commands.recommend import recommend
from crossrec.cli.commands.gradcheck import gradcheck


class CrossRecGroup(click.Group):
    '''Reports CrossRecErrors as a one-line diagnostic with exit code 1 instead of a traceback'''
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CrossRecError as err:
            raise click.ClickException(f'{type(err).__name__}: {err}') from err


@tui(command='tui', help="Open terminal UI")
@click.group(cls=CrossRecGroup, context_settings={"help_option_names": ["-h", "--help"]})
@click.pass_context
@click.version_option()
def crossrec_group(ctx):
    """crossrec's CLI"""
    ctx.ensure_object(dict)
    ctx.obj['config'] = get_config()
    ctx.obj['config'].setup_logging()


crossrec_group.add_command(config)
crossrec_group.add_command(synth_gen)
crossrec_group.add_command(build_vocab)
crossrec_group.add_command(train_sdae)
crossrec_group.add_command(train)
crossrec_group.add_command(evaluate)
crossrec_group.add_command(recommend)
crossrec_group.add_command(gradcheck)
