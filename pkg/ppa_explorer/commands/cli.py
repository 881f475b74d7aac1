"""Command-line entry point."""
import logging
import sys

import click

from ppa_explorer import data_path
from ppa_explorer.config import Config
from ppa_explorer.services.report import file_digest

LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'


def _print_version(ctx, param, value):
    if not value or ctx.resilient_parsing:
        return
    digest = file_digest(data_path(Config.COST_TABLE_FILE))
    click.echo(f'ppa-explorer {Config.TOOL_VERSION}')
    click.echo(f'cost table {Config.COST_TABLE_FILE} sha256:{digest}')
    ctx.exit()


@click.group()
@click.option('--version', is_flag=True, expose_value=False, is_eager=True, callback=_print_version,
              help='Show the version and the bundled cost table digest.')
@click.option('-v', '--verbose', is_flag=True, help='Log progress on stderr.')
@click.pass_context
def cli(ctx, verbose):
    """Quantization-aware PPA modeling and design space exploration."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger('ppa_explorer')
    root.addHandler(handler)
    root.setLevel(logging.INFO if verbose else logging.WARNING)
    ctx.call_on_close(lambda: root.removeHandler(handler))


# Register subcommands
from ppa_explorer.commands.evaluate import evaluate  # noqa: E402
from ppa_explorer.commands.explore import explore  # noqa: E402
from ppa_explorer.commands.fit import fit  # noqa: E402
from ppa_explorer.commands.oracle import oracle  # noqa: E402
from ppa_explorer.commands.pareto import pareto  # noqa: E402

cli.add_command(evaluate)
cli.add_command(explore)
cli.add_command(fit)
cli.add_command(pareto)
cli.add_command(oracle)
