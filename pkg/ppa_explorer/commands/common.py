"""Helpers shared by the subcommands."""
import logging
from typing import NoReturn

import click

from ppa_explorer import data_path
from ppa_explorer.models.workload import Network
from ppa_explorer.services.report import file_digest
from ppa_explorer.services.workload import PRESETS, network_digest

logger = logging.getLogger('ppa_explorer.commands')

network_option = click.option('--network', 'network_source', required=True,
                              help='Preset name or network JSON file.')
num_classes_option = click.option('--num-classes', type=int, default=None,
                                  help='Override the classifier width of a preset.')


def fail(message: str, code: int = 1) -> NoReturn:
    """Report on stderr and exit with ``code``."""
    click.echo(f'error: {message}', err=True)
    raise SystemExit(code)


def crash(exc: Exception) -> NoReturn:
    """Catch-all branch: log the traceback, exit 1."""
    logger.exception('unexpected failure')
    fail(f'{type(exc).__name__}: {exc}', 1)


def source_digest(source: str, bundled_file: str) -> str:
    """Digest of an input named on the command line (``default`` = bundled file)."""
    return file_digest(data_path(bundled_file) if source == 'default' else source)


def network_source_digest(source: str, net: Network) -> str:
    """File digest for network files, canonical-JSON digest for presets."""
    return network_digest(net) if source in PRESETS else file_digest(source)
