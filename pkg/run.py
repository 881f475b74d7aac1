"""Command-line entry point (same as the ppa-explorer script)."""
from ppa_explorer.commands.cli import cli

if __name__ == '__main__':
    cli()
