#!/usr/bin/env python3
"""Write a regression samples CSV by exploring a grid.

Usage:
    uv run python scripts/generate_samples.py --network resnet20 --pe-type INT16 --out int16.csv
    uv run ppa-explorer fit --samples int16.csv --target area --out area_int16.json
"""
import sys
from pathlib import Path

import click

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from ppa_explorer.models.arch import PEType  # noqa: E402
from ppa_explorer.services.costmodel import load_cost_table  # noqa: E402
from ppa_explorer.services.dse import explore, load_grid  # noqa: E402
from ppa_explorer.services.report import write_points_csv  # noqa: E402
from ppa_explorer.services.workload import load_network  # noqa: E402


@click.command()
@click.option('--network', 'network_source', default='resnet20', show_default=True)
@click.option('--grid', 'grid_source', default='default', show_default=True)
@click.option('--cost-table', 'table_source', default='default', show_default=True)
@click.option('--pe-type', default=None, help='Keep only this PE type (one surrogate per type).')
@click.option('--out', required=True, type=click.Path(dir_okay=False))
def main(network_source, grid_source, table_source, pe_type, out):
    net = load_network(network_source)
    grid = load_grid(grid_source)
    if pe_type is not None:
        grid = grid.model_copy(update={'pe_types': [PEType.parse(pe_type)]})
    points = explore(net, grid, load_cost_table(table_source), normalize=False)
    write_points_csv(points, out)
    feasible = sum(1 for p in points if p.feasible)
    click.echo(f'{feasible} feasible of {len(points)} points -> {out}')


if __name__ == '__main__':
    main()
