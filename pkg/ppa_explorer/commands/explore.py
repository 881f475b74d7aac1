"""explore: evaluate every point of a design grid."""
import click

from ppa_explorer.commands.common import (
    crash,
    fail,
    network_option,
    network_source_digest,
    num_classes_option,
    source_digest,
)
from ppa_explorer.config import Config
from ppa_explorer.models.report import REQUIRED_UNITS, RunReport
from ppa_explorer.services.costmodel import load_cost_table
from ppa_explorer.services.dse import explore as explore_grid
from ppa_explorer.services.dse import load_grid, normalize, pe_type_summary
from ppa_explorer.services.errors import NormalizationError, PPAExplorerError
from ppa_explorer.services.report import write_points_csv, write_report
from ppa_explorer.services.workload import load_network


def _fmt(value, spec: str = '.3f') -> str:
    return '-' if value is None else format(value, spec)


@click.command('explore')
@network_option
@num_classes_option
@click.option('--grid', 'grid_source', default='default', show_default=True,
              help="Grid JSON file or 'default'.")
@click.option('--cost-table', 'table_source', default='default', show_default=True,
              help="Cost table JSON file or 'default'.")
@click.option('--normalize', 'normalize_points', is_flag=True,
              help='Fill the normalized columns against the best INT16 point.')
@click.option('--workers', type=int, default=Config.EXPLORE_WORKERS, show_default=True)
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Points CSV path.')
@click.option('--report', 'report_path', type=click.Path(dir_okay=False), default=None,
              help='Also write a JSON run report with the points.')
def explore(network_source, num_classes, grid_source, table_source, normalize_points,
            workers, out, report_path):
    """Explore a design grid and write one CSV row per design point."""
    try:
        net = load_network(network_source, num_classes)
        grid = load_grid(grid_source)
        table = load_cost_table(table_source)
        points = explore_grid(net, grid, table, normalize=False, workers=workers)
        if normalize_points:
            points = normalize(points)

        write_points_csv(points, out)
        if report_path:
            write_report(RunReport(
                tool_version=Config.TOOL_VERSION,
                kind='explore',
                input_digests={
                    'network': network_source_digest(network_source, net),
                    'grid': source_digest(grid_source, Config.GRID_FILE),
                    'cost_table': source_digest(table_source, Config.COST_TABLE_FILE),
                },
                units=dict(REQUIRED_UNITS['explore']),
                points=points,
            ), report_path)
    except NormalizationError as e:
        fail(str(e), 3)
    except PPAExplorerError as e:
        fail(str(e), 1)
    except OSError as e:
        fail(str(e), 1)
    except Exception as e:
        crash(e)

    feasible = sum(1 for p in points if p.feasible)
    click.echo(f'{net.name}: {len(points)} points, {feasible} feasible -> {out}')
    click.echo(f"{'pe_type':<8} {'feasible':>8} {'best perf/area':>15} {'min energy J':>13} "
               f"{'ppa/INT16':>10} {'E/INT16':>8} {'ppa/FP32':>9} {'E/FP32':>8}")
    for row in pe_type_summary(points):
        click.echo(f'{row.pe_type.value:<8} {row.feasible_points:>8} '
                   f'{_fmt(row.best_perf_per_area, ".4e"):>15} {_fmt(row.min_energy_j, ".4e"):>13} '
                   f'{_fmt(row.perf_per_area_vs_int16):>10} {_fmt(row.energy_vs_int16):>8} '
                   f'{_fmt(row.perf_per_area_vs_fp32):>9} {_fmt(row.energy_vs_fp32):>8}')
