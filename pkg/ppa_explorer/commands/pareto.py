"""pareto: non-dominated subset of an explore CSV."""
import click

from ppa_explorer.commands.common import crash, fail
from ppa_explorer.services.dse import ACCURACY_METRICS, join_accuracy, load_accuracy, pareto_front, parse_objectives
from ppa_explorer.services.errors import PPAExplorerError
from ppa_explorer.services.report import read_points_csv, write_points_csv


@click.command('pareto')
@click.option('--points', 'points_path', required=True, type=click.Path(dir_okay=False),
              help='Points CSV from explore.')
@click.option('--objectives', default='perf_per_area:max,energy:min', show_default=True,
              help='Comma-separated metric:max|min list.')
@click.option('--accuracy', 'accuracy_path', type=click.Path(dir_okay=False), default=None,
              help='CSV with network,pe_type,top1 columns.')
@click.option('--network', default=None, help='Network name to look up in the accuracy table.')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Front CSV path.')
def pareto(points_path, objectives, accuracy_path, network, out):
    """Write the Pareto front of an explore CSV, sorted by the first objective."""
    try:
        parsed = parse_objectives(objectives)
        needs_accuracy = any(o.metric in ACCURACY_METRICS for o in parsed)
        if needs_accuracy and accuracy_path is None:
            fail('accuracy objectives need --accuracy', 1)
        if accuracy_path is not None and network is None:
            fail('--accuracy needs --network', 1)

        points = read_points_csv(points_path)
        if accuracy_path is not None:
            points = join_accuracy(points, load_accuracy(accuracy_path), network)
        front = pareto_front(points, parsed)
        write_points_csv(front, out)
    except PPAExplorerError as e:
        fail(str(e), 1)
    except OSError as e:
        fail(str(e), 1)
    except Exception as e:
        crash(e)

    feasible = sum(1 for p in points if p.feasible)
    click.echo(f'{len(front)} of {feasible} feasible points on the front -> {out}')
    for p in front:
        kind = p.cfg.pe_type.value
        click.echo(f'  {kind:<7} {p.cfg.pe_rows}x{p.cfg.pe_cols} glb={p.cfg.glb_bytes} '
                   f'perf/area={p.ppa.perf_per_area:.4e} energy={p.ppa.energy_j:.4e}'
                   + (f' top1={p.accuracy:.4f}' if p.accuracy is not None else ''))
