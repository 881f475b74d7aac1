"""evaluate: PPA of one network on one design point."""
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
from ppa_explorer.services.arch import load_arch, validate_config
from ppa_explorer.services.costmodel import evaluate_network, load_cost_table
from ppa_explorer.services.errors import InfeasibleConfigError, PPAExplorerError
from ppa_explorer.services.report import write_report
from ppa_explorer.services.workload import load_network


@click.command('evaluate')
@network_option
@num_classes_option
@click.option('--arch', 'arch_source', default='default', show_default=True,
              help="Architecture JSON file or 'default'.")
@click.option('--cost-table', 'table_source', default='default', show_default=True,
              help="Cost table JSON file or 'default'.")
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Report path.')
def evaluate(network_source, num_classes, arch_source, table_source, out):
    """Evaluate power, performance and area of a network on one architecture."""
    try:
        net = load_network(network_source, num_classes)
        cfg = load_arch(arch_source)
        table = load_cost_table(table_source)

        base = validate_config(cfg)
        if base:
            fail('invalid architecture: ' + '; '.join(base), 1)
        violations = validate_config(cfg, net)
        if violations:
            raise InfeasibleConfigError(violations)

        ppa, stats = evaluate_network(net, cfg, table)
        report = RunReport(
            tool_version=Config.TOOL_VERSION,
            kind='evaluate',
            input_digests={
                'network': network_source_digest(network_source, net),
                'arch': source_digest(arch_source, Config.ARCH_FILE),
                'cost_table': source_digest(table_source, Config.COST_TABLE_FILE),
            },
            units=dict(REQUIRED_UNITS['evaluate']),
            ppa=ppa,
            stats=stats,
        )
        write_report(report, out)
    except InfeasibleConfigError as e:
        for violation in e.violations:
            click.echo(f'  {violation}', err=True)
        fail(f'infeasible configuration ({len(e.violations)} violations)', 2)
    except PPAExplorerError as e:
        fail(str(e), 1)
    except OSError as e:
        fail(str(e), 1)
    except Exception as e:
        crash(e)

    click.echo(f'network       {net.name} ({len(net.layers)} layers, {stats.macs} MACs)')
    click.echo(f'pe_type       {cfg.pe_type.value} {cfg.pe_rows}x{cfg.pe_cols}')
    click.echo(f'latency       {ppa.latency_s:.6e} s ({stats.latency_cycles} cycles)')
    click.echo(f'energy        {ppa.energy_j:.6e} J')
    click.echo(f'power         {ppa.avg_power_w:.6e} W')
    click.echo(f'area          {ppa.area_mm2:.6f} mm^2')
    click.echo(f'perf/area     {ppa.perf_per_area:.6e} MAC/s/mm^2')
    click.echo(f'utilization   {stats.utilization:.4f}')
    click.echo(f'report        {out}')
