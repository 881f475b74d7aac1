"""oracle: closed-form statistics against the loop-nest walk."""
import click

from ppa_explorer.commands.common import crash, fail, network_option, num_classes_option
from ppa_explorer.config import Config
from ppa_explorer.services.arch import load_arch, validate_config
from ppa_explorer.services.dataflow import STATS_FIELDS, layer_stats, simulate_layer_oracle, stats_diff
from ppa_explorer.services.errors import (
    InfeasibleConfigError,
    OracleGuardError,
    OracleMismatchError,
    PPAExplorerError,
)
from ppa_explorer.services.workload import layer_macs, load_network


@click.command('oracle')
@network_option
@num_classes_option
@click.option('--arch', 'arch_source', default='default', show_default=True,
              help="Architecture JSON file or 'default'.")
def oracle(network_source, num_classes, arch_source):
    """Check layer_stats against the brute-force loop nest, layer by layer."""
    try:
        net = load_network(network_source, num_classes)
        cfg = load_arch(arch_source)
        for layer in net.layers:
            if layer_macs(layer) > Config.ORACLE_MAC_GUARD:
                raise OracleGuardError(
                    f"layer '{layer.name}' has {layer_macs(layer)} MACs, above the oracle guard "
                    f'of {Config.ORACLE_MAC_GUARD}'
                )
        violations = validate_config(cfg, net)
        if violations:
            raise InfeasibleConfigError(violations)

        for layer in net.layers:
            analytical = layer_stats(layer, cfg)
            simulated = simulate_layer_oracle(layer, cfg)
            click.echo(f'layer {layer.name}')
            click.echo(f"  {'field':<20} {'analytical':>16} {'simulated':>16}")
            for field in STATS_FIELDS:
                a, s = getattr(analytical, field), getattr(simulated, field)
                mark = '' if a == s else '  <-- differs'
                click.echo(f'  {field:<20} {a!s:>16} {s!s:>16}{mark}')
            diff = stats_diff(analytical, simulated)
            if diff:
                field, a, s = diff[0]
                raise OracleMismatchError(layer.name, field, a, s)
    except OracleMismatchError as e:
        fail(str(e), 5)
    except InfeasibleConfigError as e:
        for violation in e.violations:
            click.echo(f'  {violation}', err=True)
        fail(f'infeasible configuration ({len(e.violations)} violations)', 2)
    except PPAExplorerError as e:
        fail(str(e), 1)
    except Exception as e:
        crash(e)

    click.echo(f'{net.name}: {len(net.layers)} layers match exactly')
