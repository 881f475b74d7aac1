"""Energy, latency and area of a network on a design point."""
import logging
import os
from typing import Optional, Tuple

from pydantic import ValidationError

from ppa_explorer import data_path
from ppa_explorer.config import Config
from ppa_explorer.models.arch import AcceleratorConfig
from ppa_explorer.models.cost import CostTable, PECost, PPAResult
from ppa_explorer.models.dataflow import AccessStats
from ppa_explorer.models.workload import Network
from ppa_explorer.services.dataflow import network_stats
from ppa_explorer.services.errors import ConfigError, describe_validation_error

logger = logging.getLogger(__name__)

PJ = 1e-12
UM2_PER_MM2 = 1e6
MW = 1e-3

_default_table: Optional[CostTable] = None


def accelerator_area(cfg: AcceleratorConfig, table: CostTable) -> float:
    """Silicon area in um^2."""
    pe_area = table.pe[cfg.pe_type].a_pe_logic + cfg.spad_bytes_per_pe * table.a_spad_byte
    return table.overhead_factor * (cfg.num_pes * pe_area + cfg.glb_bytes * table.a_glb_byte)


def ppa_from_stats(stats: AccessStats, cfg: AcceleratorConfig, table: CostTable) -> PPAResult:
    """Cost a network's access statistics with the table."""
    pe = cfg.pe_type
    area_mm2 = accelerator_area(cfg, table) / UM2_PER_MM2
    latency_s = stats.latency_cycles / cfg.clock_hz

    mac_j = stats.macs * table.pe[pe].e_mac * PJ
    spad_bits = (stats.spad_ifmap_reads * pe.act_bits
                 + stats.spad_filter_reads * pe.wgt_bits
                 + (stats.spad_psum_reads + stats.spad_psum_writes) * pe.psum_bits)
    spad_j = spad_bits * table.e_spad_bit * PJ
    glb_bits = (stats.glb_ifmap_reads * pe.act_bits
                + stats.glb_filter_reads * pe.wgt_bits
                + stats.glb_ofmap_writes * pe.act_bits)
    glb_j = glb_bits * table.e_glb_bit * PJ
    dram_j = stats.dram_bytes * 8 * table.e_dram_bit * PJ
    leak_j = table.p_leak_density * MW * area_mm2 * latency_s
    energy_j = mac_j + spad_j + glb_j + dram_j + leak_j

    throughput = stats.macs / latency_s
    return PPAResult(
        latency_s=latency_s,
        energy_j=energy_j,
        avg_power_w=energy_j / latency_s,
        area_mm2=area_mm2,
        throughput=throughput,
        perf_per_area=throughput / area_mm2,
        mac_j=mac_j,
        spad_j=spad_j,
        glb_j=glb_j,
        dram_j=dram_j,
        leak_j=leak_j,
    )


def evaluate_network(net: Network, cfg: AcceleratorConfig,
                     table: CostTable) -> Tuple[PPAResult, AccessStats]:
    """PPA together with the network statistics it was derived from."""
    stats = network_stats(net, cfg)
    return ppa_from_stats(stats, cfg, table), stats


def evaluate_ppa(net: Network, cfg: AcceleratorConfig, table: CostTable) -> PPAResult:
    """PPA of a network on one design point."""
    return evaluate_network(net, cfg, table)[0]


def parse_cost_table(text: str) -> CostTable:
    try:
        return CostTable.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError(describe_validation_error(e, 'invalid cost table')) from e


def load_cost_table(source: str) -> CostTable:
    """Bundled table for ``default``, otherwise a file path."""
    if source == 'default':
        return default_cost_table()
    if not os.path.exists(source):
        raise ConfigError(f"cost table file '{source}' not found")
    with open(source, 'r', encoding='utf-8') as f:
        return parse_cost_table(f.read())


def default_cost_table() -> CostTable:
    """The bundled 45 nm-class table, read once per process."""
    global _default_table
    if _default_table is None:
        path = data_path(Config.COST_TABLE_FILE)
        if not os.path.exists(path):
            raise ConfigError(f'bundled cost table missing: {path}')
        with open(path, 'r', encoding='utf-8') as f:
            _default_table = parse_cost_table(f.read())
        logger.debug('loaded bundled cost table from %s', path)
    return _default_table


def dump_cost_table(table: CostTable) -> str:
    return table.model_dump_json(indent=2)


def scale_energies(table: CostTable, factor: float) -> CostTable:
    """Multiply every energy and leakage primitive by ``factor``."""
    if not factor > 0:
        raise ConfigError(f'energy scale factor must be > 0, got {factor}')
    pe = {t: PECost(e_mac=c.e_mac * factor, a_pe_logic=c.a_pe_logic) for t, c in table.pe.items()}
    return table.model_copy(update={
        'pe': pe,
        'e_spad_bit': table.e_spad_bit * factor,
        'e_glb_bit': table.e_glb_bit * factor,
        'e_dram_bit': table.e_dram_bit * factor,
        'p_leak_density': table.p_leak_density * factor,
    })
