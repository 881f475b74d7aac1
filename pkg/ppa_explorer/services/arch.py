"""Design point validation and scratchpad capacity arithmetic."""
import logging
import os
from typing import List, Optional, Tuple, Union

from pydantic import ValidationError

from ppa_explorer import data_path
from ppa_explorer.config import Config
from ppa_explorer.models.arch import AcceleratorConfig
from ppa_explorer.models.workload import LayerConfig, Network
from ppa_explorer.services.errors import ConfigError, describe_validation_error

logger = logging.getLogger(__name__)

_COUNT_FIELDS = ('pe_rows', 'pe_cols', 'glb_bytes', 'ifmap_spad_bytes',
                 'filter_spad_bytes', 'psum_spad_bytes')


def spad_capacity_entries(spad_bytes: int, entry_bits: int) -> int:
    """Whole entries of ``entry_bits`` that fit in ``spad_bytes``."""
    return (spad_bytes * 8) // entry_bits


def required_spad_entries(layer: LayerConfig) -> Tuple[int, int, int]:
    """(ifmap, filter, psum) entries one PE needs for a row-stationary pass."""
    return layer.padded_width, layer.filter_width, layer.out_width


def validate_config(cfg: AcceleratorConfig,
                    against: Optional[Union[Network, LayerConfig]] = None) -> List[str]:
    """Return the violation list; empty means the point is feasible."""
    violations = []
    for field in _COUNT_FIELDS:
        if getattr(cfg, field) < 1:
            violations.append(f'{field} must be ≥ 1')
    if not cfg.dram_bw > 0:
        violations.append('dram_bw must be > 0')
    if not cfg.clock_hz > 0:
        violations.append('clock_hz must be > 0')
    if violations or against is None:
        return violations

    layers = [against] if isinstance(against, LayerConfig) else against.layers
    pe = cfg.pe_type
    ifmap_cap = spad_capacity_entries(cfg.ifmap_spad_bytes, pe.act_bits)
    filter_cap = spad_capacity_entries(cfg.filter_spad_bytes, pe.wgt_bits)
    psum_cap = spad_capacity_entries(cfg.psum_spad_bytes, pe.psum_bits)
    for layer in layers:
        need_ifmap, need_filter, need_psum = required_spad_entries(layer)
        if filter_cap < need_filter:
            violations.append(
                f"layer '{layer.name}': filter_spad_bytes holds {filter_cap} x {pe.wgt_bits}-bit "
                f"entries, needs {need_filter} (one filter row)"
            )
        if ifmap_cap < need_ifmap:
            violations.append(
                f"layer '{layer.name}': ifmap_spad_bytes holds {ifmap_cap} x {pe.act_bits}-bit "
                f"entries, needs {need_ifmap} (one padded input row)"
            )
        if psum_cap < need_psum:
            violations.append(
                f"layer '{layer.name}': psum_spad_bytes holds {psum_cap} x {pe.psum_bits}-bit "
                f"entries, needs {need_psum} (one output row)"
            )
    return violations


def parse_arch(text: str) -> AcceleratorConfig:
    """Parse a JSON architecture document."""
    try:
        return AcceleratorConfig.model_validate_json(text)
    except ValidationError as e:
        raise ConfigError(describe_validation_error(e, 'invalid architecture')) from e


def load_arch(source: str) -> AcceleratorConfig:
    """Bundled architecture for ``default``, otherwise a file path."""
    path = data_path(Config.ARCH_FILE) if source == 'default' else source
    if not os.path.exists(path):
        raise ConfigError(f"architecture file '{source}' not found")
    with open(path, 'r', encoding='utf-8') as f:
        return parse_arch(f.read())
