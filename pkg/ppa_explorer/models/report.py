from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from ppa_explorer.models.cost import PPAResult
from ppa_explorer.models.dataflow import AccessStats
from ppa_explorer.models.dse import DesignPoint
from ppa_explorer.models.regression import PolynomialModel

PPA_UNITS = {
    'latency_s': 's',
    'energy_j': 'J',
    'avg_power_w': 'W',
    'area_mm2': 'mm^2',
    'throughput': 'MAC/s',
    'perf_per_area': 'MAC/s/mm^2',
    'mac_j': 'J',
    'spad_j': 'J',
    'glb_j': 'J',
    'dram_j': 'J',
    'leak_j': 'J',
}

STATS_UNITS = {
    'macs': 'MAC',
    'compute_cycles': 'cycles',
    'dram_cycles': 'cycles',
    'latency_cycles': 'cycles',
    'spad_ifmap_reads': 'entries',
    'spad_filter_reads': 'entries',
    'spad_psum_reads': 'entries',
    'spad_psum_writes': 'entries',
    'glb_ifmap_reads': 'entries',
    'glb_filter_reads': 'entries',
    'glb_ofmap_writes': 'entries',
    'dram_ifmap_bytes': 'bytes',
    'dram_filter_bytes': 'bytes',
    'dram_ofmap_bytes': 'bytes',
    'refetch_factor': 'ratio',
    'utilization': 'ratio',
}

CONFIG_UNITS = {
    'pe_rows': 'PEs',
    'pe_cols': 'PEs',
    'glb_bytes': 'bytes',
    'ifmap_spad_bytes': 'bytes',
    'filter_spad_bytes': 'bytes',
    'psum_spad_bytes': 'bytes',
    'dram_bw': 'bytes/cycle',
    'clock_hz': 'Hz',
    'act_bits': 'bits',
    'wgt_bits': 'bits',
}

POINT_UNITS = {
    **CONFIG_UNITS,
    **PPA_UNITS,
    'norm_perf_per_area': 'ratio',
    'norm_energy': 'ratio',
    'top1': 'fraction',
}

MODEL_UNITS = {
    'cv_rmse': 'target units',
    'coefficients': 'target units',
    'feature_shift': 'feature units',
    'feature_scale': 'feature units',
}

REQUIRED_UNITS = {
    'evaluate': {**PPA_UNITS, **STATS_UNITS},
    'explore': POINT_UNITS,
    'fit': MODEL_UNITS,
    'oracle': STATS_UNITS,
}


class RunReport(BaseModel):
    """Provenance-carrying result document."""
    model_config = ConfigDict(extra='forbid')

    tool_version: str
    kind: str
    input_digests: Dict[str, str]
    units: Dict[str, str]
    payload_digest: Optional[str] = None
    ppa: Optional[PPAResult] = None
    stats: Optional[AccessStats] = None
    points: Optional[List[DesignPoint]] = None
    model: Optional[PolynomialModel] = None
