from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ppa_explorer.config import Config
from ppa_explorer.models.arch import PEType

# cheapest first; e_mac and a_pe_logic must be strictly increasing along it
PE_COST_ORDER = (PEType.LIGHT1, PEType.LIGHT2, PEType.INT16, PEType.FP32)

COST_TABLE_UNITS = {
    'e_mac': 'pJ/op',
    'a_pe_logic': 'um^2',
    'e_spad_bit': 'pJ/bit',
    'e_glb_bit': 'pJ/bit',
    'e_dram_bit': 'pJ/bit',
    'a_spad_byte': 'um^2/byte',
    'a_glb_byte': 'um^2/byte',
    'p_leak_density': 'mW/mm^2',
    'overhead_factor': 'ratio',
}


class PECost(BaseModel):
    """Per-PE-type primitives."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    e_mac: float
    a_pe_logic: float


class CostTable(BaseModel):
    """Calibratable energy/area primitives standing in for synthesis results."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    pe: Dict[PEType, PECost]
    e_spad_bit: float
    e_glb_bit: float
    e_dram_bit: float
    a_spad_byte: float
    a_glb_byte: float
    p_leak_density: float
    overhead_factor: float = Config.DEFAULT_OVERHEAD_FACTOR
    units: Dict[str, str] = Field(default_factory=lambda: dict(COST_TABLE_UNITS))
    source: Optional[str] = None

    @model_validator(mode='after')
    def check_table(self):
        """Positive values, every PE type present, precision ordering."""
        missing = [t.value for t in PEType if t not in self.pe]
        if missing:
            raise ValueError(f"cost table lacks PE types: {', '.join(missing)}")
        for pe_type, cost in self.pe.items():
            if cost.e_mac <= 0 or cost.a_pe_logic <= 0:
                raise ValueError(f'{pe_type.value}: e_mac and a_pe_logic must be > 0')
        for field in ('e_spad_bit', 'e_glb_bit', 'e_dram_bit', 'a_spad_byte',
                      'a_glb_byte', 'p_leak_density'):
            if getattr(self, field) <= 0:
                raise ValueError(f'{field} must be > 0')
        if self.overhead_factor < 1:
            raise ValueError('overhead_factor must be >= 1')
        for lower, higher in zip(PE_COST_ORDER, PE_COST_ORDER[1:]):
            for field in ('e_mac', 'a_pe_logic'):
                if not getattr(self.pe[lower], field) < getattr(self.pe[higher], field):
                    raise ValueError(
                        f'{field} ordering violated: {higher.value} must exceed {lower.value}'
                    )
        return self


class PPAResult(BaseModel):
    """Power, performance and area of one (network, config, table) evaluation."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    latency_s: float
    energy_j: float
    avg_power_w: float
    area_mm2: float
    throughput: float
    perf_per_area: float
    mac_j: float
    spad_j: float
    glb_j: float
    dram_j: float
    leak_j: float
