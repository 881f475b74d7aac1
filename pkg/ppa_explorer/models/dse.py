from enum import Enum
from typing import Dict, List, Optional

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, field_validator, model_validator

from ppa_explorer.config import Config
from ppa_explorer.models.arch import AcceleratorConfig, PEType
from ppa_explorer.models.cost import PPAResult


class SpadPreset(BaseModel):
    """Paired scratchpad sizes."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    name: str
    ifmap_spad_bytes: int
    filter_spad_bytes: int
    psum_spad_bytes: int


class GridSpec(BaseModel):
    """Value lists spanning the design space."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    pe_rows: List[int]
    pe_cols: List[int]
    glb_bytes: List[int]
    ifmap_spad_bytes: Optional[List[int]] = None
    filter_spad_bytes: Optional[List[int]] = None
    psum_spad_bytes: Optional[List[int]] = None
    spad_presets: Optional[List[SpadPreset]] = None
    dram_bw: List[float]
    clock_hz: List[float] = Field(default_factory=lambda: [Config.DEFAULT_CLOCK_HZ])
    pe_types: List[PEType] = Field(validation_alias=AliasChoices('pe_types', 'pe_type'))
    cap: int = Config.GRID_CAP

    @field_validator('pe_types', mode='before')
    @classmethod
    def normalize_pe_types(cls, v):
        return [PEType.parse(t) for t in v] if isinstance(v, list) else v

    @model_validator(mode='after')
    def check_lists(self):
        """Non-empty lists and exactly one scratchpad form."""
        split = (self.ifmap_spad_bytes, self.filter_spad_bytes, self.psum_spad_bytes)
        if self.spad_presets is not None:
            if any(lst is not None for lst in split):
                raise ValueError('give either spad_presets or the three spad lists, not both')
        elif any(lst is None for lst in split):
            raise ValueError('ifmap_spad_bytes, filter_spad_bytes and psum_spad_bytes are required without spad_presets')
        for field in ('pe_rows', 'pe_cols', 'glb_bytes', 'ifmap_spad_bytes', 'filter_spad_bytes',
                      'psum_spad_bytes', 'spad_presets', 'dram_bw', 'clock_hz', 'pe_types'):
            value = getattr(self, field)
            if value is not None and len(value) == 0:
                raise ValueError(f'{field} must not be empty')
        return self

    def spad_choices(self) -> List[tuple]:
        """(ifmap, filter, psum) triples in enumeration order."""
        if self.spad_presets is not None:
            return [(p.ifmap_spad_bytes, p.filter_spad_bytes, p.psum_spad_bytes) for p in self.spad_presets]
        return [(i, f, p) for i in self.ifmap_spad_bytes
                for f in self.filter_spad_bytes
                for p in self.psum_spad_bytes]

    @property
    def size(self) -> int:
        return (len(self.pe_rows) * len(self.pe_cols) * len(self.glb_bytes)
                * len(self.spad_choices()) * len(self.dram_bw) * len(self.clock_hz)
                * len(self.pe_types))


class DesignPoint(BaseModel):
    """An evaluated design point."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    cfg: AcceleratorConfig
    feasible: bool
    ppa: Optional[PPAResult] = None
    norm_perf_per_area: Optional[float] = None
    norm_energy: Optional[float] = None
    accuracy: Optional[float] = None
    violations: List[str] = Field(default_factory=list)


class AccuracyTable(BaseModel):
    """Top-1 accuracy per network and PE type."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    entries: Dict[str, Dict[PEType, float]]

    @model_validator(mode='after')
    def check_range(self):
        for network, row in self.entries.items():
            for pe_type, value in row.items():
                if not 0.0 <= value <= 1.0:
                    raise ValueError(f'top1 for ({network}, {pe_type.value}) must be in [0, 1], got {value}')
        return self

    def lookup(self, network: str, pe_type: PEType) -> Optional[float]:
        return self.entries.get(network, {}).get(pe_type)


class Direction(str, Enum):
    MAX = 'max'
    MIN = 'min'


class Objective(BaseModel):
    """One Pareto objective."""
    model_config = ConfigDict(frozen=True)

    metric: str
    direction: Direction


class PETypeSummary(BaseModel):
    """Best points of one PE type against the best INT16 and FP32 designs."""
    model_config = ConfigDict(frozen=True)

    pe_type: PEType
    feasible_points: int
    best_perf_per_area: Optional[float] = None
    min_energy_j: Optional[float] = None
    perf_per_area_vs_int16: Optional[float] = None
    energy_vs_int16: Optional[float] = None
    perf_per_area_vs_fp32: Optional[float] = None
    energy_vs_fp32: Optional[float] = None
