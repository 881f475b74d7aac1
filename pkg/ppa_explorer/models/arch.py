from enum import Enum

from pydantic import BaseModel, ConfigDict, field_validator

from ppa_explorer.config import Config

# (activation, weight) bits; psum width is shared
_PE_BITS = {
    'FP32': (32, 32),
    'INT16': (16, 16),
    'LIGHT1': (8, 4),
    'LIGHT2': (8, 8),
}

_ALIASES = {
    'LIGHTPE-1': 'LIGHT1',
    'LIGHTPE1': 'LIGHT1',
    'LIGHTPE-2': 'LIGHT2',
    'LIGHTPE2': 'LIGHT2',
}


class PEType(str, Enum):
    """Processing element precision type."""
    FP32 = 'FP32'
    INT16 = 'INT16'
    LIGHT1 = 'LIGHT1'
    LIGHT2 = 'LIGHT2'

    @classmethod
    def parse(cls, token) -> 'PEType':
        """Case-insensitive token lookup, LightPE-n spellings included."""
        if isinstance(token, cls):
            return token
        key = str(token).strip().upper()
        return cls(_ALIASES.get(key, key))

    @property
    def act_bits(self) -> int:
        return _PE_BITS[self.value][0]

    @property
    def wgt_bits(self) -> int:
        return _PE_BITS[self.value][1]

    @property
    def psum_bits(self) -> int:
        return Config.PSUM_BITS


class AcceleratorConfig(BaseModel):
    """One hardware design point.

    Values are not range-checked on construction; validate_config reports
    violations so that infeasible points can still be represented.
    """
    model_config = ConfigDict(extra='forbid', frozen=True)

    pe_rows: int
    pe_cols: int
    glb_bytes: int
    ifmap_spad_bytes: int
    filter_spad_bytes: int
    psum_spad_bytes: int
    dram_bw: float
    clock_hz: float = Config.DEFAULT_CLOCK_HZ
    pe_type: PEType

    @field_validator('pe_type', mode='before')
    @classmethod
    def normalize_pe_type(cls, v):
        """Accept any PEType spelling."""
        try:
            return PEType.parse(v)
        except ValueError:
            raise ValueError(f"unknown pe_type '{v}' (expected one of {', '.join(t.value for t in PEType)})")

    @property
    def num_pes(self) -> int:
        return self.pe_rows * self.pe_cols

    @property
    def spad_bytes_per_pe(self) -> int:
        return self.ifmap_spad_bytes + self.filter_spad_bytes + self.psum_spad_bytes
