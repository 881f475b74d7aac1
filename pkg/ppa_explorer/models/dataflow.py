from pydantic import BaseModel, ConfigDict


class Mapping(BaseModel):
    """Row-stationary placement of one layer on the PE array."""
    model_config = ConfigDict(frozen=True)

    set_rows: int
    strip_width: int
    sets_fitting: int
    vertical_folds: int
    strips: int
    set_passes_total: int
    utilization: float


class AccessStats(BaseModel):
    """Cycles, utilization and per-level access counts."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    macs: int
    compute_cycles: int
    dram_cycles: int
    latency_cycles: int
    spad_ifmap_reads: int
    spad_filter_reads: int
    spad_psum_reads: int
    spad_psum_writes: int
    glb_ifmap_reads: int
    glb_filter_reads: int
    glb_ofmap_writes: int
    dram_ifmap_bytes: int
    dram_filter_bytes: int
    dram_ofmap_bytes: int
    refetch_factor: int
    utilization: float

    @property
    def dram_bytes(self) -> int:
        return self.dram_ifmap_bytes + self.dram_filter_bytes + self.dram_ofmap_bytes
