import pytest

from ppa_explorer.models.arch import AcceleratorConfig, PEType
from ppa_explorer.models.cost import CostTable, PECost, PPAResult
from ppa_explorer.models.dse import DesignPoint
from ppa_explorer.models.workload import LayerConfig


def make_cfg(**overrides) -> AcceleratorConfig:
    values = dict(
        pe_rows=4, pe_cols=4, glb_bytes=65536,
        ifmap_spad_bytes=64, filter_spad_bytes=16, psum_spad_bytes=64,
        dram_bw=1000, clock_hz=200_000_000, pe_type=PEType.INT16,
    )
    values.update(overrides)
    return AcceleratorConfig(**values)


def make_ppa(**overrides) -> PPAResult:
    values = {field: 1.0 for field in PPAResult.model_fields}
    values.update(overrides)
    return PPAResult(**values)


def make_point(pe_type=PEType.INT16, perf_per_area=1.0, energy_j=1.0, area_mm2=1.0,
               pe_rows=4, **extra) -> DesignPoint:
    return DesignPoint(
        cfg=make_cfg(pe_type=pe_type, pe_rows=pe_rows),
        feasible=True,
        ppa=make_ppa(perf_per_area=perf_per_area, energy_j=energy_j, area_mm2=area_mm2),
        **extra,
    )


@pytest.fixture
def toy_layer() -> LayerConfig:
    """81 MACs: N=M=C=1, H=W=5, R=S=3, no padding."""
    return LayerConfig(name='toy', in_channels=1, out_channels=1, in_height=5, in_width=5,
                       filter_height=3, filter_width=3)


@pytest.fixture
def unit_layer() -> LayerConfig:
    return LayerConfig(name='unit', in_channels=1, out_channels=1, in_height=1, in_width=1,
                       filter_height=1, filter_width=1)


@pytest.fixture
def small_cfg() -> AcceleratorConfig:
    return make_cfg()


@pytest.fixture
def unit_table() -> CostTable:
    """INT16 entries and every shared constant are 1; other types keep the ordering."""
    return CostTable(
        pe={
            PEType.LIGHT1: PECost(e_mac=0.25, a_pe_logic=0.25),
            PEType.LIGHT2: PECost(e_mac=0.5, a_pe_logic=0.5),
            PEType.INT16: PECost(e_mac=1.0, a_pe_logic=1.0),
            PEType.FP32: PECost(e_mac=2.0, a_pe_logic=2.0),
        },
        e_spad_bit=1.0, e_glb_bit=1.0, e_dram_bit=1.0,
        a_spad_byte=1.0, a_glb_byte=1.0, p_leak_density=1.0,
        overhead_factor=1.0,
    )
