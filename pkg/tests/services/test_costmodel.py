import json

import numpy as np
import pytest

from ppa_explorer.models.arch import PEType
from ppa_explorer.models.cost import PE_COST_ORDER, CostTable
from ppa_explorer.models.workload import Network
from ppa_explorer.services.costmodel import (
    accelerator_area,
    default_cost_table,
    dump_cost_table,
    evaluate_network,
    evaluate_ppa,
    load_cost_table,
    scale_energies,
)
from ppa_explorer.services.errors import ConfigError, InfeasibleConfigError
from ppa_explorer.services.workload import builtin_network
from tests.conftest import make_cfg


def _area_cfg(**overrides):
    values = dict(pe_rows=1, pe_cols=1, glb_bytes=1, ifmap_spad_bytes=1, filter_spad_bytes=1,
                  psum_spad_bytes=1)
    values.update(overrides)
    return make_cfg(**values)


def test_unit_area(unit_table):
    assert accelerator_area(_area_cfg(), unit_table) == 5


def test_area_pe_term_is_linear(unit_table):
    glb_term = 1.0
    one = accelerator_area(_area_cfg(pe_rows=1), unit_table) - glb_term
    two = accelerator_area(_area_cfg(pe_rows=2), unit_table) - glb_term
    assert two == 2 * one


@pytest.mark.parametrize('field', ['pe_rows', 'pe_cols', 'glb_bytes', 'ifmap_spad_bytes',
                                   'filter_spad_bytes', 'psum_spad_bytes'])
def test_area_strictly_increasing(field):
    table = default_cost_table()
    base = make_cfg(pe_rows=8, pe_cols=8, glb_bytes=32768, ifmap_spad_bytes=144,
                    filter_spad_bytes=16, psum_spad_bytes=128)
    bigger = base.model_copy(update={field: getattr(base, field) + 1})
    assert accelerator_area(bigger, table) > accelerator_area(base, table)


def test_area_ordered_by_pe_type():
    table = default_cost_table()
    areas = [accelerator_area(make_cfg(pe_type=t), table) for t in PE_COST_ORDER]
    assert areas == sorted(areas)
    assert len(set(areas)) == len(areas)


def test_toy_unit_costs(toy_layer, unit_table):
    net = Network(name='toy', layers=[toy_layer])
    ppa, stats = evaluate_network(net, make_cfg(clock_hz=1), unit_table)
    assert stats.latency_cycles == 9
    assert ppa.latency_s == 9.0
    assert ppa.mac_j == pytest.approx(81e-12)
    assert ppa.spad_j == pytest.approx(81 * (16 + 16 + 2 * 32) * 1e-12)
    assert ppa.glb_j == pytest.approx((45 + 9 + 9) * 16 * 1e-12)
    assert ppa.dram_j == pytest.approx((50 + 18 + 18) * 8 * 1e-12)
    assert ppa.area_mm2 == pytest.approx((16 * (1 + 144) + 65536) * 1e-6)
    assert ppa.leak_j == pytest.approx(1e-3 * ppa.area_mm2 * 9)
    assert ppa.energy_j == ppa.mac_j + ppa.spad_j + ppa.glb_j + ppa.dram_j + ppa.leak_j
    assert ppa.avg_power_w == ppa.energy_j / ppa.latency_s
    assert ppa.throughput == 81 / 9
    assert ppa.perf_per_area == ppa.throughput / ppa.area_mm2


def test_evaluation_is_deterministic():
    net = builtin_network('resnet20')
    cfg = make_cfg(pe_rows=16, pe_cols=16, ifmap_spad_bytes=288, filter_spad_bytes=32,
                   psum_spad_bytes=256, dram_bw=16)
    table = default_cost_table()
    assert evaluate_ppa(net, cfg, table) == evaluate_ppa(net, cfg, table)


def test_light1_beats_int16_on_same_shape():
    net = builtin_network('resnet20')
    table = default_cost_table()
    shape = dict(pe_rows=16, pe_cols=16, ifmap_spad_bytes=288, filter_spad_bytes=32,
                 psum_spad_bytes=256, dram_bw=16)
    light = evaluate_ppa(net, make_cfg(pe_type=PEType.LIGHT1, **shape), table)
    int16 = evaluate_ppa(net, make_cfg(pe_type=PEType.INT16, **shape), table)
    assert light.energy_j < int16.energy_j
    assert light.perf_per_area > int16.perf_per_area


def test_ordering_theorem_on_one_shape():
    net = builtin_network('resnet20')
    table = default_cost_table()
    shape = dict(pe_rows=8, pe_cols=16, glb_bytes=65536, ifmap_spad_bytes=1024,
                 filter_spad_bytes=64, psum_spad_bytes=1024, dram_bw=4)
    results = [evaluate_ppa(net, make_cfg(pe_type=t, **shape), table) for t in PE_COST_ORDER]
    for cheaper, dearer in zip(results, results[1:]):
        assert cheaper.energy_j < dearer.energy_j
        assert cheaper.area_mm2 < dearer.area_mm2
        assert cheaper.perf_per_area > dearer.perf_per_area


def test_infeasible_rejected(toy_layer, unit_table):
    with pytest.raises(InfeasibleConfigError):
        evaluate_ppa(Network(name='toy', layers=[toy_layer]), make_cfg(filter_spad_bytes=2), unit_table)


def test_default_table_ordering():
    table = default_cost_table()
    for lower, higher in zip(PE_COST_ORDER, PE_COST_ORDER[1:]):
        assert table.pe[lower].e_mac < table.pe[higher].e_mac
        assert table.pe[lower].a_pe_logic < table.pe[higher].a_pe_logic
    assert table.pe[PEType.FP32].e_mac / table.pe[PEType.LIGHT1].e_mac > 4
    assert table.units['e_mac'] == 'pJ/op'


def test_default_pe_logic_area_is_affine_in_bit_widths():
    # area stays a cubic in the design features only if this holds
    table = default_cost_table()

    def row(pe_type):
        return [1.0, pe_type.act_bits, pe_type.wgt_bits]

    fitted = (PEType.FP32, PEType.INT16, PEType.LIGHT1)
    coef = np.linalg.solve([row(t) for t in fitted], [table.pe[t].a_pe_logic for t in fitted])
    assert float(np.dot(row(PEType.LIGHT2), coef)) == pytest.approx(table.pe[PEType.LIGHT2].a_pe_logic)


def test_default_table_is_cached():
    assert default_cost_table() is default_cost_table()
    assert load_cost_table('default') is default_cost_table()


def test_table_round_trip(tmp_path):
    table = default_cost_table()
    path = tmp_path / 'table.json'
    path.write_text(dump_cost_table(table))
    assert load_cost_table(str(path)) == table


def test_table_ordering_enforced(tmp_path):
    data = default_cost_table().model_dump(mode='json')
    data['pe']['LIGHT1']['e_mac'] = data['pe']['LIGHT2']['e_mac']
    with pytest.raises(ValueError, match='ordering'):
        CostTable.model_validate(data)
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps(data))
    with pytest.raises(ConfigError, match='ordering'):
        load_cost_table(str(path))


def test_table_missing_pe_type():
    data = default_cost_table().model_dump(mode='json')
    del data['pe']['FP32']
    with pytest.raises(ValueError, match='FP32'):
        CostTable.model_validate(data)


def test_missing_table_file(tmp_path):
    with pytest.raises(ConfigError, match='not found'):
        load_cost_table(str(tmp_path / 'nope.json'))


def test_energy_scale_invariance():
    net = builtin_network('resnet20')
    cfg = make_cfg(pe_rows=16, pe_cols=8, glb_bytes=32768, ifmap_spad_bytes=144,
                   filter_spad_bytes=16, psum_spad_bytes=128, dram_bw=16)
    table = default_cost_table()
    base = evaluate_ppa(net, cfg, table)
    scaled = evaluate_ppa(net, cfg, scale_energies(table, 3.0))
    assert scaled.energy_j == pytest.approx(3.0 * base.energy_j, rel=1e-12)
    assert scaled.avg_power_w == pytest.approx(3.0 * base.avg_power_w, rel=1e-12)
    assert scaled.latency_s == base.latency_s
    assert scaled.area_mm2 == base.area_mm2


def test_scale_factor_must_be_positive():
    with pytest.raises(ConfigError):
        scale_energies(default_cost_table(), 0)
