import pytest

from ppa_explorer.models.arch import AcceleratorConfig, PEType
from ppa_explorer.services.arch import (
    load_arch,
    required_spad_entries,
    spad_capacity_entries,
    validate_config,
)
from ppa_explorer.services.errors import ConfigError
from ppa_explorer.services.workload import builtin_network
from tests.conftest import make_cfg


def test_pe_type_bits():
    assert (PEType.FP32.act_bits, PEType.FP32.wgt_bits) == (32, 32)
    assert (PEType.INT16.act_bits, PEType.INT16.wgt_bits) == (16, 16)
    assert (PEType.LIGHT2.act_bits, PEType.LIGHT2.wgt_bits) == (8, 8)
    assert (PEType.LIGHT1.act_bits, PEType.LIGHT1.wgt_bits) == (8, 4)
    assert PEType.LIGHT1.psum_bits == 32


@pytest.mark.parametrize('token, expected', [
    ('int16', PEType.INT16),
    ('LightPE-1', PEType.LIGHT1),
    ('lightpe2', PEType.LIGHT2),
    (' fp32 ', PEType.FP32),
])
def test_pe_type_parse(token, expected):
    assert PEType.parse(token) == expected


def test_config_accepts_aliases():
    assert make_cfg(pe_type='LightPE-1').pe_type == PEType.LIGHT1


def test_spad_capacity():
    assert spad_capacity_entries(32, 16) == 16
    assert spad_capacity_entries(16, 4) == 32
    assert spad_capacity_entries(5, 16) == 2
    assert spad_capacity_entries(224, 16) == 112
    assert spad_capacity_entries(224, 4) == 448
    assert spad_capacity_entries(1, 32) == 0


def test_spad_capacity_monotone_in_bytes():
    for bits in (4, 8, 16, 32):
        caps = [spad_capacity_entries(b, bits) for b in range(0, 300)]
        assert caps == sorted(caps)


def test_filter_capacity_scales_with_weight_width():
    for budget in range(2, 200, 2):
        light1 = spad_capacity_entries(budget, PEType.LIGHT1.wgt_bits)
        light2 = spad_capacity_entries(budget, PEType.LIGHT2.wgt_bits)
        int16 = spad_capacity_entries(budget, PEType.INT16.wgt_bits)
        assert light1 == 2 * light2 == 4 * int16


def test_required_entries(toy_layer):
    assert required_spad_entries(toy_layer) == (5, 3, 3)


def test_valid_config(small_cfg, toy_layer):
    assert validate_config(small_cfg) == []
    assert validate_config(small_cfg, toy_layer) == []


@pytest.mark.parametrize('field', ['pe_rows', 'pe_cols', 'glb_bytes', 'ifmap_spad_bytes',
                                   'filter_spad_bytes', 'psum_spad_bytes'])
def test_base_violations(field):
    violations = validate_config(make_cfg(**{field: 0}))
    assert violations == [f'{field} must be ≥ 1']


def test_bandwidth_and_clock_must_be_positive():
    assert validate_config(make_cfg(dram_bw=0)) == ['dram_bw must be > 0']
    assert validate_config(make_cfg(clock_hz=-1)) == ['clock_hz must be > 0']


def test_filter_capacity_names_layer_and_field(toy_layer):
    # 4 bytes hold two 16-bit weights; the layer needs three
    violations = validate_config(make_cfg(filter_spad_bytes=4), toy_layer)
    assert len(violations) == 1
    assert "'toy'" in violations[0]
    assert 'filter_spad_bytes' in violations[0]


def test_capacity_depends_on_precision(toy_layer):
    assert validate_config(make_cfg(filter_spad_bytes=2, pe_type=PEType.LIGHT1), toy_layer) == []
    assert validate_config(make_cfg(filter_spad_bytes=2, pe_type=PEType.INT16), toy_layer) != []


def test_ifmap_and_psum_capacity(toy_layer):
    ifmap = validate_config(make_cfg(ifmap_spad_bytes=8), toy_layer)
    assert any('ifmap_spad_bytes' in v for v in ifmap)
    psum = validate_config(make_cfg(psum_spad_bytes=8), toy_layer)
    assert any('psum_spad_bytes' in v for v in psum)


def test_network_capacity_checks_every_layer():
    net = builtin_network('resnet20')
    cfg = make_cfg(ifmap_spad_bytes=64, psum_spad_bytes=64, pe_type=PEType.INT16)
    violations = validate_config(cfg, net)
    # 32-wide layers need 34 ifmap and 32 psum entries
    assert any("'conv1'" in v and 'ifmap_spad_bytes' in v for v in violations)
    assert not any("'fc'" in v for v in violations)


def test_base_violations_skip_capacity(toy_layer):
    assert validate_config(make_cfg(pe_rows=0, filter_spad_bytes=1), toy_layer) == ['pe_rows must be ≥ 1']


def test_load_default_arch():
    cfg = load_arch('default')
    assert isinstance(cfg, AcceleratorConfig)
    assert (cfg.pe_rows, cfg.pe_cols, cfg.pe_type) == (16, 16, PEType.INT16)
    assert validate_config(cfg, builtin_network('resnet20')) == []


def test_load_arch_errors(tmp_path):
    with pytest.raises(ConfigError, match='not found'):
        load_arch(str(tmp_path / 'missing.json'))
    bad = tmp_path / 'bad.json'
    bad.write_text('{"pe_rows": 4, "pe_cols": 4, "glb_bytes": 1, "ifmap_spad_bytes": 1, '
                   '"filter_spad_bytes": 1, "psum_spad_bytes": 1, "dram_bw": 1, "pe_type": "INT4"}')
    with pytest.raises(ConfigError, match='pe_type'):
        load_arch(str(bad))
