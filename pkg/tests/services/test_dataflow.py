import random

import pytest

from ppa_explorer.models.arch import PEType
from ppa_explorer.services import dataflow
from ppa_explorer.models.workload import LayerConfig, Network
from ppa_explorer.services.dataflow import (
    STATS_FIELDS,
    layer_stats,
    map_layer,
    network_stats,
    simulate_layer_oracle,
    stats_diff,
)
from ppa_explorer.services.errors import InfeasibleConfigError, OracleGuardError
from ppa_explorer.services.workload import builtin_network
from tests.conftest import make_cfg


def test_map_toy_layer(toy_layer, small_cfg):
    m = map_layer(toy_layer, small_cfg)
    assert (m.set_rows, m.strip_width, m.sets_fitting, m.strips, m.vertical_folds) == (3, 3, 1, 1, 1)
    assert m.set_passes_total == 1
    assert m.utilization == 9 / 16


def test_map_identity(unit_layer):
    cfg = make_cfg(pe_rows=1, pe_cols=1, ifmap_spad_bytes=2, filter_spad_bytes=2, psum_spad_bytes=4)
    m = map_layer(unit_layer, cfg)
    assert (m.set_rows, m.strip_width, m.sets_fitting, m.vertical_folds, m.strips,
            m.set_passes_total) == (1, 1, 1, 1, 1, 1)
    assert m.utilization == 1.0


def test_map_vertical_folds():
    layer = LayerConfig(name='tall', in_channels=1, out_channels=1, in_height=7, in_width=7,
                        filter_height=5, filter_width=5)
    m = map_layer(layer, make_cfg())
    assert m.vertical_folds == 2
    assert m.set_rows == 4


def test_map_several_sets():
    # R=1, E=2 on 4x4: 4 set rows x 2 set columns
    layer = LayerConfig(name='pw', in_channels=3, out_channels=2, in_height=2, in_width=2,
                        filter_height=1, filter_width=1)
    m = map_layer(layer, make_cfg())
    assert m.sets_fitting == 8
    assert m.set_passes_total == 6
    assert m.utilization == 1 * 2 * 6 / 16


def test_toy_layer_stats(toy_layer, small_cfg):
    s = layer_stats(toy_layer, small_cfg)
    assert s.macs == 81
    assert s.compute_cycles == 9
    assert s.spad_ifmap_reads == s.spad_filter_reads == s.spad_psum_reads == s.spad_psum_writes == 81
    assert s.glb_ifmap_reads == 45
    assert s.glb_filter_reads == 9
    assert s.glb_ofmap_writes == 9
    assert s.refetch_factor == 1
    # 25 + 9 + 9 sixteen-bit values
    assert (s.dram_ifmap_bytes, s.dram_filter_bytes, s.dram_ofmap_bytes) == (50, 18, 18)
    assert s.dram_cycles == 1
    assert s.latency_cycles == 9


def test_identity_layer_stats(unit_layer):
    cfg = make_cfg(pe_rows=1, pe_cols=1, ifmap_spad_bytes=2, filter_spad_bytes=2, psum_spad_bytes=4,
                   dram_bw=4)
    s = layer_stats(unit_layer, cfg)
    assert (s.macs, s.compute_cycles) == (1, 1)
    assert s.dram_cycles == 2
    assert s.latency_cycles == max(1, s.dram_cycles)


def test_tiny_glb_refetches(toy_layer):
    s = layer_stats(toy_layer, make_cfg(glb_bytes=1))
    assert s.refetch_factor == 68
    assert s.dram_ifmap_bytes == 68 * 50
    assert s.dram_filter_bytes == 68 * 18
    assert s.dram_ofmap_bytes == 18


def test_four_bit_weights_round_up(toy_layer):
    s = layer_stats(toy_layer, make_cfg(pe_type=PEType.LIGHT1))
    # nine 4-bit weights occupy 5 bytes
    assert s.dram_filter_bytes == 5


def test_fractional_bandwidth(toy_layer):
    s = layer_stats(toy_layer, make_cfg(dram_bw=0.5))
    assert s.dram_cycles == 2 * (50 + 18 + 18)
    assert s.latency_cycles == s.dram_cycles


def test_infeasible_layer_raises(toy_layer):
    with pytest.raises(InfeasibleConfigError) as exc:
        layer_stats(toy_layer, make_cfg(filter_spad_bytes=2))
    assert any('filter_spad_bytes' in v for v in exc.value.violations)


def test_oracle_matches_toy(toy_layer, small_cfg):
    assert simulate_layer_oracle(toy_layer, small_cfg) == layer_stats(toy_layer, small_cfg)


def test_oracle_matches_identity(unit_layer):
    cfg = make_cfg(pe_rows=1, pe_cols=1, ifmap_spad_bytes=2, filter_spad_bytes=2, psum_spad_bytes=4)
    assert simulate_layer_oracle(unit_layer, cfg) == layer_stats(unit_layer, cfg)


def test_oracle_matches_slow_dram_and_tiny_glb(toy_layer):
    for pe_type in PEType:
        cfg = make_cfg(glb_bytes=3, dram_bw=0.5, pe_type=pe_type, filter_spad_bytes=64)
        assert stats_diff(layer_stats(toy_layer, cfg), simulate_layer_oracle(toy_layer, cfg)) == []


def test_oracle_counts_dram_traffic_on_its_own(toy_layer, small_cfg, monkeypatch):
    expected = simulate_layer_oracle(toy_layer, small_cfg)
    monkeypatch.setattr(dataflow, '_dram_traffic', lambda *args: (1, 2, 3, 8, 101))
    assert simulate_layer_oracle(toy_layer, small_cfg) == expected
    changed = {field for field, _, _ in stats_diff(layer_stats(toy_layer, small_cfg), expected)}
    assert {'dram_ifmap_bytes', 'dram_filter_bytes', 'dram_ofmap_bytes', 'refetch_factor',
            'dram_cycles'} <= changed


def _random_case(rng: random.Random):
    r, s = rng.randint(1, 4), rng.randint(1, 4)
    padding = rng.randint(0, 1)
    layer = LayerConfig(
        name='rand',
        batch=rng.randint(1, 2),
        in_channels=rng.randint(1, 3),
        out_channels=rng.randint(1, 3),
        in_height=rng.randint(r, 8),
        in_width=rng.randint(s, 8),
        filter_height=r,
        filter_width=s,
        stride=rng.randint(1, 2),
        padding=padding,
    )
    cfg = make_cfg(
        pe_rows=rng.randint(1, 6),
        pe_cols=rng.randint(1, 6),
        glb_bytes=rng.choice([1, 16, 64, 4096]),
        ifmap_spad_bytes=64,
        filter_spad_bytes=64,
        psum_spad_bytes=64,
        dram_bw=rng.choice([0.5, 1, 3, 16]),
        pe_type=rng.choice(list(PEType)),
    )
    return layer, cfg


def test_oracle_equivalence_randomized():
    rng = random.Random(20240601)
    for _ in range(50):
        layer, cfg = _random_case(rng)
        analytical = layer_stats(layer, cfg)
        simulated = simulate_layer_oracle(layer, cfg)
        assert stats_diff(analytical, simulated) == [], (layer, cfg)


def test_oracle_guard():
    big = LayerConfig(name='big', in_channels=512, out_channels=512, in_height=14, in_width=14,
                      filter_height=3, filter_width=3, padding=1)
    with pytest.raises(OracleGuardError, match='guard'):
        simulate_layer_oracle(big, make_cfg())


def test_compute_bound_never_beats_array():
    rng = random.Random(7)
    for _ in range(200):
        layer, cfg = _random_case(rng)
        s = layer_stats(layer, cfg)
        assert s.compute_cycles * cfg.num_pes >= s.macs


def test_full_utilization_is_tight():
    # R=2, E=2 on a 2x2 array with one pass per round
    layer = LayerConfig(name='tight', in_channels=1, out_channels=1, in_height=3, in_width=3,
                        filter_height=2, filter_width=2)
    cfg = make_cfg(pe_rows=2, pe_cols=2)
    s = layer_stats(layer, cfg)
    assert s.utilization == 1.0
    assert s.compute_cycles * cfg.num_pes == s.macs


def test_latency_monotone_in_bandwidth_and_pes():
    rng = random.Random(11)
    for _ in range(100):
        layer, cfg = _random_case(rng)
        slow = layer_stats(layer, cfg).latency_cycles
        faster_bw = layer_stats(layer, cfg.model_copy(update={'dram_bw': cfg.dram_bw * 2})).latency_cycles
        assert faster_bw <= slow
        wider = layer_stats(layer, cfg.model_copy(update={'pe_cols': cfg.pe_cols * 2,
                                                          'pe_rows': cfg.pe_rows * 2}))
        assert layer_stats(layer, cfg).compute_cycles >= wider.compute_cycles


def test_refetch_is_one_when_working_set_fits(toy_layer):
    assert layer_stats(toy_layer, make_cfg(glb_bytes=68)).refetch_factor == 1
    assert layer_stats(toy_layer, make_cfg(glb_bytes=67)).refetch_factor == 2


def test_network_stats_single_layer(toy_layer, small_cfg):
    net = Network(name='one', layers=[toy_layer])
    assert network_stats(net, small_cfg) == layer_stats(toy_layer, small_cfg)


def test_network_stats_additive(toy_layer, small_cfg):
    twin = toy_layer.model_copy(update={'name': 'twin'})
    single = layer_stats(toy_layer, small_cfg)
    double = network_stats(Network(name='two', layers=[toy_layer, twin]), small_cfg)
    for field in STATS_FIELDS:
        if field == 'utilization':
            assert double.utilization == single.utilization
        else:
            assert getattr(double, field) == 2 * getattr(single, field)


def test_network_stats_sum_over_layers():
    net = builtin_network('vgg16-cifar')
    cfg = make_cfg(pe_rows=16, pe_cols=16, glb_bytes=131072, ifmap_spad_bytes=288,
                   filter_spad_bytes=32, psum_spad_bytes=256, dram_bw=16)
    total = network_stats(net, cfg)
    per_layer = [layer_stats(layer, cfg) for layer in net.layers]
    assert len(per_layer) == 16
    assert total.macs == sum(s.macs for s in per_layer)
    assert total.latency_cycles == sum(s.latency_cycles for s in per_layer)
    assert total.glb_ifmap_reads == sum(s.glb_ifmap_reads for s in per_layer)
    weighted = sum(s.utilization * s.macs for s in per_layer) / total.macs
    assert total.utilization == pytest.approx(weighted, rel=1e-12)


def test_network_stats_rejects_infeasible():
    with pytest.raises(InfeasibleConfigError):
        network_stats(builtin_network('resnet20'), make_cfg())


def test_stats_diff_names_fields(toy_layer, small_cfg):
    s = layer_stats(toy_layer, small_cfg)
    assert stats_diff(s, s) == []
    changed = s.model_copy(update={'glb_filter_reads': 10})
    assert stats_diff(s, changed) == [('glb_filter_reads', 9, 10)]
