"""Row-stationary mapping, access statistics and the loop-nest oracle."""
import logging
import math
from fractions import Fraction
from typing import Dict, List, Tuple

from ppa_explorer.config import Config
from ppa_explorer.models.arch import AcceleratorConfig
from ppa_explorer.models.dataflow import AccessStats, Mapping
from ppa_explorer.models.workload import LayerConfig, Network
from ppa_explorer.services.arch import validate_config
from ppa_explorer.services.errors import InfeasibleConfigError, OracleGuardError
from ppa_explorer.services.workload import layer_macs

logger = logging.getLogger(__name__)

STATS_FIELDS = tuple(AccessStats.model_fields)


def _require_feasible(layer: LayerConfig, cfg: AcceleratorConfig):
    violations = validate_config(cfg, layer)
    if violations:
        raise InfeasibleConfigError(violations)


def _mapping(layer: LayerConfig, cfg: AcceleratorConfig) -> Mapping:
    R, E = layer.filter_height, layer.out_height
    set_rows = min(R, cfg.pe_rows)
    strip_width = min(E, cfg.pe_cols)
    sets_fitting = (cfg.pe_rows // set_rows) * (cfg.pe_cols // strip_width)
    vertical_folds = math.ceil(R / cfg.pe_rows)
    strips = math.ceil(E / strip_width)
    passes = layer.batch * layer.out_channels * layer.in_channels * strips * vertical_folds
    return Mapping(
        set_rows=set_rows,
        strip_width=strip_width,
        sets_fitting=sets_fitting,
        vertical_folds=vertical_folds,
        strips=strips,
        set_passes_total=passes,
        utilization=set_rows * strip_width * min(sets_fitting, passes) / cfg.num_pes,
    )


def map_layer(layer: LayerConfig, cfg: AcceleratorConfig) -> Mapping:
    """Place a layer's PE sets on the array."""
    _require_feasible(layer, cfg)
    return _mapping(layer, cfg)


def _tensor_bytes(elements: int, bits: int) -> int:
    return (elements * bits + 7) // 8


def _dram_traffic(ifmap_elements: int, filter_elements: int, ofmap_elements: int,
                  cfg: AcceleratorConfig) -> Tuple[int, int, int, int, int]:
    """(ifmap bytes, filter bytes, ofmap bytes, refetch factor, dram cycles)."""
    pe = cfg.pe_type
    ifmap_bytes = _tensor_bytes(ifmap_elements, pe.act_bits)
    filter_bytes = _tensor_bytes(filter_elements, pe.wgt_bits)
    ofmap_bytes = _tensor_bytes(ofmap_elements, pe.act_bits)
    refetch = max(1, math.ceil(Fraction(ifmap_bytes + filter_bytes, cfg.glb_bytes)))
    ifmap_bytes *= refetch
    filter_bytes *= refetch
    total = ifmap_bytes + filter_bytes + ofmap_bytes
    dram_cycles = math.ceil(Fraction(total) / Fraction(cfg.dram_bw))
    return ifmap_bytes, filter_bytes, ofmap_bytes, refetch, dram_cycles


def _layer_stats(layer: LayerConfig, cfg: AcceleratorConfig) -> AccessStats:
    m = _mapping(layer, cfg)
    N, M, C = layer.batch, layer.out_channels, layer.in_channels
    E, F = layer.out_height, layer.out_width
    R, S = layer.filter_height, layer.filter_width
    macs = layer_macs(layer)
    compute_cycles = math.ceil(m.set_passes_total / m.sets_fitting) * F * S
    ifmap_bytes, filter_bytes, ofmap_bytes, refetch, dram_cycles = _dram_traffic(
        N * C * layer.in_height * layer.in_width, M * C * R * S, N * M * E * F, cfg)
    return AccessStats(
        macs=macs,
        compute_cycles=compute_cycles,
        dram_cycles=dram_cycles,
        latency_cycles=max(compute_cycles, dram_cycles),
        spad_ifmap_reads=macs,
        spad_filter_reads=macs,
        spad_psum_reads=macs,
        spad_psum_writes=macs,
        glb_ifmap_reads=N * M * C * E * R * layer.padded_width,
        glb_filter_reads=M * C * R * S,
        glb_ofmap_writes=N * M * E * F,
        dram_ifmap_bytes=ifmap_bytes,
        dram_filter_bytes=filter_bytes,
        dram_ofmap_bytes=ofmap_bytes,
        refetch_factor=refetch,
        utilization=m.utilization,
    )


def layer_stats(layer: LayerConfig, cfg: AcceleratorConfig) -> AccessStats:
    """Closed-form cycles and access counts of one layer."""
    _require_feasible(layer, cfg)
    return _layer_stats(layer, cfg)


def simulate_layer_oracle(layer: LayerConfig, cfg: AcceleratorConfig) -> AccessStats:
    """Walk the full loop nest and count every event of the row-stationary schedule.

    Each MAC is tagged with its PE set pass, PE and cycle; counts come from
    the walk, not from the closed forms in layer_stats.
    """
    macs_expected = layer_macs(layer)
    if macs_expected > Config.ORACLE_MAC_GUARD:
        raise OracleGuardError(
            f"layer '{layer.name}' has {macs_expected} MACs, above the oracle guard of {Config.ORACLE_MAC_GUARD}"
        )
    _require_feasible(layer, cfg)

    N, M, C = layer.batch, layer.out_channels, layer.in_channels
    E, F = layer.out_height, layer.out_width
    R, S = layer.filter_height, layer.filter_width
    W_p = layer.padded_width
    set_rows = min(R, cfg.pe_rows)
    strip_width = min(E, cfg.pe_cols)
    sets_per_col = cfg.pe_rows // set_rows
    sets_per_row = cfg.pe_cols // strip_width
    sets_fitting = sets_per_col * sets_per_row
    check_collisions = macs_expected <= Config.ORACLE_COLLISION_LIMIT

    passes: Dict[tuple, int] = {}
    slots_used = set()
    filter_rows_seen = set()
    filter_elements = set()
    ofmap_elements = set()
    busy = set()

    macs = 0
    last_cycle = -1
    spad_ifmap = spad_filter = spad_psum_reads = spad_psum_writes = 0
    glb_ifmap = glb_filter = glb_ofmap = 0

    for n in range(N):
        for mm in range(M):
            for c in range(C):
                for e in range(E):
                    for f in range(F):
                        for r in range(R):
                            key = (n, mm, c, e // strip_width, r // set_rows)
                            pass_id = passes.setdefault(key, len(passes))
                            rnd, slot = divmod(pass_id, sets_fitting)
                            slots_used.add(slot)
                            pe_row = (slot // sets_per_row) * set_rows + r % set_rows
                            pe_col = (slot % sets_per_row) * strip_width + e % strip_width
                            if f == 0:
                                # the PE receives one padded ifmap row per pass
                                glb_ifmap += W_p
                            if (mm, c, r) not in filter_rows_seen:
                                filter_rows_seen.add((mm, c, r))
                                glb_filter += S
                            for s in range(S):
                                cycle = rnd * F * S + f * S + s
                                if check_collisions:
                                    slot_key = (pe_row, pe_col, cycle)
                                    if slot_key in busy:
                                        raise AssertionError(
                                            f"layer '{layer.name}': PE ({pe_row}, {pe_col}) "
                                            f'assigned twice in cycle {cycle}'
                                        )
                                    busy.add(slot_key)
                                last_cycle = max(last_cycle, cycle)
                                macs += 1
                                spad_ifmap += 1
                                spad_filter += 1
                                spad_psum_reads += 1
                                spad_psum_writes += 1
                                filter_elements.add((mm, c, r, s))
                                if c == C - 1 and r == R - 1 and s == S - 1:
                                    glb_ofmap += 1
                                    ofmap_elements.add((n, mm, e, f))

    pe = cfg.pe_type
    ifmap_bits = 0
    for n in range(N):
        for c in range(C):
            for h in range(layer.in_height):
                for w in range(layer.in_width):
                    ifmap_bits += pe.act_bits
    filter_bits = sum(pe.wgt_bits for _ in filter_elements)
    ofmap_bits = sum(pe.act_bits for _ in ofmap_elements)
    ifmap_bytes, filter_bytes, ofmap_bytes = (-(-bits // 8) for bits in (ifmap_bits, filter_bits, ofmap_bits))

    # GLB fills needed to stage the ifmap and filter working set
    refetch = 0
    staged = 0
    while staged < ifmap_bytes + filter_bytes:
        staged += cfg.glb_bytes
        refetch += 1
    refetch = max(1, refetch)
    ifmap_bytes *= refetch
    filter_bytes *= refetch

    # stream the traffic at dram_bw bytes per cycle, in units of 1/denominator byte
    bw = Fraction(cfg.dram_bw)
    pending = (ifmap_bytes + filter_bytes + ofmap_bytes) * bw.denominator
    dram_cycles = 0
    while pending > 0:
        pending -= bw.numerator
        dram_cycles += 1

    compute_cycles = last_cycle + 1
    return AccessStats(
        macs=macs,
        compute_cycles=compute_cycles,
        dram_cycles=dram_cycles,
        latency_cycles=max(compute_cycles, dram_cycles),
        spad_ifmap_reads=spad_ifmap,
        spad_filter_reads=spad_filter,
        spad_psum_reads=spad_psum_reads,
        spad_psum_writes=spad_psum_writes,
        glb_ifmap_reads=glb_ifmap,
        glb_filter_reads=glb_filter,
        glb_ofmap_writes=glb_ofmap,
        dram_ifmap_bytes=ifmap_bytes,
        dram_filter_bytes=filter_bytes,
        dram_ofmap_bytes=ofmap_bytes,
        refetch_factor=refetch,
        utilization=set_rows * strip_width * len(slots_used) / cfg.num_pes,
    )


def sum_stats(stats: List[AccessStats]) -> AccessStats:
    """Field-wise totals of sequentially executed layers.

    Utilization is the MAC-weighted mean.
    """
    totals = {field: sum(getattr(s, field) for s in stats)
              for field in STATS_FIELDS if field != 'utilization'}
    totals['utilization'] = (
        sum(s.utilization * s.macs for s in stats) / totals['macs'] if totals['macs'] else 0.0
    )
    return AccessStats(**totals)


def network_stats(net: Network, cfg: AcceleratorConfig) -> AccessStats:
    """Statistics of the layers run back to back."""
    violations = validate_config(cfg, net)
    if violations:
        raise InfeasibleConfigError(violations)
    by_shape: Dict[tuple, AccessStats] = {}
    per_layer = []
    for layer in net.layers:
        key = layer.shape_key()
        if key not in by_shape:
            by_shape[key] = _layer_stats(layer, cfg)
        per_layer.append(by_shape[key])
    return sum_stats(per_layer)


def stats_diff(a: AccessStats, b: AccessStats) -> List[Tuple[str, object, object]]:
    """(field, a, b) for every field that differs, in schema order."""
    return [(field, getattr(a, field), getattr(b, field))
            for field in STATS_FIELDS if getattr(a, field) != getattr(b, field)]
