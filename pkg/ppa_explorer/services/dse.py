"""Design grid enumeration, exploration, normalization and Pareto fronts."""
import itertools
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ppa_explorer import data_path
from ppa_explorer.config import Config
from ppa_explorer.models.arch import AcceleratorConfig, PEType
from ppa_explorer.models.cost import CostTable
from ppa_explorer.models.dse import (
    AccuracyTable,
    DesignPoint,
    Direction,
    GridSpec,
    Objective,
    PETypeSummary,
)
from ppa_explorer.models.workload import Network
from ppa_explorer.services.arch import validate_config
from ppa_explorer.services.costmodel import evaluate_ppa
from ppa_explorer.services.errors import (
    AccuracyLookupError,
    ConfigError,
    GridError,
    MetricError,
    NormalizationError,
    describe_validation_error,
)

logger = logging.getLogger(__name__)


def _ppa_metric(field: str) -> Callable[[DesignPoint], Optional[float]]:
    return lambda p: getattr(p.ppa, field) if p.ppa is not None else None


METRICS: Dict[str, Callable[[DesignPoint], Optional[float]]] = {
    'perf_per_area': _ppa_metric('perf_per_area'),
    'energy': _ppa_metric('energy_j'),
    'latency': _ppa_metric('latency_s'),
    'area': _ppa_metric('area_mm2'),
    'power': _ppa_metric('avg_power_w'),
    'throughput': _ppa_metric('throughput'),
    'norm_perf_per_area': lambda p: p.norm_perf_per_area,
    'norm_energy': lambda p: p.norm_energy,
    'top1': lambda p: p.accuracy,
    'top1_error': lambda p: 1.0 - p.accuracy if p.accuracy is not None else None,
}

ACCURACY_METRICS = ('top1', 'top1_error')


def enumerate_space(grid: GridSpec) -> List[AcceleratorConfig]:
    """Cartesian product; pe_type varies fastest."""
    if grid.size > grid.cap:
        raise GridError(f'grid has {grid.size} points, above the cap of {grid.cap}')
    configs = []
    for rows, cols, glb, spads, bw, clock, pe_type in itertools.product(
            grid.pe_rows, grid.pe_cols, grid.glb_bytes, grid.spad_choices(),
            grid.dram_bw, grid.clock_hz, grid.pe_types):
        ifmap, filt, psum = spads
        configs.append(AcceleratorConfig(
            pe_rows=rows, pe_cols=cols, glb_bytes=glb,
            ifmap_spad_bytes=ifmap, filter_spad_bytes=filt, psum_spad_bytes=psum,
            dram_bw=bw, clock_hz=clock, pe_type=pe_type,
        ))
    return configs


def evaluate_point(net: Network, cfg: AcceleratorConfig, table: CostTable) -> DesignPoint:
    """PPA of one design point, or its violations when infeasible."""
    violations = validate_config(cfg, net)
    if violations:
        return DesignPoint(cfg=cfg, feasible=False, violations=violations)
    return DesignPoint(cfg=cfg, feasible=True, ppa=evaluate_ppa(net, cfg, table))


def explore(net: Network, grid: GridSpec, table: CostTable, normalize: bool = True,
            workers: int = Config.EXPLORE_WORKERS) -> List[DesignPoint]:
    """Evaluate every grid point in enumeration order."""
    configs = enumerate_space(grid)
    if workers > 1:
        points: List[Optional[DesignPoint]] = [None] * len(configs)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(evaluate_point, net, cfg, table): i for i, cfg in enumerate(configs)}
            for future, index in futures.items():
                points[index] = future.result()
    else:
        points = [evaluate_point(net, cfg, table) for cfg in configs]

    infeasible = sum(1 for p in points if not p.feasible)
    logger.info('%s: %d points, %d infeasible', net.name, len(points), infeasible)
    for p in points:
        if not p.feasible:
            logger.debug('infeasible %s: %s', p.cfg, '; '.join(p.violations))

    if normalize:
        try:
            return _normalize(points)
        except NormalizationError as e:
            logger.warning('%s; returning raw values', e)
    return points


def normalization_baseline(points: Sequence[DesignPoint]) -> DesignPoint:
    """Feasible INT16 point of highest perf/area; ties to lower area, then order."""
    best = None
    for p in points:
        if not p.feasible or p.cfg.pe_type != PEType.INT16:
            continue
        if best is None:
            best = p
            continue
        if (p.ppa.perf_per_area > best.ppa.perf_per_area
                or (p.ppa.perf_per_area == best.ppa.perf_per_area and p.ppa.area_mm2 < best.ppa.area_mm2)):
            best = p
    if best is None:
        raise NormalizationError('no feasible INT16 point to normalize against')
    return best


def _normalize(points: Sequence[DesignPoint]) -> List[DesignPoint]:
    base = normalization_baseline(points)
    logger.info('normalization baseline: %s', base.cfg)
    out = []
    for p in points:
        if not p.feasible:
            out.append(p)
            continue
        out.append(p.model_copy(update={
            'norm_perf_per_area': p.ppa.perf_per_area / base.ppa.perf_per_area,
            'norm_energy': p.ppa.energy_j / base.ppa.energy_j,
        }))
    return out


def normalize(points: Sequence[DesignPoint]) -> List[DesignPoint]:
    """Attach perf/area and energy ratios against the best INT16 point."""
    return _normalize(points)


def parse_objectives(spec: str) -> List[Objective]:
    """Parse ``metric:dir,metric:dir``."""
    objectives = []
    for token in (t.strip() for t in spec.split(',')):
        if not token:
            continue
        metric, sep, direction = token.partition(':')
        metric, direction = metric.strip(), direction.strip().lower()
        if metric not in METRICS:
            raise MetricError(f"unknown metric '{metric}' (known: {', '.join(METRICS)})")
        if not sep or direction not in (d.value for d in Direction):
            raise MetricError(f"objective '{token}' needs a direction ':max' or ':min'")
        objectives.append(Objective(metric=metric, direction=Direction(direction)))
    if not objectives:
        raise MetricError('no objectives given')
    return objectives


def _metric_matrix(points: Sequence[DesignPoint], objectives: Sequence[Objective]) -> np.ndarray:
    values = np.empty((len(points), len(objectives)))
    for j, obj in enumerate(objectives):
        getter = METRICS.get(obj.metric)
        if getter is None:
            raise MetricError(f"unknown metric '{obj.metric}'")
        for i, p in enumerate(points):
            value = getter(p)
            if value is None:
                raise MetricError(f"metric '{obj.metric}' is absent on point {p.cfg}")
            values[i, j] = value
    return values


def pareto_front(points: Sequence[DesignPoint], objectives: Sequence[Objective]) -> List[DesignPoint]:
    """Non-dominated feasible points, ascending by the first objective."""
    if not objectives:
        raise MetricError('no objectives given')
    feasible = [p for p in points if p.feasible]
    if not feasible:
        return []
    raw = _metric_matrix(feasible, objectives)
    signs = np.array([1.0 if o.direction == Direction.MAX else -1.0 for o in objectives])
    gains = raw * signs

    # descending lexicographic order: a dominator always precedes what it dominates
    order = np.lexsort(tuple(-gains[:, j] for j in reversed(range(gains.shape[1]))))
    front: List[int] = []
    for i in order:
        if front:
            kept = gains[front]
            dominated = np.any(np.all(kept >= gains[i], axis=1) & np.any(kept > gains[i], axis=1))
            if dominated:
                continue
        front.append(int(i))
    front.sort(key=lambda i: (raw[i, 0], i))
    return [feasible[i] for i in front]


def join_accuracy(points: Sequence[DesignPoint], acc: AccuracyTable, network: str) -> List[DesignPoint]:
    """Attach the top-1 accuracy of each point's PE type."""
    out = []
    for p in points:
        top1 = acc.lookup(network, p.cfg.pe_type)
        if top1 is None and p.feasible:
            raise AccuracyLookupError(
                f"accuracy table has no entry for ({network}, {p.cfg.pe_type.value})"
            )
        out.append(p.model_copy(update={'accuracy': top1}))
    return out


def best_per_pe_type(points: Sequence[DesignPoint], metric: str = 'perf_per_area',
                     direction: Direction = Direction.MAX) -> Dict[PEType, DesignPoint]:
    """Representative point of each PE type; first in order wins ties."""
    getter = METRICS.get(metric)
    if getter is None:
        raise MetricError(f"unknown metric '{metric}'")
    best: Dict[PEType, DesignPoint] = {}
    for p in points:
        if not p.feasible:
            continue
        value = getter(p)
        if value is None:
            raise MetricError(f"metric '{metric}' is absent on point {p.cfg}")
        current = best.get(p.cfg.pe_type)
        if current is None:
            best[p.cfg.pe_type] = p
            continue
        incumbent = getter(current)
        if (value > incumbent) if direction == Direction.MAX else (value < incumbent):
            best[p.cfg.pe_type] = p
    return best


def pe_type_summary(points: Sequence[DesignPoint]) -> List[PETypeSummary]:
    """Best perf/area and lowest energy per PE type, against INT16 and FP32."""
    top = best_per_pe_type(points, 'perf_per_area', Direction.MAX)
    frugal = best_per_pe_type(points, 'energy', Direction.MIN)

    def ratio(pe_type: PEType, ref: PEType, pick: Dict[PEType, DesignPoint], field: str) -> Optional[float]:
        if pe_type not in pick or ref not in pick:
            return None
        return getattr(pick[pe_type].ppa, field) / getattr(pick[ref].ppa, field)

    rows = []
    for pe_type in PEType:
        if not any(p.cfg.pe_type == pe_type for p in points):
            continue
        count = sum(1 for p in points if p.feasible and p.cfg.pe_type == pe_type)
        rows.append(PETypeSummary(
            pe_type=pe_type,
            feasible_points=count,
            best_perf_per_area=top[pe_type].ppa.perf_per_area if pe_type in top else None,
            min_energy_j=frugal[pe_type].ppa.energy_j if pe_type in frugal else None,
            perf_per_area_vs_int16=ratio(pe_type, PEType.INT16, top, 'perf_per_area'),
            energy_vs_int16=ratio(pe_type, PEType.INT16, frugal, 'energy_j'),
            perf_per_area_vs_fp32=ratio(pe_type, PEType.FP32, top, 'perf_per_area'),
            energy_vs_fp32=ratio(pe_type, PEType.FP32, frugal, 'energy_j'),
        ))
    return rows


def parse_grid(text: str) -> GridSpec:
    try:
        return GridSpec.model_validate_json(text)
    except ValidationError as e:
        raise GridError(describe_validation_error(e, 'invalid grid')) from e


def load_grid(source: str) -> GridSpec:
    """Bundled grid for ``default``, otherwise a file path."""
    path = data_path(Config.GRID_FILE) if source == 'default' else source
    if not os.path.exists(path):
        raise GridError(f"grid file '{source}' not found")
    with open(path, 'r', encoding='utf-8') as f:
        return parse_grid(f.read())


def default_grid() -> GridSpec:
    return load_grid('default')


def load_accuracy(path: str) -> AccuracyTable:
    """Read a network,pe_type,top1 CSV."""
    if not os.path.exists(path):
        raise ConfigError(f"accuracy file '{path}' not found")
    try:
        df = pd.read_csv(path, dtype={'network': str, 'pe_type': str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ConfigError(f"malformed accuracy file '{path}': {e}") from e
    missing = [c for c in ('network', 'pe_type', 'top1') if c not in df.columns]
    if missing:
        raise ConfigError(f"accuracy file '{path}' lacks columns: {', '.join(missing)}")

    entries: Dict[str, Dict[PEType, float]] = {}
    for row in df.itertuples(index=False):
        try:
            pe_type = PEType.parse(row.pe_type)
            top1 = float(row.top1)
        except ValueError as e:
            raise ConfigError(f"accuracy file '{path}': bad row {tuple(row)}: {e}") from e
        entries.setdefault(row.network, {})[pe_type] = top1
    try:
        return AccuracyTable(entries=entries)
    except ValidationError as e:
        raise ConfigError(describe_validation_error(e, f"accuracy file '{path}'")) from e
