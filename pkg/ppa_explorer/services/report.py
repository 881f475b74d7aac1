"""Points CSV and provenance-carrying run reports."""
import hashlib
import json
import logging
import math
import os
from typing import Dict, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from ppa_explorer.models.arch import AcceleratorConfig
from ppa_explorer.models.cost import PPAResult
from ppa_explorer.models.dse import DesignPoint
from ppa_explorer.models.report import REQUIRED_UNITS, RunReport
from ppa_explorer.services.errors import ConfigError, ReportSchemaError, describe_validation_error

logger = logging.getLogger(__name__)

CONFIG_COLUMNS = ['pe_rows', 'pe_cols', 'glb_bytes', 'ifmap_spad_bytes', 'filter_spad_bytes',
                  'psum_spad_bytes', 'dram_bw', 'clock_hz', 'pe_type', 'act_bits', 'wgt_bits']
PPA_COLUMNS = list(PPAResult.model_fields)
POINT_COLUMNS = CONFIG_COLUMNS + ['feasible'] + PPA_COLUMNS + ['norm_perf_per_area', 'norm_energy', 'top1']

PAYLOAD_FIELDS = {'ppa', 'stats', 'points', 'model'}


def _point_row(p: DesignPoint) -> dict:
    cfg = p.cfg
    row = {
        'pe_rows': cfg.pe_rows,
        'pe_cols': cfg.pe_cols,
        'glb_bytes': cfg.glb_bytes,
        'ifmap_spad_bytes': cfg.ifmap_spad_bytes,
        'filter_spad_bytes': cfg.filter_spad_bytes,
        'psum_spad_bytes': cfg.psum_spad_bytes,
        'dram_bw': float(cfg.dram_bw),
        'clock_hz': float(cfg.clock_hz),
        'pe_type': cfg.pe_type.value,
        'act_bits': cfg.pe_type.act_bits,
        'wgt_bits': cfg.pe_type.wgt_bits,
        'feasible': p.feasible,
    }
    for field in PPA_COLUMNS:
        row[field] = getattr(p.ppa, field) if p.ppa is not None else None
    row['norm_perf_per_area'] = p.norm_perf_per_area
    row['norm_energy'] = p.norm_energy
    row['top1'] = p.accuracy
    return row


def points_frame(points: Sequence[DesignPoint]) -> pd.DataFrame:
    return pd.DataFrame([_point_row(p) for p in points], columns=POINT_COLUMNS)


def write_points_csv(points: Sequence[DesignPoint], path: str):
    """Header plus one row per point; empty cells for absent values."""
    points_frame(points).to_csv(path, index=False, na_rep='', lineterminator='\n')
    logger.info('wrote %d points to %s', len(points), path)


def _optional(value) -> Optional[float]:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return float(value)


def read_points_csv(path: str) -> List[DesignPoint]:
    """Inverse of write_points_csv (violation texts are not carried)."""
    if not os.path.exists(path):
        raise ConfigError(f"points file '{path}' not found")
    try:
        df = pd.read_csv(path, float_precision='round_trip', dtype={'pe_type': str})
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ConfigError(f"malformed points file '{path}': {e}") from e
    missing = [c for c in POINT_COLUMNS if c not in df.columns]
    if missing:
        raise ConfigError(f"points file '{path}' lacks columns: {', '.join(missing)}")

    points = []
    for record in df.to_dict(orient='records'):
        try:
            cfg = AcceleratorConfig(
                pe_rows=int(record['pe_rows']),
                pe_cols=int(record['pe_cols']),
                glb_bytes=int(record['glb_bytes']),
                ifmap_spad_bytes=int(record['ifmap_spad_bytes']),
                filter_spad_bytes=int(record['filter_spad_bytes']),
                psum_spad_bytes=int(record['psum_spad_bytes']),
                dram_bw=float(record['dram_bw']),
                clock_hz=float(record['clock_hz']),
                pe_type=record['pe_type'],
            )
            feasible = str(record['feasible']).strip().lower() == 'true'
            ppa = None
            if feasible:
                ppa = PPAResult(**{field: float(record[field]) for field in PPA_COLUMNS})
            points.append(DesignPoint(
                cfg=cfg,
                feasible=feasible,
                ppa=ppa,
                norm_perf_per_area=_optional(record['norm_perf_per_area']),
                norm_energy=_optional(record['norm_energy']),
                accuracy=_optional(record['top1']),
            ))
        except (ValueError, TypeError) as e:
            raise ConfigError(f"malformed points file '{path}' at row {len(points) + 2}: {e}") from e
    return points


def text_digest(text: str) -> str:
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def file_digest(path: str) -> str:
    """sha256 of the file bytes."""
    sha = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(65536), b''):
            sha.update(chunk)
    return sha.hexdigest()


def payload_digest(report: RunReport) -> str:
    payload = report.model_dump(mode='json', include=PAYLOAD_FIELDS)
    return text_digest(json.dumps(payload, sort_keys=True, separators=(',', ':')))


def check_report(report: RunReport):
    """Raise ReportSchemaError when units or provenance are incomplete."""
    required = REQUIRED_UNITS.get(report.kind)
    if required is None:
        raise ReportSchemaError(f"unknown report kind '{report.kind}' (known: {', '.join(REQUIRED_UNITS)})")
    missing = [column for column in required if column not in report.units]
    if missing:
        raise ReportSchemaError(f"report lacks units for: {', '.join(missing)}")
    if not report.input_digests:
        raise ReportSchemaError('report carries no input digests')


def write_report(report: RunReport, path: str) -> RunReport:
    """Stamp the payload digest and write the report as JSON."""
    check_report(report)
    stamped = report.model_copy(update={'payload_digest': payload_digest(report)})
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(stamped.model_dump_json(indent=2, exclude_none=True))
        f.write('\n')
    logger.info('wrote %s report to %s', report.kind, path)
    return stamped


def read_report(path: str) -> RunReport:
    """Load a run report written by write_report."""
    if not os.path.exists(path):
        raise ReportSchemaError(f"report file '{path}' not found")
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    try:
        return RunReport.model_validate_json(text)
    except ValidationError as e:
        raise ReportSchemaError(describe_validation_error(e, 'invalid report')) from e


def verify_report(report: RunReport, inputs: Optional[Dict[str, str]] = None) -> List[str]:
    """Digest mismatches between the report, its payload and the named input files."""
    warnings = []
    if report.payload_digest != payload_digest(report):
        warnings.append('payload digest does not match the report contents')
    for name, path in (inputs or {}).items():
        recorded = report.input_digests.get(name)
        if recorded is None:
            warnings.append(f"no digest recorded for input '{name}'")
        elif not os.path.exists(path):
            warnings.append(f"input '{name}' not found at {path}")
        elif file_digest(path) != recorded:
            warnings.append(f"input '{name}' ({path}) changed since the report was written")
    for warning in warnings:
        logger.warning(warning)
    return warnings
