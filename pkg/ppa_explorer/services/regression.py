"""Polynomial surrogate fitting with k-fold degree selection."""
import logging
import os
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError
from sklearn.model_selection import KFold
from sklearn.preprocessing import PolynomialFeatures

from ppa_explorer.config import Config
from ppa_explorer.models.arch import AcceleratorConfig
from ppa_explorer.models.dse import DesignPoint
from ppa_explorer.models.regression import PolynomialModel, Sample
from ppa_explorer.services.errors import (
    RankDeficiencyError,
    RegressionError,
    describe_validation_error,
)

logger = logging.getLogger(__name__)

FEATURE_NAMES = ['pe_rows', 'pe_cols', 'glb_bytes', 'ifmap_spad_bytes', 'filter_spad_bytes',
                 'psum_spad_bytes', 'act_bits', 'wgt_bits']

# target token -> PPAResult field
TARGETS = {
    'power': 'avg_power_w',
    'latency': 'latency_s',
    'area': 'area_mm2',
}


def design_features(cfg: AcceleratorConfig) -> List[float]:
    """Feature vector of a design point, in FEATURE_NAMES order."""
    return [float(cfg.pe_rows), float(cfg.pe_cols), float(cfg.glb_bytes),
            float(cfg.ifmap_spad_bytes), float(cfg.filter_spad_bytes),
            float(cfg.psum_spad_bytes), float(cfg.pe_type.act_bits), float(cfg.pe_type.wgt_bits)]


def _target_field(target: str) -> str:
    if target not in TARGETS:
        raise RegressionError(f"unknown target '{target}' (expected one of {', '.join(TARGETS)})")
    return TARGETS[target]


def _as_arrays(samples: Sequence[Sample], k: int, max_degree: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    if k < 2:
        raise RegressionError(f'k must be >= 2, got {k}')
    if max_degree < 1:
        raise RegressionError(f'max_degree must be >= 1, got {max_degree}')
    if len(samples) < 2 * k:
        raise RegressionError(f'{len(samples)} samples is too few for {k}-fold cross validation (need {2 * k})')
    widths = {len(s.features) for s in samples}
    if len(widths) != 1:
        raise RegressionError(f'feature vectors have differing lengths: {sorted(widths)}')
    X = np.array([s.features for s in samples], dtype=float)
    y = np.array([s.target for s in samples], dtype=float)
    if not np.all(np.isfinite(X)):
        raise RegressionError('features must be finite')
    return X, y


def _normalization(X: np.ndarray) -> Tuple[np.ndarray, np.ndarray, List[int]]:
    """Min-max shift/scale per feature; zero-range features are inactive."""
    shift = X.min(axis=0)
    span = X.max(axis=0) - shift
    active = [i for i in range(X.shape[1]) if span[i] > 0]
    scale = np.where(span > 0, span, 1.0)
    return shift, scale, active


def _normalize(X: np.ndarray, shift: np.ndarray, scale: np.ndarray, active: List[int]) -> np.ndarray:
    return ((X - shift) / scale)[:, active]


def _expand(Z: np.ndarray, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """Monomials of total degree <= degree, graded-lexicographic."""
    poly = PolynomialFeatures(degree=degree, include_bias=True)
    A = poly.fit_transform(Z)
    return A, poly.powers_


def _solve(A: np.ndarray, y: np.ndarray, allow_ridge: bool = True) -> Tuple[np.ndarray, bool]:
    """Least squares; ridge-regularized when A is rank deficient."""
    rank = np.linalg.matrix_rank(A)
    if rank == A.shape[1]:
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        return coef, False
    if not allow_ridge:
        raise RankDeficiencyError(
            f'design matrix has rank {rank} < {A.shape[1]} columns and the ridge fallback is disabled'
        )
    penalty = np.sqrt(Config.RIDGE_PENALTY) * np.eye(A.shape[1])
    A_aug = np.vstack([A, penalty])
    y_aug = np.concatenate([y, np.zeros(A.shape[1])])
    coef, *_ = np.linalg.lstsq(A_aug, y_aug, rcond=None)
    return coef, True


def _cv_rmse(Z: np.ndarray, y: np.ndarray, degree: int, k: int, seed: int) -> float:
    A, _ = _expand(Z, degree)
    squared = 0.0
    for train, test in KFold(n_splits=k, shuffle=True, random_state=seed).split(A):
        coef, _ = _solve(A[train], y[train])
        residual = A[test] @ coef - y[test]
        squared += float(residual @ residual)
    return float(np.sqrt(squared / len(y)))


def cv_error(samples: Sequence[Sample], degree: int, k: int = Config.CV_FOLDS,
             seed: int = Config.CV_SEED) -> float:
    """Root-mean-square held-out error over k seeded folds."""
    X, y = _as_arrays(samples, k, degree)
    shift, scale, active = _normalization(X)
    if not active:
        raise RegressionError('every feature is constant across the samples')
    return _cv_rmse(_normalize(X, shift, scale, active), y, degree, k, seed)


def fit_poly(samples: Sequence[Sample], max_degree: int = Config.MAX_DEGREE,
             k: int = Config.CV_FOLDS, seed: int = Config.CV_SEED,
             feature_names: Optional[List[str]] = None, target_name: str = 'target',
             allow_ridge: bool = True) -> PolynomialModel:
    """Select the degree by k-fold CV, then refit on every sample."""
    X, y = _as_arrays(samples, k, max_degree)
    if feature_names is None:
        feature_names = [f'x{i}' for i in range(X.shape[1])]
    if len(feature_names) != X.shape[1]:
        raise RegressionError(f'{len(feature_names)} feature names for {X.shape[1]} features')

    shift, scale, active = _normalization(X)
    if not active:
        raise RegressionError('every feature is constant across the samples')
    Z = _normalize(X, shift, scale, active)
    constant = [feature_names[i] for i in range(X.shape[1]) if i not in active]
    if constant:
        logger.info('constant features excluded from expansion: %s', ', '.join(constant))

    scores = {d: _cv_rmse(Z, y, d, k, seed) for d in range(1, max_degree + 1)}
    tolerance = Config.CV_TIE_RTOL * float(np.sqrt(np.mean(y ** 2)))
    best = min(scores.values())
    degree = min(d for d, score in scores.items() if score <= best + tolerance)

    A, powers = _expand(Z, degree)
    coef, ridge = _solve(A, y, allow_ridge)
    if ridge:
        logger.warning('design matrix rank deficient at degree %d; ridge fallback (penalty %g) used',
                       degree, Config.RIDGE_PENALTY)
    logger.info('selected degree %d (cv rmse %.6g)', degree, scores[degree])
    return PolynomialModel(
        degree=degree,
        feature_names=list(feature_names),
        target_name=target_name,
        active_features=active,
        feature_shift=shift.tolist(),
        feature_scale=scale.tolist(),
        powers=powers.tolist(),
        coefficients=coef.tolist(),
        cv_rmse=scores[degree],
        cv_scores=scores,
        ridge_fallback=ridge,
        n_samples=len(y),
        folds=k,
        seed=seed,
    )


def predict(model: PolynomialModel, features: Sequence[float]) -> float:
    """Evaluate the model on one raw feature vector."""
    if len(features) != len(model.feature_names):
        raise RegressionError(
            f'expected {len(model.feature_names)} features ({", ".join(model.feature_names)}), got {len(features)}'
        )
    x = np.asarray(features, dtype=float)
    z = ((x - np.asarray(model.feature_shift)) / np.asarray(model.feature_scale))[model.active_features]
    monomials = np.prod(z[None, :] ** np.asarray(model.powers), axis=1)
    return float(monomials @ np.asarray(model.coefficients))


def samples_from_points(points: Sequence[DesignPoint], target: str) -> List[Sample]:
    """Feasible points as (design features, PPA target) samples."""
    field = _target_field(target)
    return [Sample(features=design_features(p.cfg), target=getattr(p.ppa, field))
            for p in points if p.feasible and p.ppa is not None]


def load_samples(path: str, target: str) -> Tuple[List[Sample], List[str]]:
    """Samples from an explore points CSV or a plain feature/target CSV."""
    if not os.path.exists(path):
        raise RegressionError(f"samples file '{path}' not found")
    try:
        df = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise RegressionError(f"malformed samples file '{path}': {e}") from e

    field = _target_field(target)
    if set(FEATURE_NAMES).issubset(df.columns) and 'feasible' in df.columns:
        df = df[df['feasible'].astype(str).str.lower() == 'true']
        names = list(FEATURE_NAMES)
    else:
        names = [c for c in df.columns if c not in (target, field)]
    target_column = field if field in df.columns else target
    if target_column not in df.columns:
        raise RegressionError(f"samples file '{path}' has no '{target}' or '{field}' column")
    if not names:
        raise RegressionError(f"samples file '{path}' has no feature columns")

    try:
        X = df[names].apply(pd.to_numeric).to_numpy(dtype=float)
        y = pd.to_numeric(df[target_column]).to_numpy(dtype=float)
        samples = [Sample(features=row.tolist(), target=t) for row, t in zip(X, y)]
    except (ValueError, ValidationError) as e:
        raise RegressionError(f"malformed samples file '{path}': {e}") from e
    logger.info('loaded %d samples with %d features from %s', len(samples), len(names), path)
    return samples, names


def save_model(model: PolynomialModel, path: str):
    """Write the model as JSON."""
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(model.model_dump_json(indent=2))
        f.write('\n')


def load_model(path: str) -> PolynomialModel:
    """Read a model written by save_model."""
    if not os.path.exists(path):
        raise RegressionError(f"model file '{path}' not found")
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    try:
        return PolynomialModel.model_validate_json(text)
    except ValidationError as e:
        raise RegressionError(describe_validation_error(e, 'invalid model file')) from e
