import math
from typing import Dict, List

from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class Sample(BaseModel):
    """One (design features, target) observation."""
    model_config = ConfigDict(frozen=True)

    features: List[float]
    target: float

    @field_validator('target')
    @classmethod
    def finite_target(cls, v):
        if not math.isfinite(v):
            raise ValueError('target must be finite')
        return v


class PolynomialModel(BaseModel):
    """Fitted polynomial surrogate.

    Coefficients follow the graded-lexicographic monomial order listed in
    ``powers``; exponents index the active (non-constant) features only.
    """
    model_config = ConfigDict(extra='forbid', frozen=True)

    degree: int
    feature_names: List[str]
    target_name: str = 'target'
    active_features: List[int]
    feature_shift: List[float]
    feature_scale: List[float]
    powers: List[List[int]]
    coefficients: List[float]
    cv_rmse: float
    cv_scores: Dict[int, float]
    ridge_fallback: bool = False
    n_samples: int
    folds: int
    seed: int

    @model_validator(mode='after')
    def check_shape(self):
        """Coefficient count is C(n_active + degree, degree)."""
        n_active = len(self.active_features)
        expected = math.comb(n_active + self.degree, self.degree)
        if len(self.coefficients) != expected or len(self.powers) != expected:
            raise ValueError(
                f'expected {expected} coefficients for {n_active} features at degree '
                f'{self.degree}, got {len(self.coefficients)}'
            )
        n = len(self.feature_names)
        if len(self.feature_shift) != n or len(self.feature_scale) != n:
            raise ValueError('normalization parameters must cover every feature')
        if self.cv_rmse < 0:
            raise ValueError('cv_rmse must be >= 0')
        return self
