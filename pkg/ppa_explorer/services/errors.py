"""Domain errors raised by the service layer."""
from typing import List, Optional


class PPAExplorerError(ValueError):
    """Base class for every domain error."""


class WorkloadError(PPAExplorerError):
    """Malformed network document, layer invariant violation or unknown preset."""


class ConfigError(PPAExplorerError):
    """Malformed architecture, grid, cost-table or accuracy document."""


class InfeasibleConfigError(PPAExplorerError):
    """A design point violates base or capacity invariants."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__('infeasible configuration: ' + '; '.join(self.violations))


class GridError(ConfigError):
    """Invalid design grid."""


class NormalizationError(PPAExplorerError):
    """No feasible INT16 baseline to normalize against."""


class MetricError(PPAExplorerError):
    """Unknown or absent objective metric."""


class AccuracyLookupError(PPAExplorerError):
    """Accuracy table has no entry for a (network, PE type) pair."""


class RegressionError(PPAExplorerError):
    """Invalid regression input."""


class RankDeficiencyError(RegressionError):
    """Design matrix is rank deficient and the ridge fallback is disabled."""


class OracleGuardError(PPAExplorerError):
    """Layer too large to enumerate."""


class OracleMismatchError(PPAExplorerError):
    """Analytical and simulated statistics differ."""

    def __init__(self, layer: str, field: str, analytical, simulated):
        self.layer = layer
        self.field = field
        super().__init__(
            f"layer '{layer}': field '{field}' differs "
            f"(analytical={analytical}, simulated={simulated})"
        )


class ReportSchemaError(PPAExplorerError):
    """Report is missing units or provenance digests."""


def describe_validation_error(exc, prefix: Optional[str] = None) -> str:
    """Flatten a pydantic ValidationError into one line."""
    parts = []
    for err in exc.errors():
        loc = '.'.join(str(p) for p in err.get('loc', ()))
        parts.append(f"{loc}: {err.get('msg')}" if loc else str(err.get('msg')))
    text = '; '.join(parts) or str(exc)
    return f'{prefix}: {text}' if prefix else text
