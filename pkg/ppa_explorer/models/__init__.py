# Models package
from ppa_explorer.models.arch import AcceleratorConfig, PEType
from ppa_explorer.models.cost import CostTable, PECost, PPAResult
from ppa_explorer.models.dataflow import AccessStats, Mapping
from ppa_explorer.models.dse import (
    AccuracyTable,
    DesignPoint,
    Direction,
    GridSpec,
    Objective,
    PETypeSummary,
    SpadPreset,
)
from ppa_explorer.models.regression import PolynomialModel, Sample
from ppa_explorer.models.report import RunReport
from ppa_explorer.models.workload import LayerConfig, LayerKind, Network
