"""
Pydantic value objects for Ridge Bench.

Regression types (datasets, canonical models, eigensystems), simulation cells
and results, and the report payloads written by the CLI.
"""

from .regression import CanonicalModel, Dataset, KEstimate, SymmetricEigen
from .report import EstimatorFit, FitReport, NamedDataset, RealDataReport, RunManifest
from .simulation import CellResult, SimulationCell, SimulationTruth

__all__ = [
    'CanonicalModel', 'Dataset', 'KEstimate', 'SymmetricEigen',
    'EstimatorFit', 'FitReport', 'NamedDataset', 'RealDataReport', 'RunManifest',
    'CellResult', 'SimulationCell', 'SimulationTruth',
]
