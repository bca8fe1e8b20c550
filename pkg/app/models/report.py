from pydantic import BaseModel, Field
from typing import Any, Dict, List, Optional
from datetime import datetime, timezone

from app.models.regression import Dataset


class NamedDataset(BaseModel):
    """A dataset plus where it came from"""
    id: str
    dataset: Dataset
    source_note: str = ""


class RealDataReport(BaseModel):
    """Estimated theoretical MSE per estimator for one real dataset"""
    dataset_id: str
    n: int
    p: int
    eigenvalues: List[float]
    condition_number: float
    sigma2_hat: float
    k: Dict[str, float]
    mse: Dict[str, float]


class EstimatorFit(BaseModel):
    """Ridge fit of one dataset under one estimator"""
    estimator: str
    k: float
    mse: float
    alpha: List[float]
    beta: List[float]


class FitReport(BaseModel):
    """Coefficient report for a user dataset"""
    source: str
    n: int
    p: int
    column_labels: List[str]
    standardized: bool
    sigma2_hat: float
    eigenvalues: List[float]
    condition_number: float
    fits: List[EstimatorFit]
    generalized: Optional[EstimatorFit] = None


class RunManifest(BaseModel):
    """Everything needed to re-run a command bit-identically"""
    command: str
    config: Dict[str, Any]
    seed: Optional[int] = None
    software_version: str
    started_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    finished_at: Optional[datetime] = None
