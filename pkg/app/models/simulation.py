from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Dict, Literal
import numpy as np

from app.models.regression import SymmetricEigen


class SimulationCell(BaseModel):
    """One (rho, n, p, sigma2) combination of the Monte Carlo design"""
    model_config = ConfigDict(frozen=True)

    rho: float = Field(..., ge=0, lt=1, description="correlation parameter; columns correlate at rho^2")
    n: int = Field(..., ge=2, description="sample size")
    p: int = Field(..., ge=1, le=50, description="number of regressors")
    sigma2: float = Field(..., gt=0, description="error variance")
    replications: int = Field(5000, ge=1)
    seed: int = Field(..., ge=0, le=2**64 - 1)
    shared_column: Literal["extra", "last"] = Field(
        "extra", description="shared normal component: an extra (p+1)-th column or the p-th column itself"
    )

    @model_validator(mode="after")
    def check_design(self):
        if not self.n > self.p:
            raise ValueError(f"need n > p (n={self.n}, p={self.p})")
        return self

    def design_key(self) -> str:
        """Identifies the realized X; cells differing only in sigma2 share it"""
        key = f"rho={self.rho:g}|n={self.n}|p={self.p}"
        return key if self.shared_column == "extra" else f"{key}|shared={self.shared_column}"

    def label(self) -> str:
        label = f"rho={self.rho:g}, n={self.n}, p={self.p}, sigma2={self.sigma2:g}"
        return label if self.shared_column == "extra" else f"{label}, shared={self.shared_column}"


class SimulationTruth(BaseModel):
    """Fixed design and true coefficients of one cell"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x: np.ndarray
    beta: np.ndarray
    alpha: np.ndarray
    eig: SymmetricEigen


class CellResult(BaseModel):
    """Average MSE per estimator for one cell"""
    model_config = ConfigDict(frozen=True)

    cell: SimulationCell
    amse: Dict[str, float]
    degenerate_count: Dict[str, int]

    @model_validator(mode="after")
    def check_amse(self):
        for name, value in self.amse.items():
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"AMSE for {name} must be finite and nonnegative, got {value}")
        return self
