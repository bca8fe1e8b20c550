from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing import List
import math
import numpy as np


class ArrayModel(BaseModel):
    """Base model for immutable value objects carrying numpy arrays"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class SymmetricEigen(ArrayModel):
    """Eigenpairs of a symmetric matrix, eigenvalues descending, eigenvectors as columns"""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @model_validator(mode="after")
    def check_shapes(self):
        p = self.eigenvalues.shape[0]
        if self.eigenvalues.ndim != 1 or self.eigenvectors.shape != (p, p):
            raise ValueError("eigenvectors must be a p x p matrix aligned with p eigenvalues")
        if np.any(np.diff(self.eigenvalues) > 0):
            raise ValueError("eigenvalues must be sorted in descending order")
        return self

    @property
    def p(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[-1])


class Dataset(BaseModel):
    """Raw observations (Y, X) of the linear model Y = X beta + eps"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    y: np.ndarray
    x: np.ndarray
    column_labels: List[str]
    centered: bool = False

    @field_validator("y", "x", mode="before")
    @classmethod
    def as_float_array(cls, v):
        return np.asarray(v, dtype=float)

    @model_validator(mode="after")
    def check_dimensions(self):
        if self.x.ndim != 2 or self.y.ndim != 1:
            raise ValueError("X must be an n x p matrix and Y an n-vector")
        n, p = self.x.shape
        if self.y.shape[0] != n:
            raise ValueError(f"Y has {self.y.shape[0]} rows but X has {n}")
        if len(self.column_labels) != p:
            raise ValueError(f"expected {p} column labels, got {len(self.column_labels)}")
        if not n > p + (1 if self.centered else 0) or p < 1:
            raise ValueError(f"need n > p >= 1 (n={n}, p={p}, centered={self.centered})")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.y))):
            raise ValueError("dataset contains non-finite entries")
        return self

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    @property
    def p(self) -> int:
        return int(self.x.shape[1])


class CanonicalModel(ArrayModel):
    """Canonical form Y = Z alpha + eps with Z = XD and Z'Z = Lambda"""
    z: np.ndarray
    eig: SymmetricEigen
    alpha_ols: np.ndarray
    sigma2_hat: float = Field(..., ge=0)
    n: int
    p: int
    dof: int = Field(..., ge=1)

    @property
    def lambdas(self) -> np.ndarray:
        return self.eig.eigenvalues


class KEstimate(BaseModel):
    """A named scalar ridge parameter"""
    model_config = ConfigDict(frozen=True)

    estimator_name: str
    k: float = Field(..., ge=0)

    @field_validator("k")
    @classmethod
    def finite_k(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("k must be finite")
        return v
