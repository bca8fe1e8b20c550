"""
Canonical-form ridge regression and the theoretical MSE formulas.

With D'X'XD = Lambda, Z = XD and alpha = D'beta the model becomes
Y = Z alpha + eps with an orthogonal design, so ridge estimation reduces to
componentwise shrinkage alpha_R,j = lambda_j alpha_OLS,j / (lambda_j + k_j).
"""
import logging
from typing import Optional

import numpy as np

from app.core.errors import DegenerateCoefficientError, SingularMatrixError
from app.core.linalg import sym_eig
from app.models.regression import CanonicalModel, Dataset, SymmetricEigen

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-12


def canonicalize(dataset: Dataset, eig: Optional[SymmetricEigen] = None) -> CanonicalModel:
    """
    Rotate a dataset into canonical form and estimate alpha and sigma^2.

    Args:
        dataset: observations; ``dataset.centered`` selects n - p - 1 residual
            degrees of freedom instead of n - p
        eig: precomputed eigendecomposition of X'X, reused across replications

    Returns:
        CanonicalModel with alpha_OLS = Lambda^-1 Z'Y and sigma2_hat = RSS / dof
    """
    x, y = dataset.x, dataset.y
    if eig is None:
        eig = sym_eig(x.T @ x)
    if eig.lambda_min <= RANK_TOLERANCE * max(eig.lambda_max, 0.0):
        raise SingularMatrixError(
            f"X'X is singular (smallest eigenvalue {eig.lambda_min:.3e}); X is rank deficient"
        )

    z = x @ eig.eigenvectors
    zy = z.T @ y
    alpha = zy / eig.eigenvalues
    residual = y - z @ alpha
    dof = dataset.n - dataset.p - (1 if dataset.centered else 0)
    sigma2 = float(residual @ residual) / dof

    return CanonicalModel(
        z=z,
        eig=eig,
        alpha_ols=alpha,
        sigma2_hat=sigma2,
        n=dataset.n,
        p=dataset.p,
        dof=dof,
    )


def generalized_ridge_fit(model: CanonicalModel, ks: np.ndarray) -> np.ndarray:
    """alpha_R = (Z'Z + K)^-1 Z'Y with K = diag(ks)"""
    ks = np.broadcast_to(np.asarray(ks, dtype=float), model.alpha_ols.shape)
    if np.any(ks < 0) or not np.all(np.isfinite(ks)):
        raise ValueError(f"ridge parameters must be finite and nonnegative, got {ks}")
    lambdas = model.lambdas
    return lambdas * model.alpha_ols / (lambdas + ks)


def ridge_fit(model: CanonicalModel, k: float) -> np.ndarray:
    """alpha_R = (Z'Z + kI)^-1 Z'Y"""
    if k < 0:
        raise ValueError(f"ridge parameter must be nonnegative, got {k}")
    return generalized_ridge_fit(model, np.full(model.p, float(k)))


def to_original(model: CanonicalModel, alpha: np.ndarray) -> np.ndarray:
    """Map canonical coefficients back to beta = D alpha"""
    return model.eig.eigenvectors @ np.asarray(alpha, dtype=float)


def optimal_k(sigma2: float, alpha: np.ndarray) -> np.ndarray:
    """Per-coordinate k_j = sigma^2 / alpha_j^2 minimizing the generalized ridge MSE"""
    alpha = np.asarray(alpha, dtype=float)
    zero = np.flatnonzero(alpha == 0)
    if zero.size:
        raise DegenerateCoefficientError("optimal", int(zero[0]), "k_j is unbounded for alpha_j = 0")
    return sigma2 / alpha**2


def mse_general(ks: np.ndarray, lambdas: np.ndarray, alpha: np.ndarray, sigma2: float) -> float:
    """
    MSE of the generalized ridge estimator.

    sum_j sigma^2 lambda_j / (lambda_j + k_j)^2 + sum_j k_j^2 alpha_j^2 / (lambda_j + k_j)^2
    """
    lambdas = np.asarray(lambdas, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    ks = np.broadcast_to(np.asarray(ks, dtype=float), lambdas.shape)
    if alpha.shape != lambdas.shape:
        raise ValueError(f"alpha has shape {alpha.shape}, lambdas {lambdas.shape}")
    denominator = (lambdas + ks) ** 2
    variance = np.sum(sigma2 * lambdas / denominator)
    bias = np.sum(ks**2 * alpha**2 / denominator)
    return float(variance + bias)


def mse_scalar(k: float, lambdas: np.ndarray, alpha: np.ndarray, sigma2: float) -> float:
    """mse_general with the same k on every coordinate"""
    return mse_general(np.full(np.shape(lambdas), float(k)), lambdas, alpha, sigma2)


def mse_ols(lambdas: np.ndarray, sigma2: float) -> float:
    """sigma^2 sum_j 1 / lambda_j"""
    lambdas = np.asarray(lambdas, dtype=float)
    if np.any(lambdas <= 0):
        raise SingularMatrixError(f"eigenvalues must be positive, got {lambdas}")
    return float(sigma2 * np.sum(1.0 / lambdas))
