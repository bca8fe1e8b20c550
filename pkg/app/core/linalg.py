"""
Dense linear algebra for small symmetric problems.

The eigensolver is a cyclic Jacobi iteration: every sweep rotates away each
off-diagonal pair once, and iteration stops when the off-diagonal Frobenius
norm drops below ``tolerance`` times the matrix norm. The simulation designs
have p <= 8, where Jacobi is accurate and cheap.
"""
import logging
from typing import Optional

import numpy as np
from scipy import linalg as sla

from app.config import settings
from app.core.errors import (
    ConvergenceError,
    DegenerateColumnError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    SingularMatrixError,
)
from app.models.regression import SymmetricEigen

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-10


def _off_norm(a: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part, summed over the strict upper triangle"""
    upper = a[np.triu_indices(a.shape[0], k=1)]
    return float(np.sqrt(2.0) * np.linalg.norm(upper))


def _rotation_tangent(a: np.ndarray, i: int, j: int) -> float:
    """Smaller root t of t^2 + 2 theta t - 1 = 0, theta = (a_jj - a_ii) / (2 a_ij)"""
    apq = a[i, j]
    h = a[j, j] - a[i, i]
    if abs(h) + 100.0 * abs(apq) == abs(h):
        # theta^2 would overflow; t -> 1 / (2 theta)
        return apq / h
    theta = h / (2.0 * apq)
    if theta == 0.0:
        return 1.0
    return float(np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)))


def _rotate(a: np.ndarray, v: np.ndarray, i: int, j: int) -> None:
    """Apply one Jacobi rotation annihilating a[i, j] in place"""
    t = _rotation_tangent(a, i, j)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    col_i = a[:, i].copy()
    col_j = a[:, j].copy()
    a[:, i] = c * col_i - s * col_j
    a[:, j] = s * col_i + c * col_j
    row_i = a[i, :].copy()
    row_j = a[j, :].copy()
    a[i, :] = c * row_i - s * row_j
    a[j, :] = s * row_i + c * row_j

    vec_i = v[:, i].copy()
    vec_j = v[:, j].copy()
    v[:, i] = c * vec_i - s * vec_j
    v[:, j] = s * vec_i + c * vec_j
    a[i, j] = a[j, i] = 0.0


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the first nonzero component of every column positive"""
    out = vectors.copy()
    for col in range(out.shape[1]):
        nonzero = np.flatnonzero(np.abs(out[:, col]) > 1e-14)
        if nonzero.size and out[nonzero[0], col] < 0:
            out[:, col] = -out[:, col]
    return out


def sym_eig(
    a: np.ndarray,
    max_sweeps: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> SymmetricEigen:
    """
    Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Args:
        a: p x p symmetric matrix
        max_sweeps: sweep budget (defaults to settings.JACOBI_MAX_SWEEPS)
        tolerance: relative off-diagonal threshold (defaults to settings.JACOBI_TOLERANCE)

    Returns:
        SymmetricEigen with descending eigenvalues and sign-normalized eigenvectors
    """
    max_sweeps = max_sweeps if max_sweeps is not None else settings.JACOBI_MAX_SWEEPS
    tolerance = tolerance if tolerance is not None else settings.JACOBI_TOLERANCE

    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    asymmetry = float(np.max(np.abs(a - a.T)))
    if asymmetry > SYMMETRY_TOLERANCE:
        raise NotSymmetricError(asymmetry)
    a = 0.5 * (a + a.T)

    p = a.shape[0]
    v = np.eye(p)
    scale = float(np.linalg.norm(a))
    threshold = tolerance * scale if scale > 0 else tolerance

    sweeps = 0
    off = _off_norm(a)
    while off > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(sweeps, off)
        for i in range(p - 1):
            for j in range(i + 1, p):
                if a[i, j] != 0.0:
                    _rotate(a, v, i, j)
        sweeps += 1
        off = _off_norm(a)

    logger.debug(f"Jacobi converged after {sweeps} sweeps (p={p}, off={off:.2e})")
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return SymmetricEigen(eigenvalues=values[order], eigenvectors=_fix_signs(v[:, order]))


def center_standardize(x: np.ndarray) -> np.ndarray:
    """Center each column and scale it to unit sum of squares, so X'X is the correlation matrix"""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] < 2:
        raise ValueError("need at least two observations to standardize")
    centered = x - x.mean(axis=0)
    norms = np.sqrt(np.sum(centered**2, axis=0))
    scale = np.maximum(np.abs(x).max(axis=0), 1.0)
    for index, norm in enumerate(norms):
        if norm <= 1e-12 * scale[index]:
            raise DegenerateColumnError(index)
    return centered / norms


def condition_number(eig: SymmetricEigen) -> float:
    """lambda_max / lambda_min"""
    if eig.lambda_min <= 0:
        raise SingularMatrixError(f"smallest eigenvalue {eig.lambda_min:.3e} is not positive")
    return eig.lambda_max / eig.lambda_min


def solve_spd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b for symmetric positive definite A by Cholesky"""
    try:
        factor = sla.cho_factor(np.asarray(a, dtype=float), lower=True)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(f"matrix is not positive definite: {e}") from e
    return sla.cho_solve(factor, np.asarray(b, dtype=float))
