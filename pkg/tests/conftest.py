import numpy as np
import pytest

from app.core.application import load_dataset
from app.models.regression import CanonicalModel, Dataset, SymmetricEigen


def make_model(lambdas, alpha, sigma2=1.0, n=12):
    """Canonical model with an identity rotation and a placeholder Z"""
    lambdas = np.asarray(lambdas, dtype=float)
    p = lambdas.shape[0]
    return CanonicalModel(
        z=np.zeros((n, p)),
        eig=SymmetricEigen(eigenvalues=lambdas, eigenvectors=np.eye(p)),
        alpha_ols=np.asarray(alpha, dtype=float),
        sigma2_hat=sigma2,
        n=n,
        p=p,
        dof=n - p,
    )


def random_dataset(rng, n, p):
    x = rng.standard_normal((n, p))
    y = x @ rng.standard_normal(p) + rng.standard_normal(n)
    return Dataset(y=y, x=x, column_labels=[f"x{j + 1}" for j in range(p)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def unit_model():
    """sigma2 = 1, lambda = (4, 1), alpha = (0.5, 1): every k_Y,j equals 1"""
    return make_model([4.0, 1.0], [0.5, 1.0], sigma2=1.0, n=12)


@pytest.fixture(scope="session")
def cement():
    return load_dataset("cement")


@pytest.fixture(scope="session")
def gruber():
    return load_dataset("gruber")
