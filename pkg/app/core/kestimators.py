"""
Ridge-parameter estimators.

Every estimator maps a CanonicalModel to a scalar k. The prior rules (HK,
HKB, LW, AD, KM8, KM12) use their closed forms; the Y-family aggregates
the per-coordinate quantities k_Y,j = sqrt(sigma2_hat / (lambda_j alpha_j^2))
or their reciprocals into one scalar.
"""
import logging
from enum import Enum
from typing import Callable, Dict

import numpy as np

from app.core.errors import DegenerateCoefficientError
from app.models.regression import CanonicalModel, KEstimate

logger = logging.getLogger(__name__)


class EstimatorId(str, Enum):
    Y1 = "Y1"
    Y2 = "Y2"
    Y3 = "Y3"
    Y4 = "Y4"
    Y5 = "Y5"
    Y6 = "Y6"
    Y7 = "Y7"
    Y8 = "Y8"
    Y9 = "Y9"
    LW = "LW"
    HK = "HK"
    HKB = "HKB"
    AD = "AD"
    KM8 = "KM8"
    KM12 = "KM12"
    OLS = "OLS"

    @classmethod
    def parse(cls, text: str) -> "EstimatorId":
        try:
            return cls(text.strip().upper())
        except ValueError:
            valid = ", ".join(member.value for member in cls)
            raise ValueError(f"Unknown estimator '{text}'. Valid names: {valid}") from None


Y_FAMILY = tuple(EstimatorId(f"Y{i}") for i in range(1, 10))


class IndividualFamily(str, Enum):
    """Per-coordinate parameter families for generalized ridge"""
    HK = "HK"
    LW = "LW"
    AD = "AD"
    Y = "Y"


def _require_variance(name: str, model: CanonicalModel) -> None:
    if not model.sigma2_hat > 0:
        raise DegenerateCoefficientError(name, None, "sigma2_hat is zero")


def _require_nonzero(name: str, model: CanonicalModel) -> np.ndarray:
    alpha2 = model.alpha_ols**2
    zero = np.flatnonzero(alpha2 == 0)
    if zero.size:
        raise DegenerateCoefficientError(name, int(zero[0]))
    return alpha2


def k_y_vector(model: CanonicalModel, name: str = "Y") -> np.ndarray:
    """k_Y,j = sqrt(sigma2_hat / (lambda_j alpha_j^2))"""
    _require_variance(name, model)
    alpha2 = _require_nonzero(name, model)
    return np.sqrt(model.sigma2_hat / (model.lambdas * alpha2))


def _inverse_k_y(model: CanonicalModel, name: str) -> np.ndarray:
    """1 / k_Y,j computed directly, defined for zero coefficients"""
    _require_variance(name, model)
    return np.sqrt(model.lambdas * model.alpha_ols**2 / model.sigma2_hat)


def _km_terms(model: CanonicalModel, name: str) -> np.ndarray:
    _require_variance(name, model)
    lam_max = model.eig.lambda_max
    ratio = lam_max * model.sigma2_hat / (
        (model.n - model.p) * model.sigma2_hat + lam_max * model.alpha_ols**2
    )
    return 1.0 / np.sqrt(ratio)


def _k_ols(model: CanonicalModel) -> float:
    return 0.0


def _k_hk(model: CanonicalModel) -> float:
    _require_variance("HK", model)
    alpha2_max = float(np.max(model.alpha_ols**2))
    if alpha2_max == 0:
        raise DegenerateCoefficientError("HK", int(np.argmax(model.alpha_ols**2)))
    return model.sigma2_hat / alpha2_max


def _k_hkb(model: CanonicalModel) -> float:
    _require_variance("HKB", model)
    total = float(np.sum(model.alpha_ols**2))
    if total == 0:
        raise DegenerateCoefficientError("HKB", 0, "all coefficients are zero")
    return model.p * model.sigma2_hat / total


def _k_lw(model: CanonicalModel) -> float:
    _require_variance("LW", model)
    total = float(np.sum(model.lambdas * model.alpha_ols**2))
    if total == 0:
        raise DegenerateCoefficientError("LW", 0, "all coefficients are zero")
    return model.p * model.sigma2_hat / total


def _k_ad(model: CanonicalModel) -> float:
    _require_variance("AD", model)
    total = float(np.sum(model.alpha_ols**2))
    if total == 0:
        raise DegenerateCoefficientError("AD", 0, "all coefficients are zero")
    return 2.0 * model.p * model.sigma2_hat / (model.eig.lambda_max * total)


def _k_km8(model: CanonicalModel) -> float:
    return float(np.max(_km_terms(model, "KM8")))


def _k_km12(model: CanonicalModel) -> float:
    return float(np.median(_km_terms(model, "KM12")))


def _k_y1(model: CanonicalModel) -> float:
    return float(np.mean(k_y_vector(model, "Y1")))


def _k_y2(model: CanonicalModel) -> float:
    # log-space mean keeps the p-th root of the product in range
    return float(np.exp(np.mean(np.log(k_y_vector(model, "Y2")))))


def _k_y3(model: CanonicalModel) -> float:
    return float(np.median(k_y_vector(model, "Y3")))


def _k_y4(model: CanonicalModel) -> float:
    return float(np.max(k_y_vector(model, "Y4")))


def _k_y5(model: CanonicalModel) -> float:
    return float(np.median(_inverse_k_y(model, "Y5")))


def _k_y6(model: CanonicalModel) -> float:
    return float(np.max(_inverse_k_y(model, "Y6")))


def _k_y7(model: CanonicalModel) -> float:
    return float(np.mean(_inverse_k_y(model, "Y7")))


def _k_y8(model: CanonicalModel) -> float:
    total = float(np.sum(_inverse_k_y(model, "Y8")))
    if total == 0:
        raise DegenerateCoefficientError("Y8", 0, "all coefficients are zero")
    return model.p / total


def _k_y9(model: CanonicalModel) -> float:
    return model.p / float(np.sum(k_y_vector(model, "Y9")))


ESTIMATORS: Dict[EstimatorId, Callable[[CanonicalModel], float]] = {
    EstimatorId.Y1: _k_y1,
    EstimatorId.Y2: _k_y2,
    EstimatorId.Y3: _k_y3,
    EstimatorId.Y4: _k_y4,
    EstimatorId.Y5: _k_y5,
    EstimatorId.Y6: _k_y6,
    EstimatorId.Y7: _k_y7,
    EstimatorId.Y8: _k_y8,
    EstimatorId.Y9: _k_y9,
    EstimatorId.LW: _k_lw,
    EstimatorId.HK: _k_hk,
    EstimatorId.HKB: _k_hkb,
    EstimatorId.AD: _k_ad,
    EstimatorId.KM8: _k_km8,
    EstimatorId.KM12: _k_km12,
    EstimatorId.OLS: _k_ols,
}


def estimate(estimator: EstimatorId, model: CanonicalModel) -> KEstimate:
    """Evaluate one estimator on a canonical model"""
    estimator = EstimatorId(estimator)
    k = ESTIMATORS[estimator](model)
    if not np.isfinite(k):
        raise DegenerateCoefficientError(estimator.value, None, f"non-finite k ({k})")
    return KEstimate(estimator_name=estimator.value, k=k)


def estimate_all(model: CanonicalModel) -> Dict[EstimatorId, KEstimate]:
    """Evaluate every registered estimator, in table order"""
    return {estimator: estimate(estimator, model) for estimator in ESTIMATORS}


def individual_k(family: IndividualFamily, model: CanonicalModel) -> np.ndarray:
    """
    Per-coordinate ridge parameters for generalized ridge.

    HK: sigma2 / alpha_j^2, LW: sigma2 / (lambda_j alpha_j^2),
    AD: 2 sigma2 / (lambda_max alpha_j^2), Y: k_Y,j
    """
    family = IndividualFamily(family)
    name = f"{family.value}(j)"
    if family is IndividualFamily.Y:
        return k_y_vector(model, name)
    _require_variance(name, model)
    alpha2 = _require_nonzero(name, model)
    if family is IndividualFamily.HK:
        return model.sigma2_hat / alpha2
    if family is IndividualFamily.LW:
        return model.sigma2_hat / (model.lambdas * alpha2)
    return 2.0 * model.sigma2_hat / (model.eig.lambda_max * alpha2)
