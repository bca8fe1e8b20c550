"""
Real-data pipeline: load, standardize, canonicalize and tabulate the
estimated theoretical MSE of every estimator.

Both X and Y are centered and scaled to unit length, so X'X is the
correlation matrix. Centering absorbs an intercept, which costs one residual
degree of freedom (sigma2_hat = RSS / (n - p - 1)).
"""
import logging
import re
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from app.config import settings
from app.core.errors import DataParseError, DatasetNotFoundError, DegenerateColumnError, UnknownDatasetError
from app.core.kestimators import EstimatorId, IndividualFamily, estimate, estimate_all, individual_k
from app.core.linalg import center_standardize, condition_number
from app.core.regression import (
    canonicalize,
    generalized_ridge_fit,
    mse_general,
    mse_ols,
    mse_scalar,
    ridge_fit,
    to_original,
)
from app.models.regression import CanonicalModel, Dataset
from app.models.report import EstimatorFit, FitReport, NamedDataset, RealDataReport

logger = logging.getLogger(__name__)

BUNDLED_DATASETS: Dict[str, str] = {
    "gruber": "Gruber (1998): R&D expenditure as percent of GNP; US against France, "
              "West Germany, Japan and the Soviet Union",
    "cement": "Woods, Steinour and Starke (1932) / Hald (1952) Portland cement data, "
              "as used by Trenkler (1978): heat evolved against four clinker compounds",
}
BUNDLED_SHAPES: Dict[str, Tuple[int, int]] = {"gruber": (10, 4), "cement": (13, 4)}


def _read_csv(path: Path) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype=str, skipinitialspace=True, encoding="utf-8")
    except FileNotFoundError as e:
        raise DatasetNotFoundError(str(path)) from e
    except pd.errors.EmptyDataError as e:
        raise DataParseError("file is empty", line=1) from e
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise DataParseError(str(e), line=int(match.group(1)) if match else None) from e
    return frame


def _parse_numeric(frame: pd.DataFrame) -> pd.DataFrame:
    """Convert every column to float, reporting the first bad cell by line and column"""
    numeric = {}
    for column in frame.columns:
        values = pd.to_numeric(frame[column], errors="coerce")
        bad = values.isna()
        if bad.any():
            row = int(np.flatnonzero(bad.to_numpy())[0])
            raw = frame[column].iloc[row]
            reason = "missing value" if pd.isna(raw) else f"non-numeric value '{raw}'"
            # header is line 1
            raise DataParseError(reason, line=row + 2, column=str(column))
        numeric[column] = values.astype(float)
    return pd.DataFrame(numeric)


def load_dataset(source: Union[str, Path]) -> NamedDataset:
    """
    Load a bundled dataset by id or a user CSV by path.

    CSV layout: header row, column 1 the dependent variable, columns 2..p+1 the
    regressors, UTF-8, '.' decimal separator.
    """
    name = str(source)
    key = name.strip().lower()
    if key in BUNDLED_DATASETS:
        path = settings.DATA_DIR / f"{key}.csv"
        dataset_id, note = key, BUNDLED_DATASETS[key]
    else:
        path = Path(name)
        if path.suffix.lower() != ".csv" and not path.exists():
            raise UnknownDatasetError(name, BUNDLED_DATASETS)
        if not path.exists():
            raise DatasetNotFoundError(str(path))
        dataset_id, note = str(path), f"user file {path.name}"

    logger.info(f"Loading dataset {dataset_id} from {path}")
    frame = _parse_numeric(_read_csv(path))
    if frame.shape[1] < 2:
        raise DataParseError(
            f"expected a dependent variable and at least one regressor, found {frame.shape[1]} column(s)",
            line=1,
        )

    labels = [str(column) for column in frame.columns[1:]]
    try:
        dataset = Dataset(
            y=frame.iloc[:, 0].to_numpy(),
            x=frame.iloc[:, 1:].to_numpy(),
            column_labels=labels,
        )
    except ValueError as e:
        raise DataParseError(f"invalid dataset: {e}") from e

    if dataset_id in BUNDLED_SHAPES and (dataset.n, dataset.p) != BUNDLED_SHAPES[dataset_id]:
        raise DataParseError(
            f"bundled dataset {dataset_id} has shape {(dataset.n, dataset.p)}, "
            f"expected {BUNDLED_SHAPES[dataset_id]}"
        )
    return NamedDataset(id=dataset_id, dataset=dataset, source_note=note)


def standardize(dataset: Dataset) -> Dataset:
    """Center and unit-scale X and Y; the result is flagged as centered"""
    x = center_standardize(dataset.x)
    try:
        y = center_standardize(dataset.y)[:, 0]
    except DegenerateColumnError as e:
        raise DegenerateColumnError(0, "dependent variable") from e
    return Dataset(y=y, x=x, column_labels=dataset.column_labels, centered=True)


def prepare(named: NamedDataset) -> CanonicalModel:
    return canonicalize(standardize(named.dataset))


def evaluate_real(named: NamedDataset) -> Dict[EstimatorId, float]:
    """Estimated theoretical MSE per estimator, (sigma2_hat, alpha_hat) in place of (sigma^2, alpha)"""
    return _evaluate(prepare(named))[1]


def _evaluate(model: CanonicalModel) -> Tuple[Dict[EstimatorId, float], Dict[EstimatorId, float]]:
    ks = {estimator: estimate.k for estimator, estimate in estimate_all(model).items()}
    mse = {}
    for estimator, k in ks.items():
        if estimator is EstimatorId.OLS:
            mse[estimator] = mse_ols(model.lambdas, model.sigma2_hat)
        else:
            mse[estimator] = mse_scalar(k, model.lambdas, model.alpha_ols, model.sigma2_hat)
    return ks, mse


def real_data_report(named: NamedDataset) -> RealDataReport:
    """Diagnostics and MSE table for one dataset"""
    model = prepare(named)
    ks, mse = _evaluate(model)
    kappa = condition_number(model.eig)
    logger.info(
        f"{named.id}: eigenvalues {np.round(model.lambdas, 4).tolist()}, condition number {kappa:.4f}"
    )
    return RealDataReport(
        dataset_id=named.id,
        n=model.n,
        p=model.p,
        eigenvalues=model.lambdas.tolist(),
        condition_number=kappa,
        sigma2_hat=model.sigma2_hat,
        k={estimator.value: value for estimator, value in ks.items()},
        mse={estimator.value: value for estimator, value in mse.items()},
    )


def fit_dataset(
    named: NamedDataset,
    estimators: Sequence[EstimatorId],
    standardized: bool = True,
    generalized: Optional[IndividualFamily] = None,
) -> FitReport:
    """
    Fit ridge regressions for the chosen estimators.

    With ``standardized`` the data go through the same centering and scaling
    as the real-data tables; otherwise X and Y are used as given (no
    intercept, n - p degrees of freedom).
    """
    model = prepare(named) if standardized else canonicalize(named.dataset)

    fits = []
    for estimator in estimators:
        k = estimate(estimator, model).k
        alpha = ridge_fit(model, k)
        if estimator is EstimatorId.OLS:
            mse = mse_ols(model.lambdas, model.sigma2_hat)
        else:
            mse = mse_scalar(k, model.lambdas, model.alpha_ols, model.sigma2_hat)
        fits.append(
            EstimatorFit(
                estimator=estimator.value,
                k=k,
                mse=mse,
                alpha=alpha.tolist(),
                beta=to_original(model, alpha).tolist(),
            )
        )
        logger.debug(f"{named.id} {estimator.value}: k={k:.6g}, mse={mse:.6g}")

    generalized_fit = None
    if generalized is not None:
        ks = individual_k(generalized, model)
        alpha = generalized_ridge_fit(model, ks)
        generalized_fit = EstimatorFit(
            estimator=f"{IndividualFamily(generalized).value}(j)",
            k=float(np.mean(ks)),
            mse=mse_general(ks, model.lambdas, model.alpha_ols, model.sigma2_hat),
            alpha=alpha.tolist(),
            beta=to_original(model, alpha).tolist(),
        )

    return FitReport(
        source=named.id,
        n=model.n,
        p=model.p,
        column_labels=named.dataset.column_labels,
        standardized=standardized,
        sigma2_hat=model.sigma2_hat,
        eigenvalues=model.lambdas.tolist(),
        condition_number=condition_number(model.eig),
        fits=fits,
        generalized=generalized_fit,
    )
