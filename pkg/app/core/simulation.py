"""
Monte Carlo engine for comparing ridge-parameter estimators.

Per cell the design X is drawn once from x_ij = sqrt(1 - rho^2) z_ij + rho z_i,s
where the shared column s is p+1 by default, or p when ``shared_column="last"``;
the true beta is the unit eigenvector of the largest eigenvalue of X'X, and
only the errors are redrawn in each replication. AMSE is the replication
mean of ||alpha_hat - alpha||^2 per estimator.

Substream map: X comes from stream ``blake2b(design_key, "x")`` and
replication r from ``blake2b(design_key, r)``, both under the cell seed.
Results therefore do not depend on the order in which cells or replications
run, and cells that differ only in sigma^2 see the same X and the same
standard-normal errors.
"""
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from itertools import product
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import yaml
from tqdm import tqdm

from app.config import settings
from app.core.errors import DataError, DegenerateCoefficientError, GridRunError
from app.core.kestimators import ESTIMATORS, EstimatorId, estimate
from app.core.linalg import sym_eig
from app.core.regression import canonicalize, ridge_fit
from app.core.stochastics import RandomStream, derive_stream_id, standard_normal
from app.models.regression import Dataset
from app.models.simulation import CellResult, SimulationCell, SimulationTruth

logger = logging.getLogger(__name__)

DEFAULT_RHOS = (0.90, 0.95, 0.99)
DEFAULT_NS = (50, 100, 200)
DEFAULT_PS = (4, 8)
DEFAULT_SIGMA2S = (1.0, 5.0)


def design_stream(cell: SimulationCell) -> RandomStream:
    return RandomStream(seed=cell.seed, stream_id=derive_stream_id(cell.design_key(), "x"))


def replication_stream(cell: SimulationCell, replication: int) -> RandomStream:
    return RandomStream(seed=cell.seed, stream_id=derive_stream_id(cell.design_key(), replication))


def generate_x(cell: SimulationCell, stream: RandomStream) -> np.ndarray:
    """
    Collinear design from n x (p+1) standard normals.

    With the extra shared column every pair of regressors has population
    correlation rho^2. With ``shared_column="last"`` the p-th column doubles
    as the shared one, which inflates its variance and its covariances.
    """
    z = standard_normal(stream, cell.n * (cell.p + 1)).reshape(cell.n, cell.p + 1)
    shared = cell.p if cell.shared_column == "extra" else cell.p - 1
    return math.sqrt(1.0 - cell.rho**2) * z[:, : cell.p] + cell.rho * z[:, [shared]]


def make_truth(x: np.ndarray) -> SimulationTruth:
    """beta is the unit eigenvector of the largest eigenvalue of X'X; alpha = D'beta"""
    x = np.asarray(x, dtype=float)
    eig = sym_eig(x.T @ x)
    beta = eig.eigenvectors[:, 0].copy()
    beta /= np.linalg.norm(beta)
    return SimulationTruth(x=x, beta=beta, alpha=eig.eigenvectors.T @ beta, eig=eig)


def run_cell(cell: SimulationCell) -> CellResult:
    """Run every estimator over all replications of one cell"""
    logger.info(f"Running cell {cell.label()} with {cell.replications} replications")
    truth = make_truth(generate_x(cell, design_stream(cell)))
    signal = truth.x @ truth.beta
    sigma = math.sqrt(cell.sigma2)
    labels = [f"x{j + 1}" for j in range(cell.p)]

    errors: Dict[EstimatorId, List[float]] = {estimator: [] for estimator in ESTIMATORS}
    degenerate: Dict[EstimatorId, int] = {estimator: 0 for estimator in ESTIMATORS}

    for replication in range(cell.replications):
        noise = sigma * standard_normal(replication_stream(cell, replication), cell.n)
        dataset = Dataset(y=signal + noise, x=truth.x, column_labels=labels)
        model = canonicalize(dataset, eig=truth.eig)
        ols_error = float(np.sum((model.alpha_ols - truth.alpha) ** 2))

        for estimator in ESTIMATORS:
            try:
                k = estimate(estimator, model).k
            except DegenerateCoefficientError as e:
                logger.warning(f"Replication {replication} of {cell.label()}: {e}; using OLS")
                degenerate[estimator] += 1
                errors[estimator].append(ols_error)
                continue
            alpha_r = ridge_fit(model, k)
            errors[estimator].append(float(np.sum((alpha_r - truth.alpha) ** 2)))

    # fsum is exact, so the mean does not depend on accumulation order
    amse = {
        estimator.value: math.fsum(values) / cell.replications
        for estimator, values in errors.items()
    }
    logger.info(f"Finished cell {cell.label()}: OLS AMSE {amse[EstimatorId.OLS.value]:.4f}")
    return CellResult(
        cell=cell,
        amse=amse,
        degenerate_count={estimator.value: count for estimator, count in degenerate.items()},
    )


def run_grid(
    cells: Sequence[SimulationCell],
    workers: Optional[int] = None,
    progress: bool = False,
) -> List[CellResult]:
    """
    Run a list of cells, optionally across worker processes.

    Results come back in the order of ``cells`` whatever the worker count.

    Raises:
        GridRunError: if any cell fails; completed results are attached
    """
    cells = list(cells)
    if not cells:
        raise ValueError("simulation grid is empty")
    workers = workers if workers is not None else settings.WORKERS

    results: List[Optional[CellResult]] = [None] * len(cells)
    failures: List[Tuple[SimulationCell, BaseException]] = []
    bar = tqdm(total=len(cells), desc="cells", disable=None if progress else True)

    if workers <= 1:
        for index, cell in enumerate(cells):
            try:
                results[index] = run_cell(cell)
            except Exception as e:
                logger.error(f"Cell {cell.label()} failed: {e}")
                failures.append((cell, e))
            bar.update(1)
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(run_cell, cell): index for index, cell in enumerate(cells)}
            for future in as_completed(futures):
                index = futures[future]
                try:
                    results[index] = future.result()
                except Exception as e:
                    logger.error(f"Cell {cells[index].label()} failed: {e}")
                    failures.append((cells[index], e))
                bar.update(1)
    bar.close()

    completed = [result for result in results if result is not None]
    if failures:
        raise GridRunError(completed, failures)
    return completed


def default_grid(
    replications: Optional[int] = None,
    seed: Optional[int] = None,
    shared_column: str = "extra",
) -> List[SimulationCell]:
    """The 36-cell default design: p, sigma2, rho, n in table order"""
    replications = replications if replications is not None else settings.DEFAULT_REPLICATIONS
    seed = seed if seed is not None else settings.DEFAULT_SEED
    return [
        SimulationCell(
            rho=rho, n=n, p=p, sigma2=sigma2, replications=replications, seed=seed, shared_column=shared_column
        )
        for p, sigma2, rho, n in product(DEFAULT_PS, DEFAULT_SIGMA2S, DEFAULT_RHOS, DEFAULT_NS)
    ]


def _as_list(value) -> list:
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _grid_value(row: Dict, key: str, default):
    """Row value, or ``default`` when the key is absent or the CSV cell is blank"""
    value = row.get(key)
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return default
    return value


def load_grid(
    path: Path,
    replications: Optional[int] = None,
    seed: Optional[int] = None,
) -> List[SimulationCell]:
    """
    Read a grid configuration.

    ``.yaml``/``.yml``: keys rho, n, p, sigma2 (scalars or lists, expanded
    factorially) plus optional replications, seed and shared_column. ``.csv``: one row per
    cell with columns rho, n, p, sigma2 and optional replications, seed,
    shared_column.
    ``.json``: a run manifest written by ``simulate``.
    Explicit ``replications``/``seed`` arguments override file values.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"Grid configuration not found: {path}")
    suffix = path.suffix.lower()
    default_reps = settings.DEFAULT_REPLICATIONS
    default_seed = settings.DEFAULT_SEED
    default_shared = "extra"

    if suffix in (".yaml", ".yml"):
        with open(path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}
        missing = [key for key in ("rho", "n", "p", "sigma2") if key not in config]
        if missing:
            raise DataError(f"Grid configuration {path} is missing keys: {', '.join(missing)}")
        rows = [
            {"rho": rho, "n": n, "p": p, "sigma2": sigma2}
            for p, sigma2, rho, n in product(
                _as_list(config["p"]),
                _as_list(config["sigma2"]),
                _as_list(config["rho"]),
                _as_list(config["n"]),
            )
        ]
        default_reps = config.get("replications", default_reps)
        default_seed = config.get("seed", default_seed)
        default_shared = config.get("shared_column", default_shared)
    elif suffix == ".csv":
        frame = pd.read_csv(path)
        missing = [key for key in ("rho", "n", "p", "sigma2") if key not in frame.columns]
        if missing:
            raise DataError(f"Grid configuration {path} is missing columns: {', '.join(missing)}")
        rows = frame.to_dict(orient="records")
    elif suffix == ".json":
        with open(path, "r", encoding="utf-8") as f:
            manifest = json.load(f)
        rows = manifest.get("config", {}).get("cells", [])
        if not rows:
            raise DataError(f"Manifest {path} lists no cells")
    else:
        raise DataError(f"Unsupported grid configuration format: {path.suffix}")

    cells = []
    for number, row in enumerate(rows, start=1):
        try:
            values = {key: _grid_value(row, key, None) for key in ("rho", "n", "p", "sigma2")}
            if any(value is None for value in values.values()):
                blank = [key for key, value in values.items() if value is None]
                raise ValueError(f"blank {', '.join(blank)}")
            row_reps = replications if replications is not None else _grid_value(row, "replications", default_reps)
            row_seed = seed if seed is not None else _grid_value(row, "seed", default_seed)
            cell_values = {
                "rho": float(values["rho"]),
                "n": int(values["n"]),
                "p": int(values["p"]),
                "sigma2": float(values["sigma2"]),
                "replications": int(row_reps),
                "seed": int(row_seed),
                "shared_column": str(_grid_value(row, "shared_column", default_shared)),
            }
        except (TypeError, ValueError) as e:
            raise DataError(f"Grid configuration {path}, row {number}: {e}") from e
        cells.append(SimulationCell(**cell_values))
    logger.info(f"Loaded {len(cells)} cells from {path}")
    return cells


def best_estimators(results: Iterable[CellResult]) -> Dict[str, str]:
    """Lowest-AMSE estimator per cell, keyed by cell label"""
    return {
        result.cell.label(): min(result.amse, key=lambda name: (result.amse[name], name))
        for result in results
    }
