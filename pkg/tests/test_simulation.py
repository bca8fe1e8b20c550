import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.config import settings
from app.core import simulation
from app.core.errors import DataError, GridRunError
from app.core.kestimators import ESTIMATORS, Y_FAMILY
from app.core.regression import mse_ols
from app.core.simulation import (
    best_estimators,
    default_grid,
    design_stream,
    generate_x,
    load_grid,
    make_truth,
    run_cell,
    run_grid,
)
from app.core.stochastics import standard_normal
from app.models.simulation import CellResult, SimulationCell

ALL_NAMES = [estimator.value for estimator in ESTIMATORS]


def cell(**overrides) -> SimulationCell:
    values = {"rho": 0.9, "n": 50, "p": 4, "sigma2": 1.0, "replications": 20, "seed": 2024}
    values.update(overrides)
    return SimulationCell(**values)


def test_cell_validation():
    with pytest.raises(ValidationError):
        cell(n=4, p=4)
    with pytest.raises(ValidationError):
        cell(rho=1.0)
    with pytest.raises(ValidationError):
        cell(sigma2=0.0)
    with pytest.raises(ValidationError):
        cell(replications=0)


def test_design_key_ignores_sigma2():
    assert cell(sigma2=1.0).design_key() == cell(sigma2=5.0).design_key()
    assert cell(n=50).design_key() != cell(n=100).design_key()
    assert cell().design_key() != cell(shared_column="last").design_key()


def test_generate_x_without_correlation_is_the_raw_draw():
    c = cell(rho=0.0, n=20, p=3)
    z = standard_normal(design_stream(c), c.n * (c.p + 1)).reshape(c.n, c.p + 1)
    np.testing.assert_array_equal(generate_x(c, design_stream(c)), z[:, :3])


def test_generate_x_shared_last_column():
    c = cell(rho=0.5, n=20, p=3, shared_column="last")
    z = standard_normal(design_stream(c), c.n * (c.p + 1)).reshape(c.n, c.p + 1)
    x = generate_x(c, design_stream(c))
    np.testing.assert_allclose(x[:, 0], math.sqrt(0.75) * z[:, 0] + 0.5 * z[:, 2])
    np.testing.assert_allclose(x[:, 2], (math.sqrt(0.75) + 0.5) * z[:, 2])


def test_generate_x_correlation():
    c = cell(rho=0.99, n=10_000, p=4)
    x = generate_x(c, design_stream(c))
    corr = np.corrcoef(x, rowvar=False)
    off_diagonal = corr[~np.eye(4, dtype=bool)]
    assert np.all(np.abs(off_diagonal - 0.99**2) <= 0.02)


def test_generate_x_is_deterministic():
    c = cell()
    np.testing.assert_array_equal(generate_x(c, design_stream(c)), generate_x(c, design_stream(c)))


def test_make_truth_diagonal_design():
    truth = make_truth(np.array([[2.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    np.testing.assert_allclose(truth.beta, [1.0, 0.0])
    np.testing.assert_allclose(truth.alpha, [1.0, 0.0])


def test_make_truth_equicorrelated_design():
    # X'X = [[1, 0.5], [0.5, 1]]
    x = np.array([[1.0, 0.5], [0.0, math.sqrt(0.75)]])
    truth = make_truth(x)
    np.testing.assert_allclose(truth.beta, np.array([1.0, 1.0]) / math.sqrt(2), atol=1e-12)


def test_make_truth_is_leading_eigenvector():
    c = cell(p=8, n=100)
    truth = make_truth(generate_x(c, design_stream(c)))
    xtx = truth.x.T @ truth.x
    assert abs(truth.beta @ truth.beta - 1.0) <= 1e-12
    assert np.max(np.abs(xtx @ truth.beta - truth.eig.lambda_max * truth.beta)) <= 1e-8 * truth.eig.lambda_max
    assert truth.alpha[0] == pytest.approx(1.0)
    np.testing.assert_allclose(truth.alpha[1:], 0.0, atol=1e-12)


def test_run_cell_shape():
    result = run_cell(cell(replications=50))
    assert list(result.amse) == ALL_NAMES
    assert all(np.isfinite(value) and value >= 0 for value in result.amse.values())
    assert sum(result.degenerate_count.values()) == 0


def test_noise_free_limit():
    result = run_cell(cell(sigma2=1e-20, replications=1))
    for name in ["OLS", "HK", "HKB", "LW", "AD"]:
        assert result.amse[name] <= 1e-12


def test_run_cell_is_deterministic():
    assert run_cell(cell(replications=30)) == run_cell(cell(replications=30))


def test_error_variance_scales_ols_exactly():
    low = run_cell(cell(sigma2=1.0, replications=200))
    high = run_cell(cell(sigma2=5.0, replications=200))
    assert high.amse["OLS"] == pytest.approx(5.0 * low.amse["OLS"], rel=1e-9)
    for name in ALL_NAMES:
        assert high.amse[name] > low.amse[name]


def test_ols_amse_matches_formula():
    c = cell(p=4, n=50, rho=0.9, replications=2000)
    truth = make_truth(generate_x(c, design_stream(c)))
    lambdas = truth.eig.eigenvalues
    expected = mse_ols(lambdas, c.sigma2)
    # each replication's OLS error is a weighted chi-square with variance 2 sigma^4 sum 1/lambda^2
    standard_error = math.sqrt(2.0 * c.sigma2**2 * np.sum(1.0 / lambdas**2) / c.replications)
    assert abs(run_cell(c).amse["OLS"] - expected) <= 3 * standard_error


def test_run_grid_matches_run_cell():
    c = cell(replications=10)
    assert run_grid([c]) == [run_cell(c)]


def test_run_grid_is_identical_across_worker_counts():
    cells = [cell(rho=rho, n=n, replications=10) for rho in (0.9, 0.99) for n in (30, 60)]
    assert run_grid(cells, workers=1) == run_grid(cells, workers=2)


def test_run_grid_rejects_empty_grid():
    with pytest.raises(ValueError):
        run_grid([])


def test_run_grid_keeps_completed_cells(monkeypatch):
    good, bad = cell(n=30, replications=5), cell(n=40, replications=5)
    real_run_cell = simulation.run_cell

    def flaky(c):
        if c == bad:
            raise FloatingPointError("boom")
        return real_run_cell(c)

    monkeypatch.setattr(simulation, "run_cell", flaky)
    with pytest.raises(GridRunError) as excinfo:
        run_grid([good, bad], workers=1)
    assert [result.cell for result in excinfo.value.completed] == [good]
    assert excinfo.value.failures[0][0] == bad
    assert "n=40" in str(excinfo.value)


def test_default_grid():
    cells = default_grid(replications=100, seed=7)
    assert len(cells) == 36
    assert {(c.rho, c.n, c.p, c.sigma2) for c in cells} == {
        (rho, n, p, sigma2)
        for rho in (0.90, 0.95, 0.99) for n in (50, 100, 200) for p in (4, 8) for sigma2 in (1.0, 5.0)
    }
    assert all(c.replications == 100 and c.seed == 7 for c in cells)


def test_best_estimators():
    c = cell()
    amse = {name: 1.0 for name in ALL_NAMES}
    amse["Y8"] = 0.5
    result = CellResult(cell=c, amse=amse, degenerate_count={name: 0 for name in ALL_NAMES})
    assert best_estimators([result]) == {c.label(): "Y8"}


def test_cell_result_rejects_negative_amse():
    with pytest.raises(ValidationError):
        CellResult(cell=cell(), amse={"OLS": -1.0}, degenerate_count={"OLS": 0})


def test_load_grid_yaml(tmp_path):
    path = tmp_path / "grid.yaml"
    path.write_text("rho: [0.9, 0.99]\nn: 50\np: [4, 8]\nsigma2: 1.0\nreplications: 25\nseed: 11\n")
    cells = load_grid(path)
    assert len(cells) == 4
    assert {(c.rho, c.p) for c in cells} == {(0.9, 4), (0.99, 4), (0.9, 8), (0.99, 8)}
    assert all(c.replications == 25 and c.seed == 11 for c in cells)
    assert load_grid(path, replications=3, seed=1)[0].replications == 3


def test_load_grid_csv(tmp_path):
    path = tmp_path / "grid.csv"
    path.write_text("rho,n,p,sigma2,replications\n0.9,50,4,1,10\n0.95,100,8,5,20\n")
    cells = load_grid(path, seed=3)
    assert [(c.rho, c.n, c.p, c.sigma2, c.replications, c.seed) for c in cells] == [
        (0.9, 50, 4, 1.0, 10, 3),
        (0.95, 100, 8, 5.0, 20, 3),
    ]


def test_load_grid_manifest(tmp_path):
    original = [cell(n=30), cell(n=60, sigma2=5.0)]
    path = tmp_path / "manifest_simulate.json"
    path.write_text(json.dumps({"command": "simulate", "config": {"cells": [c.model_dump() for c in original]}}))
    assert load_grid(path) == original


def test_load_grid_errors(tmp_path):
    with pytest.raises(DataError):
        load_grid(tmp_path / "missing.yaml")
    incomplete = tmp_path / "grid.yaml"
    incomplete.write_text("rho: 0.9\nn: 50\n")
    with pytest.raises(DataError, match="p, sigma2"):
        load_grid(incomplete)
    unsupported = tmp_path / "grid.txt"
    unsupported.write_text("rho=0.9")
    with pytest.raises(DataError):
        load_grid(unsupported)


@pytest.mark.slow
def test_reference_cell_reproduction():
    ols = []
    for seed in range(10):
        result = run_cell(cell(rho=0.9, n=50, p=4, sigma2=1.0, replications=5000, seed=seed))
        ols.append(result.amse["OLS"])
        for estimator in Y_FAMILY:
            assert result.amse[estimator.value] <= result.amse["OLS"]
    assert 0.8 * 0.4191 <= np.mean(ols) <= 1.2 * 0.4191


def _agreement(by_cell, low, high, factor):
    """Per fixed combination: estimators whose AMSE at ``high`` is below that at ``low``"""
    counts = []
    for key, result in by_cell.items():
        if key[factor] != low:
            continue
        other = list(key)
        other[factor] = high
        upper = by_cell[tuple(other)]
        counts.append(
            (key, [name for name in ALL_NAMES if upper.amse[name] < result.amse[name]])
        )
    return counts


@pytest.mark.slow
def test_amse_trends_over_the_default_grid():
    results = run_grid(default_grid(replications=1000, seed=20240101))
    # key order: rho, n, p, sigma2
    by_cell = {(r.cell.rho, r.cell.n, r.cell.p, r.cell.sigma2): r for r in results}

    # larger samples lower the AMSE
    for key, improved in _agreement(by_cell, 50, 200, 1):
        assert "OLS" in improved
        assert len(improved) >= (14 if key[0] < 0.99 else 12), key

    # larger error variance raises it: lower sigma2 is "better"
    for key, improved in _agreement(by_cell, 5.0, 1.0, 3):
        assert "OLS" in improved
        assert len(improved) >= 14, key

    # stronger collinearity raises it
    for key, improved in _agreement(by_cell, 0.99, 0.90, 0):
        assert "OLS" in improved
        assert len(improved) >= 14, key


def test_load_grid_csv_blank_optional_cells_use_defaults(tmp_path):
    path = tmp_path / "grid.csv"
    path.write_text("rho,n,p,sigma2,replications,seed\n0.9,50,4,1,,5\n0.95,100,8,5,20,\n")
    first, second = load_grid(path)
    assert (first.replications, first.seed) == (settings.DEFAULT_REPLICATIONS, 5)
    assert (second.replications, second.seed) == (20, settings.DEFAULT_SEED)


def test_load_grid_csv_blank_required_cell(tmp_path):
    path = tmp_path / "grid.csv"
    path.write_text("rho,n,p,sigma2\n0.9,50,4,1\n0.95,,8,5\n")
    with pytest.raises(DataError, match="row 2: blank n"):
        load_grid(path)
