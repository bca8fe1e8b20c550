import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from app.config import settings
from app.core.kestimators import ESTIMATORS, Y_FAMILY
from app.core.simulation import best_estimators
from app.models.report import FitReport, RealDataReport, RunManifest
from app.models.simulation import CellResult, SimulationCell

logger = logging.getLogger(__name__)

TABLE_ORDER = [estimator.value for estimator in ESTIMATORS]
REAL_DATA_ORDER = [estimator.value for estimator in Y_FAMILY] + [
    estimator.value for estimator in ESTIMATORS if estimator not in Y_FAMILY
]

# (file stem, fixed factors) for the figure slices
FIGURE_SLICES: Dict[str, Dict[str, float]] = {
    "figure_sample_size": {"p": 4, "sigma2": 1.0},
    "figure_error_variance": {"p": 8, "rho": 0.99, "n": 100},
    "figure_correlation": {"p": 8, "sigma2": 5.0, "n": 50},
}


def column_label(cell: SimulationCell, qualified: bool = False) -> str:
    """``rho=0.90_n=50``; ``qualified`` appends what separates cells sharing rho and n"""
    label = f"rho={cell.rho:.2f}_n={cell.n}"
    if qualified:
        label += f"_seed={cell.seed}_reps={cell.replications}"
        if cell.shared_column != "extra":
            label += f"_{cell.shared_column}"
    return label


def long_frame(results: Sequence[CellResult]) -> pd.DataFrame:
    """One row per (cell, estimator), full precision"""
    rows = []
    for result in results:
        cell = result.cell
        for name in TABLE_ORDER:
            rows.append({
                "rho": cell.rho,
                "n": cell.n,
                "p": cell.p,
                "sigma2": cell.sigma2,
                "replications": cell.replications,
                "seed": cell.seed,
                "shared_column": cell.shared_column,
                "estimator": name,
                "amse": result.amse[name],
                "degenerate_count": result.degenerate_count.get(name, 0),
            })
    return pd.DataFrame(rows)


def wide_tables(results: Sequence[CellResult]) -> Dict[Tuple[int, float], pd.DataFrame]:
    """
    AMSE tables, one per (p, sigma2), with estimators as rows
    and (rho, n) as columns, rounded for display.

    Cells that share (rho, n) within a table get qualified column labels,
    so no cell overwrites another.
    """
    decimals = settings.TABLE_DECIMALS
    grouped: Dict[Tuple[int, float], List[CellResult]] = {}
    for result in results:
        grouped.setdefault((result.cell.p, result.cell.sigma2), []).append(result)

    frames = {}
    for table_key, members in grouped.items():
        qualified = len({(r.cell.seed, r.cell.replications, r.cell.shared_column) for r in members}) > 1
        ordered = sorted(
            members,
            key=lambda r: (r.cell.rho, r.cell.n, r.cell.seed, r.cell.replications, r.cell.shared_column),
        )
        columns = {column_label(r.cell, qualified): r.amse for r in ordered}
        frame = pd.DataFrame(columns).reindex(TABLE_ORDER)
        frame.index.name = "estimator"
        frames[table_key] = frame.round(decimals)
    return dict(sorted(frames.items()))


def table_stem(p: int, sigma2: float) -> str:
    return f"table_p{p}_sigma2_{sigma2:g}"


def markdown_table(
    frame: pd.DataFrame,
    number_format: str,
    column_formats: Optional[Dict[str, str]] = None,
) -> str:
    """Pipe table with the index as first column; floats use ``column_formats`` or ``number_format``"""
    column_formats = column_formats or {}
    header = [str(frame.index.name or "")] + [str(column) for column in frame.columns]
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join(["---"] * len(header)) + "|"]
    for index, row in frame.iterrows():
        cells = [str(index)]
        for column, value in row.items():
            spec = column_formats.get(column, number_format)
            cells.append(format(value, spec) if isinstance(value, float) else str(value))
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines)


def write_simulation_outputs(
    results: Sequence[CellResult],
    output_dir: Path,
    fmt: str = "csv",
) -> Dict[str, str]:
    """Write wide tables, the long-format CSV, figure slices and per-cell winners"""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    decimals = settings.TABLE_DECIMALS
    paths: Dict[str, str] = {}

    for (p, sigma2), frame in wide_tables(results).items():
        stem = table_stem(p, sigma2)
        csv_path = output_dir / f"{stem}.csv"
        frame.to_csv(csv_path, float_format=f"%.{decimals}f")
        paths[stem] = str(csv_path)
        if fmt == "markdown":
            md_path = output_dir / f"{stem}.md"
            with open(md_path, "w", encoding="utf-8") as f:
                f.write(f"# Average MSEs when p = {p}, sigma^2 = {sigma2:g}\n\n")
                f.write(markdown_table(frame, f".{decimals}f") + "\n")
            paths[f"{stem}_markdown"] = str(md_path)

    long = long_frame(results)
    long_path = output_dir / "amse_long.csv"
    long.to_csv(long_path, index=False)
    paths["long"] = str(long_path)

    for stem, fixed in FIGURE_SLICES.items():
        mask = pd.Series(True, index=long.index)
        for column, value in fixed.items():
            mask &= long[column] == value
        if mask.any():
            slice_path = output_dir / f"{stem}.csv"
            long[mask].to_csv(slice_path, index=False)
            paths[stem] = str(slice_path)

    best = pd.DataFrame(
        [{"cell": label, "best_estimator": name} for label, name in best_estimators(results).items()]
    )
    best_path = output_dir / "best_estimators.csv"
    best.to_csv(best_path, index=False)
    paths["best"] = str(best_path)

    logger.info(f"Simulation outputs written to {output_dir}")
    return paths


def real_data_frame(report: RealDataReport) -> pd.DataFrame:
    frame = pd.DataFrame(
        {"k": [report.k[name] for name in REAL_DATA_ORDER], "mse": [report.mse[name] for name in REAL_DATA_ORDER]},
        index=pd.Index(REAL_DATA_ORDER, name="estimator"),
    )
    return frame


def real_data_banner(report: RealDataReport) -> List[str]:
    eigenvalues = ", ".join(f"{value:.4f}" for value in report.eigenvalues)
    return [
        f"Dataset: {report.dataset_id} (n = {report.n}, p = {report.p})",
        f"Eigenvalues of X'X: {eigenvalues}",
        f"Condition number: {report.condition_number:.4f}",
        f"sigma2_hat: {report.sigma2_hat:.6g}",
    ]


def write_real_data_outputs(report: RealDataReport, output_dir: Path, fmt: str = "csv") -> Dict[str, str]:
    """CSV with k and estimated MSE per estimator, plus a markdown table with the diagnostics banner"""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    decimals = settings.TABLE_DECIMALS
    stem = f"realdata_{Path(report.dataset_id).stem}"
    frame = real_data_frame(report)

    csv_path = output_dir / f"{stem}.csv"
    frame.to_csv(csv_path)
    paths = {"csv": str(csv_path)}

    if fmt == "markdown":
        md_path = output_dir / f"{stem}.md"
        with open(md_path, "w", encoding="utf-8") as f:
            f.write("# Estimated theoretical MSE values\n\n")
            for line in real_data_banner(report):
                f.write(f"- {line}\n")
            f.write("\n")
            mse_row = frame[["mse"]].T.rename(index={"mse": "MSE"}).rename_axis("")
            f.write(markdown_table(mse_row, f".{decimals}f") + "\n")
        paths["markdown"] = str(md_path)
    return paths


def render_real_data(report: RealDataReport, fmt: str = "csv") -> str:
    """Text for the terminal: banner plus one MSE per estimator"""
    decimals = settings.TABLE_DECIMALS
    lines = real_data_banner(report) + [""]
    frame = real_data_frame(report)
    if fmt == "markdown":
        lines.append(markdown_table(frame.rename(columns={"mse": "MSE"}), f".{decimals}f", {"k": f".{decimals}g"}))
    else:
        lines.append("estimator,k,mse")
        for name, row in frame.iterrows():
            lines.append(f"{name},{row['k']:.6g},{row['mse']:.{decimals}f}")
    return "\n".join(lines)


def fit_frame(report: FitReport) -> pd.DataFrame:
    """One row per estimator: k, estimated MSE, canonical alpha_R and original beta_R"""
    fits = list(report.fits) + ([report.generalized] if report.generalized else [])
    rows = []
    for fit in fits:
        row = {"estimator": fit.estimator, "k": fit.k, "mse": fit.mse}
        row.update({f"alpha_{j + 1}": value for j, value in enumerate(fit.alpha)})
        row.update({f"beta_{label}": value for label, value in zip(report.column_labels, fit.beta)})
        rows.append(row)
    return pd.DataFrame(rows)


def render_fit(report: FitReport, fmt: str = "csv") -> str:
    decimals = settings.TABLE_DECIMALS
    eigenvalues = ", ".join(f"{value:.4f}" for value in report.eigenvalues)
    lines = [
        f"Dataset: {report.source} (n = {report.n}, p = {report.p}, "
        f"{'standardized' if report.standardized else 'raw'})",
        f"sigma2_hat: {report.sigma2_hat:.6g}",
        f"Eigenvalues of X'X: {eigenvalues}",
        f"Condition number: {report.condition_number:.4f}",
        "",
    ]
    frame = fit_frame(report)
    if fmt == "markdown":
        lines.append(markdown_table(frame.set_index("estimator"), ".6g", {"mse": f".{decimals}f"}))
    else:
        lines.append(frame.to_csv(index=False, float_format="%.6g").rstrip("\n"))
    return "\n".join(lines)


def write_manifest(manifest: RunManifest, output_dir: Path, name: Optional[str] = None) -> str:
    """Stamp the finish time and write the manifest next to the results"""
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    manifest.finished_at = datetime.now(timezone.utc)
    path = output_dir / (name or f"manifest_{manifest.command}.json")
    with open(path, "w", encoding="utf-8") as f:
        f.write(manifest.model_dump_json(indent=2))
    return str(path.absolute())
