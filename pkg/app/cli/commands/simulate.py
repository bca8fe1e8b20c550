import logging
from itertools import product
from pathlib import Path
from typing import List, Optional, Tuple

import click

from app import __version__
from app.config import settings
from app.core.errors import GridRunError
from app.core.reporting import write_manifest, write_simulation_outputs
from app.core.simulation import default_grid, load_grid, run_grid
from app.models.report import RunManifest
from app.models.simulation import CellResult, SimulationCell

logger = logging.getLogger(__name__)


def _cells_from_flags(
    rho: Tuple[float, ...],
    n: Tuple[int, ...],
    p: Tuple[int, ...],
    sigma2: Tuple[float, ...],
    replications: int,
    seed: int,
    shared_column: str,
) -> List[SimulationCell]:
    missing = [name for name, values in (("--rho", rho), ("--n", n), ("--p", p), ("--sigma2", sigma2)) if not values]
    if missing:
        raise click.UsageError(f"a custom grid needs {', '.join(missing)} (or use --paper-grid / --config)")
    return [
        SimulationCell(
            rho=r, n=size, p=q, sigma2=s, replications=replications, seed=seed, shared_column=shared_column
        )
        for q, s, r, size in product(p, sigma2, rho, n)
    ]


@click.command("simulate")
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Grid file (.yaml, .csv) or a manifest JSON from an earlier run")
@click.option("--paper-grid", "use_paper_grid", is_flag=True, help="Run the 36-cell default design")
@click.option("--rho", type=float, multiple=True, help="Correlation parameter (repeatable)")
@click.option("--n", "n", type=int, multiple=True, help="Sample size (repeatable)")
@click.option("--p", "p", type=int, multiple=True, help="Number of regressors (repeatable)")
@click.option("--sigma2", type=float, multiple=True, help="Error variance (repeatable)")
@click.option("--reps", type=int, default=None, help="Replications per cell")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None, help="Base seed (64-bit unsigned)")
@click.option("--shared-column", type=click.Choice(["extra", "last"]), default="extra",
              help="Shared normal column of the design: extra (p+1)-th or the p-th itself")
@click.option("--workers", type=click.IntRange(1), default=None, help="Worker processes")
@click.option("--out", "output_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Output directory")
@click.option("--format", "fmt", type=click.Choice(["csv", "markdown"]), default="csv")
@click.pass_context
def command(
    ctx: click.Context,
    config_path: Optional[Path],
    use_paper_grid: bool,
    rho: Tuple[float, ...],
    n: Tuple[int, ...],
    p: Tuple[int, ...],
    sigma2: Tuple[float, ...],
    reps: Optional[int],
    seed: Optional[int],
    shared_column: str,
    workers: Optional[int],
    output_dir: Optional[Path],
    fmt: str,
):
    """Run the Monte Carlo grid and write AMSE tables"""
    output_dir = output_dir or settings.OUTPUT_DIR
    workers = workers or settings.WORKERS

    if config_path is not None:
        cells = load_grid(config_path, replications=reps, seed=seed)
    elif use_paper_grid or not (rho or n or p or sigma2):
        cells = default_grid(replications=reps, seed=seed, shared_column=shared_column)
    else:
        cells = _cells_from_flags(
            rho, n, p, sigma2,
            reps if reps is not None else settings.DEFAULT_REPLICATIONS,
            seed if seed is not None else settings.DEFAULT_SEED,
            shared_column,
        )

    manifest = RunManifest(
        command="simulate",
        config={"cells": [cell.model_dump() for cell in cells], "workers": workers, "format": fmt},
        seed=cells[0].seed,
        software_version=__version__,
    )
    logger.info(f"Simulating {len(cells)} cell(s) with {workers} worker(s)")

    quiet = ctx.obj.get("quiet", False) if ctx.obj else False
    results: List[CellResult]
    try:
        results = run_grid(cells, workers=workers, progress=not quiet)
    except GridRunError as e:
        if e.completed:
            write_simulation_outputs(e.completed, output_dir, fmt)
        manifest.config["completed"] = [result.cell.label() for result in e.completed]
        manifest.config["failed"] = [cell.label() for cell, _ in e.failures]
        write_manifest(manifest, output_dir)
        logger.error(f"{len(e.failures)} of {len(cells)} cell(s) failed; completed results written to {output_dir}")
        raise

    paths = write_simulation_outputs(results, output_dir, fmt)
    manifest_path = write_manifest(manifest, output_dir)
    click.echo(f"Wrote {len(paths)} result file(s) to {output_dir}")
    click.echo(f"Manifest: {manifest_path}")
