import logging
from pathlib import Path
from typing import Optional

import click

from app import __version__
from app.core.application import BUNDLED_DATASETS, load_dataset, real_data_report
from app.core.errors import UnknownDatasetError
from app.core.reporting import render_real_data, write_manifest, write_real_data_outputs
from app.models.report import RunManifest

logger = logging.getLogger(__name__)


@click.command("realdata")
@click.argument("dataset", required=False)
@click.option("--all", "use_all", is_flag=True, help="Report every bundled dataset")
@click.option("--format", "fmt", type=click.Choice(["csv", "markdown"]), default="csv")
@click.option("--out", "output_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Also write CSV (and markdown) tables to this directory")
def command(dataset: Optional[str], use_all: bool, fmt: str, output_dir: Optional[Path]):
    """Estimated theoretical MSE tables for the bundled datasets"""
    if use_all:
        ids = list(BUNDLED_DATASETS)
    elif dataset is None:
        raise click.UsageError(f"name a dataset ({', '.join(sorted(BUNDLED_DATASETS))}) or pass --all")
    else:
        key = dataset.strip().lower()
        if key not in BUNDLED_DATASETS:
            raise UnknownDatasetError(dataset, BUNDLED_DATASETS)
        ids = [key]

    for dataset_id in ids:
        report = real_data_report(load_dataset(dataset_id))
        click.echo(render_real_data(report, fmt))
        click.echo("")
        if output_dir is not None:
            paths = write_real_data_outputs(report, output_dir, fmt)
            logger.info(f"Real-data tables written: {paths}")

    if output_dir is not None:
        manifest = RunManifest(
            command="realdata",
            config={"datasets": ids, "format": fmt},
            software_version=__version__,
        )
        write_manifest(manifest, output_dir)
