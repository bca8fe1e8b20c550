import logging
from pathlib import Path
from typing import Optional, Tuple

import click

from app import __version__
from app.core.application import fit_dataset, load_dataset
from app.core.kestimators import ESTIMATORS, EstimatorId, IndividualFamily
from app.core.reporting import fit_frame, render_fit, write_manifest
from app.models.report import RunManifest

logger = logging.getLogger(__name__)


def _parse_estimators(names: Tuple[str, ...], use_all: bool) -> list:
    if use_all or not names:
        return list(ESTIMATORS)
    try:
        return [EstimatorId.parse(name) for name in names]
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--estimator") from e


@click.command("fit")
@click.argument("source")
@click.option("--estimator", "estimators", multiple=True, help="Estimator name, case-insensitive (repeatable)")
@click.option("--all", "use_all", is_flag=True, help="Fit every registered estimator")
@click.option("--raw", is_flag=True, help="Use X and Y as given: no centering or scaling")
@click.option("--generalized", type=click.Choice([family.value for family in IndividualFamily], case_sensitive=False),
              default=None, help="Also fit generalized ridge with per-coordinate k_j from this family")
@click.option("--format", "fmt", type=click.Choice(["csv", "markdown"]), default="csv")
@click.option("--out", "output_dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Also write the report as CSV to this directory")
def command(
    source: str,
    estimators: Tuple[str, ...],
    use_all: bool,
    raw: bool,
    generalized: Optional[str],
    fmt: str,
    output_dir: Optional[Path],
):
    """Fit a dataset (CSV path or bundled id) with the chosen estimators"""
    chosen = _parse_estimators(estimators, use_all)
    named = load_dataset(source)
    family = IndividualFamily(generalized.upper()) if generalized else None
    report = fit_dataset(named, chosen, standardized=not raw, generalized=family)

    click.echo(render_fit(report, fmt))

    if output_dir is not None:
        output_dir.mkdir(parents=True, exist_ok=True)
        csv_path = output_dir / f"fit_{Path(named.id).stem}.csv"
        fit_frame(report).to_csv(csv_path, index=False)
        manifest = RunManifest(
            command="fit",
            config={
                "source": str(source),
                "estimators": [estimator.value for estimator in chosen],
                "standardized": not raw,
                "generalized": family.value if family else None,
            },
            software_version=__version__,
        )
        write_manifest(manifest, output_dir)
        logger.info(f"Fit report written to {csv_path}")
