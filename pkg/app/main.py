import logging

import click
from pydantic import ValidationError

from app import __version__
from app.config import settings
from app.cli.commands import fit, realdata, simulate
from app.core.errors import DataError, GridRunError, NumericalError

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


def configure_logging(level: str) -> None:
    """Configure root logging once per process"""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler()],
    )


class RidgeGroup(click.Group):
    """Click group that maps package errors onto the documented exit codes"""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise
        except DataError as e:
            logger.error(f"Data error: {e}")
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_DATA)
        except (NumericalError, GridRunError) as e:
            logger.error(f"Numerical failure: {e}")
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_NUMERICAL)
        except ValidationError as e:
            click.echo(f"Error: invalid parameters\n{e}", err=True)
            ctx.exit(EXIT_USAGE)


def create_application() -> click.Group:
    """Create and configure the command group"""

    @click.group(cls=RidgeGroup, help=f"{settings.PROJECT_NAME}: ridge-parameter estimators and simulations")
    @click.version_option(__version__, prog_name=settings.PROJECT_NAME)
    @click.option("--verbose", is_flag=True, help="Debug logging")
    @click.option("--quiet", is_flag=True, help="Warnings only, no progress bar")
    @click.pass_context
    def cli(ctx: click.Context, verbose: bool, quiet: bool):
        ctx.ensure_object(dict)
        ctx.obj["quiet"] = quiet
        level = "DEBUG" if verbose or settings.DEBUG else ("WARNING" if quiet else settings.LOG_LEVEL)
        configure_logging(level)

    cli.add_command(simulate.command)
    cli.add_command(fit.command)
    cli.add_command(realdata.command)
    return cli


# Create the application instance
app = create_application()

if __name__ == "__main__":
    app(prog_name="ridgebench")
