"""
Main CLI application for dirilab using Click framework.
"""

import sys

import click

from dirilab import __version__
from dirilab.cli.utils.errors import EXIT_INTERNAL_ERROR, EXIT_INTERRUPTED


@click.group()
@click.version_option(version=__version__, prog_name="dirilab")
@click.pass_context
def cli(ctx):
    """
    dirilab: continued fractions, Cantor constructions and dimension estimates
    for sets of Dirichlet non-improvable numbers.

    Exact-arithmetic audits and numeric estimators for the dimension formula
    2/(2 + tau), with reproducible CSV and JSON outputs.
    """
    ctx.ensure_object(dict)


@cli.command()
def version():
    """Display version information."""
    click.echo(f"dirilab v{__version__}")
    click.echo("Continued-fraction and Cantor-set dimension lab")


# Import commands
from dirilab.cli.commands.audit import audit_command  # noqa: E402
from dirilab.cli.commands.cantor import cantor_command  # noqa: E402
from dirilab.cli.commands.cf import cf_command  # noqa: E402
from dirilab.cli.commands.classify import classify_command  # noqa: E402
from dirilab.cli.commands.dimension import dimension_command  # noqa: E402
from dirilab.cli.commands.measure import measure_command  # noqa: E402
from dirilab.cli.commands.pressure import pressure_command  # noqa: E402

cli.add_command(cf_command, name="cf")
cli.add_command(pressure_command, name="pressure")
cli.add_command(cantor_command, name="cantor")
cli.add_command(measure_command, name="measure")
cli.add_command(dimension_command, name="dimension")
cli.add_command(audit_command, name="audit")
cli.add_command(classify_command, name="classify")


def main():
    """Entry point for the CLI."""
    try:
        cli(obj={})
    except KeyboardInterrupt:
        click.echo("\n\nInterrupted by user", err=True)
        sys.exit(EXIT_INTERRUPTED)
    except Exception as e:
        click.secho(f"\n✗ Unexpected error: {e}", fg="red", err=True)
        sys.exit(EXIT_INTERNAL_ERROR)


if __name__ == "__main__":
    main()
