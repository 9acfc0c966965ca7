"""
cf command: continued-fraction expansion, convergents, Cassels residuals and a
Dirichlet solution for one rational.
"""

import sys
from typing import Optional

import click

from dirilab.cli.utils.errors import EXIT_SUCCESS, handle_error
from dirilab.cli.utils.logging import create_logger
from dirilab.cli.utils.validation import parse_rational
from dirilab.src.engine.cf_core import cassels_check, cf_expand, convergents, dirichlet_solve
from dirilab.src.engine.models.core import format_rational
from dirilab.src.exports import exporter

CONVERGENT_COLUMNS = ("n", "a", "p", "q", "cassels_residual")


@click.command(name="cf")
@click.argument("value")
@click.option(
    "--dirichlet-t",
    "-t",
    type=str,
    default=None,
    help="Solve |qx - p| <= 1/t with 1 <= q < t (rational t > 1)",
)
@click.option("--csv", "as_csv", is_flag=True, help="Print the convergent table as CSV")
@click.option("--verbose", "-v", is_flag=True, help="Show debug and engine logging")
def cf_command(value: str, dirichlet_t: Optional[str], as_csv: bool, verbose: bool):
    """
    Expand a rational in [0, 1) given as p/q.

    Examples:

    \b
    $ dirilab cf 5/8 --dirichlet-t 4
    $ dirilab cf 355/1133 --csv
    """
    create_logger(verbose=verbose, quiet=True)
    try:
        x = parse_rational(value)
        word = cf_expand(x)

        rows = []
        for n, (p, q) in enumerate(convergents(word)):
            residual = ""
            if 1 <= n < word.n:
                residual = format_rational(cassels_check(x, n).residual)
            rows.append(
                {
                    "n": n,
                    "a": word.a(n) if n >= 1 else "",
                    "p": p,
                    "q": q,
                    "cassels_residual": residual,
                }
            )

        solution = None
        if dirichlet_t is not None:
            solution = dirichlet_solve(x, parse_rational(dirichlet_t))

        if as_csv:
            click.echo(exporter.render_csv(CONVERGENT_COLUMNS, rows), nl=False)
        else:
            click.echo(f"x = {format_rational(x)}")
            click.echo(f"expansion: {word}")
            for row in rows:
                line = f"  n={row['n']:<3} p/q = {row['p']}/{row['q']}"
                if row["cassels_residual"] != "":
                    line += f"  cassels residual {row['cassels_residual']}"
                click.echo(line)
        if solution is not None:
            p, q = solution
            click.echo(f"dirichlet t={dirichlet_t}: p={p} q={q}")
    except Exception as e:
        sys.exit(handle_error(e, verbose))
    sys.exit(EXIT_SUCCESS)
