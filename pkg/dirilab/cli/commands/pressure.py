"""
pressure command: solve the pressure equation over an M sweep.
"""

import sys
from typing import Optional

import click
from mpmath import mp

from dirilab.cli.commands.common import common_options, load_experiment, write_output
from dirilab.cli.utils.errors import EXIT_SUCCESS, FindingsError, handle_error
from dirilab.cli.utils.logging import create_logger
from dirilab.cli.utils.progress import SweepProgress
from dirilab.cli.utils.validation import parse_int_list, parse_number
from dirilab.src.config import PRESSURE_FILENAME
from dirilab.src.engine.errors import CombinatorialExplosionError
from dirilab.src.engine.models.core import format_rational
from dirilab.src.engine.pressure import limit_target, solve_S
from dirilab.src.exports import PRESSURE_COLUMNS, exporter


@click.command(name="pressure")
@click.option("--L", "L", type=int, default=None, help="Block length L >= 2 (default: schedule L)")
@click.option(
    "--M", "M", type=str, default=None, help="M value, list '5,10,25' or range '2..20'"
)
@click.option("--tau", type=str, default=None, help="Exponent tau >= 0 as p/q or decimal")
@click.option("--tol", type=float, default=None, help="Root residual tolerance (default 1e-10)")
@click.option("--precision", type=int, default=None, help="mpmath precision in bits (default 128)")
@click.option("--term-budget", type=int, default=None, help="Largest M^L sum evaluated")
@common_options
def pressure_command(
    L: Optional[int],
    M: Optional[str],
    tau: Optional[str],
    tol: Optional[float],
    precision: Optional[int],
    term_budget: Optional[int],
    config_path: Optional[str],
    output: Optional[str],
    verbose: bool,
    quiet: bool,
):
    """
    Solve sum q_L(a)^(-(2+tau)s) = 1 for s over a sweep of M.

    Rows go to stdout and to pressure.csv; a sweep stopped by the term budget
    keeps the rows solved so far and exits with status 1.

    Examples:

    \b
    $ dirilab pressure --L 2 --M 2 --tau 0
    $ dirilab pressure --L 2 --M 2..20 --tau 1
    """
    logger = create_logger(verbose=verbose, quiet=quiet)
    try:
        config = load_experiment(
            config_path,
            output,
            solver=tol,
            precision_bits=precision,
            term_budget=term_budget,
        )
        L = L if L is not None else int(config.schedule.get("L", 2))
        M_values = parse_int_list(M) if M is not None else [int(config.schedule.get("M", 2))]
        tau_value = parse_number(tau if tau is not None else str(config.schedule.get("tau", "1")))
        lab = config.to_lab_config()
        target = limit_target(tau_value)

        rows = []
        stopped: Optional[str] = None
        with SweepProgress(len(M_values), "pressure sweep", enabled=not quiet) as progress:
            for M_value in M_values:
                try:
                    solution = solve_S(
                        L,
                        M_value,
                        tau_value,
                        lab.solver_tolerance,
                        lab.precision_bits,
                        lab.term_budget,
                    )
                except CombinatorialExplosionError as e:
                    if not rows:
                        raise
                    stopped = e.message
                    break
                rows.append(
                    {
                        "L": L,
                        "M": M_value,
                        "tau": format_rational(tau_value),
                        "S": mp.nstr(solution.S, 15),
                        "residual": mp.nstr(solution.residual, 5),
                        "evaluations": solution.evaluations,
                        "distance": mp.nstr(abs(solution.S - target), 10),
                    }
                )
                progress.advance(f"M={M_value}")
                logger.debug(f"M={M_value}: S={mp.nstr(solution.S, 12)}")

        content = exporter.render_csv(PRESSURE_COLUMNS, rows)
        click.echo(content, nl=False)
        path = write_output(config, PRESSURE_FILENAME, content, logger)
        logger.success(f"{len(rows)} rows written to {path} ({logger.elapsed_time()})")

        s_values = [float(row["S"]) for row in rows]
        if any(b <= a for a, b in zip(s_values, s_values[1:])):
            logger.warning("S is not strictly increasing across the sweep")
        if stopped is not None:
            raise FindingsError(f"sweep stopped early, partial output kept: {stopped}")
    except Exception as e:
        sys.exit(handle_error(e, verbose))
    sys.exit(EXIT_SUCCESS)
