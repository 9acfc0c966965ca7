"""
measure command: solve S, assign the mass distribution and audit its normalization.
"""

import sys
from typing import Optional

import click
from mpmath import mp

from dirilab.cli.commands.common import (
    common_options,
    load_experiment,
    require_cantor,
    write_output,
)
from dirilab.cli.utils.errors import EXIT_SUCCESS, FindingsError, handle_error
from dirilab.cli.utils.logging import create_logger
from dirilab.cli.utils.validation import parse_word
from dirilab.src.config import FINDINGS_FILENAME, MEASURE_FILENAME, SUMMARY_FILENAME
from dirilab.src.engine.cf_core import CFWord
from dirilab.src.engine.measure import assign_measure, measure_rows, normalization_audit
from dirilab.src.engine.pressure import solve_S
from dirilab.src.exports import MEASURE_COLUMNS, exporter


@click.command(name="measure")
@click.option("--depth", type=int, default=None, help="Deepest level to materialize")
@click.option(
    "--step3",
    type=click.Choice(["actual", "quarter-power"]),
    default=None,
    help="Window mass divisor: admissible quotient count or q^tau/4",
)
@click.option(
    "--stem",
    default=None,
    help="Only materialize the cylinder of this word, e.g. 1,1,4,3",
)
@common_options
def measure_command(
    depth: Optional[int],
    step3: Optional[str],
    stem: Optional[str],
    config_path: Optional[str],
    output: Optional[str],
    verbose: bool,
    quiet: bool,
):
    """
    Write measure.csv and a normalization report for the configured schedule.

    Exits with status 1 when a level's total mass or a parent/children sum is
    outside tolerance. With --stem, levels below the stem are expected to sum
    to the stem's mass.

    Examples:

    \b
    $ dirilab measure --config experiment.json --depth 6
    $ dirilab measure --step3 quarter-power
    $ dirilab measure --depth 8 --stem 1,1,4,3
    """
    logger = create_logger(verbose=verbose, quiet=quiet)
    try:
        config = load_experiment(config_path, output, depth=depth, step3=step3)
        schedule = require_cantor(config.build_schedule())
        lab = config.to_lab_config()
        stem_word = CFWord(parse_word(stem)) if stem else None

        logger.step("Solving the pressure equation...", 1, 3)
        solution = solve_S(
            schedule.L,
            schedule.M,
            schedule.tau,
            lab.solver_tolerance,
            lab.precision_bits,
            lab.term_budget,
        )
        logger.debug(f"S = {mp.nstr(solution.S, 15)}")

        logger.step(f"Assigning masses to levels 0..{config.depth}...", 2, 3)
        tree = assign_measure(
            schedule,
            solution,
            config.depth,
            lab.level_budget,
            step3=config.step3,
            precision_bits=lab.precision_bits,
            stem=stem_word,
        )

        logger.step("Auditing normalization...", 3, 3)
        reports = [
            normalization_audit(tree, n, lab.mass_tolerance, lab.consistency_tolerance)
            for n in range(max(1, len(tree.stem)), config.depth + 1)
        ]
        findings = [finding for report in reports for finding in report.findings]

        content = exporter.render_csv(MEASURE_COLUMNS, measure_rows(tree))
        path = write_output(config, MEASURE_FILENAME, content, logger)
        write_output(
            config,
            SUMMARY_FILENAME,
            exporter.render_json(
                {"schedule": schedule.to_dict(), "solution": solution, "normalization": reports}
            ),
            logger,
        )
        write_output(config, FINDINGS_FILENAME, exporter.render_jsonl(findings), logger)

        for report in reports:
            click.echo(
                f"level {report.level:>3}  nodes {report.node_count:>7}  "
                f"total {mp.nstr(report.total_mass, 15)}  "
                f"max parent deviation {mp.nstr(report.max_parent_deviation, 3)}"
            )
        logger.success(f"measure tree written to {path}")
        if findings:
            raise FindingsError(f"{len(findings)} normalization findings", count=len(findings))
    except Exception as e:
        sys.exit(handle_error(e, verbose))
    sys.exit(EXIT_SUCCESS)
