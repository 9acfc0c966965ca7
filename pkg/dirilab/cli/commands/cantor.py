"""
cantor command: materialize the fundamental intervals of a schedule level by level.
"""

import sys
from typing import Optional

import click

from dirilab.cli.commands.common import common_options, load_experiment, write_output
from dirilab.cli.utils.errors import EXIT_SUCCESS, FindingsError, handle_error
from dirilab.cli.utils.logging import create_logger
from dirilab.cli.utils.progress import SweepProgress
from dirilab.cli.utils.validation import parse_int_list
from dirilab.src.config import LEVELS_FILENAME, SUMMARY_FILENAME
from dirilab.src.engine.cantor import enumerate_level, sandwich_report
from dirilab.src.engine.schedule import GeneralSchedule
from dirilab.src.exports import LEVEL_COLUMNS, exporter, level_rows


@click.command(name="cantor")
@click.option("--M", "M", type=int, default=None, help="Free quotient bound M >= 2")
@click.option("--L", "L", type=int, default=None, help="Block length L >= 2")
@click.option("--tau", type=str, default=None, help="Exponent tau >= 0")
@click.option("--blocks", type=str, default=None, help="Window block counts m_k, e.g. '1,2'")
@click.option("--depth", type=int, default=None, help="Deepest level to materialize")
@click.option("--budget", type=int, default=None, help="Largest number of words per level")
@common_options
def cantor_command(
    M: Optional[int],
    L: Optional[int],
    tau: Optional[str],
    blocks: Optional[str],
    depth: Optional[int],
    budget: Optional[int],
    config_path: Optional[str],
    output: Optional[str],
    verbose: bool,
    quiet: bool,
):
    """
    Write levels.csv with every fundamental interval J_n for n = 1..depth.

    A level larger than the budget is truncated to its leftmost intervals and
    the command exits with status 1.

    Examples:

    \b
    $ dirilab cantor --M 3 --L 2 --blocks 1,2 --depth 6
    $ dirilab cantor --config experiment.json -o out/
    """
    logger = create_logger(verbose=verbose, quiet=quiet)
    try:
        config = load_experiment(
            config_path, output, M=M, L=L, tau=tau, depth=depth, level_budget=budget
        )
        if blocks is not None:
            config.schedule = {**config.schedule, "window_blocks": parse_int_list(blocks)}
            config.validate()
        schedule = config.build_schedule()
        logger.step(f"windows at n_k = {list(schedule.window_indices)}")

        rows = []
        truncated = []
        summary_levels = []
        with SweepProgress(config.depth, "levels", enabled=not quiet) as progress:
            for n in range(1, config.depth + 1):
                level = enumerate_level(schedule, n, config.level_budget)
                rows.extend(level_rows(level))
                lengths = [entry.interval.length for entry in level.entries]
                summary_levels.append(
                    {
                        "level": n,
                        "count": level.count,
                        "materialized": len(level.entries),
                        "case": schedule.case_tag(n),
                        "min_length": str(min(lengths)),
                        "max_length": str(max(lengths)),
                    }
                )
                if not level.complete:
                    truncated.append(n)
                progress.advance(f"level {n}")
                logger.debug(f"level {n}: {len(level.entries)} intervals")

        summary = {"schedule": schedule.to_dict(), "levels": summary_levels}
        if isinstance(schedule, GeneralSchedule):
            reference = schedule.reference_word
            summary["reference_word"] = str(reference)
            summary["sandwich"] = sandwich_report(reference, schedule)

        content = exporter.render_csv(LEVEL_COLUMNS, rows)
        path = write_output(config, LEVELS_FILENAME, content, logger)
        write_output(config, SUMMARY_FILENAME, exporter.render_json(summary), logger)

        for item in summary_levels:
            click.echo(
                f"level {item['level']:>3}  case {item['case']:<3} "
                f"count {item['count'] if item['count'] is not None else '>budget'}"
            )
        logger.success(f"{len(rows)} intervals written to {path}")
        if truncated:
            raise FindingsError(
                f"levels {truncated} exceed the budget of {config.level_budget}; "
                "partial output kept"
            )
    except Exception as e:
        sys.exit(handle_error(e, verbose))
    sys.exit(EXIT_SUCCESS)
