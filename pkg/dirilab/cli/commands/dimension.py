"""
dimension command: run the dimension estimators on a measure tree and compare
them with S and the formula value 2/(2 + tau).
"""

import sys
from typing import Optional

import click
from mpmath import mp, mpf

from dirilab.cli.commands.common import (
    common_options,
    load_experiment,
    require_cantor,
    write_output,
)
from dirilab.cli.utils.errors import EXIT_SUCCESS, handle_error
from dirilab.cli.utils.logging import create_logger
from dirilab.src.config import DIMENSION_FILENAME, PLOT_DATA_SUFFIX, SUMMARY_FILENAME
from dirilab.src.engine.classification import dimension_formula
from dirilab.src.engine.dimension import (
    box_count,
    covers_from_tree,
    cross_validation,
    holder_audit_balls,
    holder_audit_intervals,
    mdp_lower_bound,
)
from dirilab.src.engine.measure import MeasureTree, assign_measure, lebesgue_tree
from dirilab.src.engine.pressure import solve_S
from dirilab.src.exports import DIMENSION_COLUMNS, exporter


def level_statistics(tree: MeasureTree):
    rows = []
    for n in sorted(tree.levels):
        if n == 0:
            continue
        nodes = tree.levels[n]
        lengths = [
            mpf(node.interval.length.numerator) / node.interval.length.denominator
            for node in nodes
        ]
        masses = [node.mass for node in nodes]
        rows.append(
            {
                "level": n,
                "count": len(nodes),
                "mean_length": mp.nstr(mp.fsum(lengths) / len(lengths), 7),
                "mass_min": mp.nstr(min(masses), 8),
                "mass_max": mp.nstr(max(masses), 8),
                "mass_mean": mp.nstr(mp.fsum(masses) / len(masses), 8),
            }
        )
    return rows


@click.command(name="dimension")
@click.option("--depth", type=int, default=None, help="Deepest level to materialize")
@click.option("--samples", type=int, default=None, help="Ball samples for the mass fit")
@click.option("--seed", type=int, default=None, help="Sampling seed")
@click.option(
    "--control",
    is_flag=True,
    help="Run the estimators on the dyadic Lebesgue tree instead (expected value 1)",
)
@common_options
def dimension_command(
    depth: Optional[int],
    samples: Optional[int],
    seed: Optional[int],
    control: bool,
    config_path: Optional[str],
    output: Optional[str],
    verbose: bool,
    quiet: bool,
):
    """
    Estimate the dimension of the configured E_M by box counting, the mass
    distribution fit and the interval Holder audit.

    Writes dimension.csv, one .dat plot-data file per estimator and summary.json.
    Estimates farther than the estimator tolerance from S are reported as warnings.

    Examples:

    \b
    $ dirilab dimension --config experiment.json
    $ dirilab dimension --control --depth 14
    """
    logger = create_logger(verbose=verbose, quiet=quiet)
    try:
        config = load_experiment(config_path, output, depth=depth, samples=samples, seed=seed)
        lab = config.to_lab_config()

        if control:
            tree = lebesgue_tree(config.depth)
            S, formula, schedule_info = 1.0, 1.0, {"kind": "lebesgue"}
        else:
            schedule = require_cantor(config.build_schedule())
            logger.step("Solving the pressure equation...", 1, 3)
            solution = solve_S(
                schedule.L,
                schedule.M,
                schedule.tau,
                lab.solver_tolerance,
                lab.precision_bits,
                lab.term_budget,
            )
            logger.step(f"Assigning masses to levels 0..{config.depth}...", 2, 3)
            tree = assign_measure(
                schedule,
                solution,
                config.depth,
                lab.level_budget,
                step3=config.step3,
                precision_bits=lab.precision_bits,
            )
            S = float(solution.S)
            formula = float(dimension_formula(schedule.tau))
            schedule_info = schedule.to_dict()

        logger.step("Running estimators...", 3, 3)
        intervals = holder_audit_intervals(tree, margin=lab.holder_margin)
        balls = holder_audit_balls(tree, config.samples, lab.seed, lab.holder_margin)
        box = box_count(covers_from_tree(tree))
        mdp = mdp_lower_bound(tree, config.samples, lab.seed)
        report = cross_validation(
            [box, mdp], S, formula, lab.estimator_tolerance, config.tolerances.lower_bound_slack
        )

        content = exporter.render_csv(DIMENSION_COLUMNS, level_statistics(tree))
        path = write_output(config, DIMENSION_FILENAME, content, logger)
        for estimate in (box, mdp):
            write_output(
                config,
                estimate.method + PLOT_DATA_SUFFIX,
                exporter.render_plot_data(estimate.points, header=f"{estimate.method} log-log"),
                logger,
            )
        write_output(
            config,
            SUMMARY_FILENAME,
            exporter.render_json(
                {
                    "schedule": schedule_info,
                    "cross_validation": report,
                    "estimates": [box, mdp],
                    "holder_intervals": intervals,
                    "holder_balls": balls,
                }
            ),
            logger,
        )

        click.echo(
            f"S {S:.6f}  box-count {box.value:.6f}  mdp-fit {mdp.value:.6f}  "
            f"holder slope {intervals.fitted_slope:.6f}  formula {formula:.4f}"
        )
        for method, ok in sorted(report.within_tolerance.items()):
            if not ok:
                logger.warning(
                    f"{method} is {report.distances[method]:.4f} away from S "
                    f"(tolerance {lab.estimator_tolerance})"
                )
        if not report.lower_bound_consistent:
            logger.warning("mdp-fit exceeds box-count by more than the allowed slack")
        for warning in balls.warnings:
            logger.debug(warning)
        logger.success(f"dimension report written to {path} ({logger.elapsed_time()})")
    except Exception as e:
        sys.exit(handle_error(e, verbose))
    sys.exit(EXIT_SUCCESS)
