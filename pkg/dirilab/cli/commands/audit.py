"""
audit command: run every property audit and emit findings as JSON lines.
"""

import sys
from typing import Optional

import click

from dirilab.cli.commands.common import (
    common_options,
    load_experiment,
    require_cantor,
    write_output,
)
from dirilab.cli.utils.errors import EXIT_SUCCESS, FindingsError, handle_error
from dirilab.cli.utils.logging import create_logger
from dirilab.src.config import FINDINGS_FILENAME, SUMMARY_FILENAME
from dirilab.src.engine.audits import FAULTS, AuditSettings, run_audits
from dirilab.src.exports import exporter


@click.command(name="audit")
@click.option("--depth", type=int, default=None, help="Deepest level audited")
@click.option("--seed", type=int, default=None, help="Sampling seed")
@click.option(
    "--inject-fault",
    type=click.Choice(FAULTS),
    default=None,
    help="Test hook: deliberately break one check",
)
@common_options
def audit_command(
    depth: Optional[int],
    seed: Optional[int],
    inject_fault: Optional[str],
    config_path: Optional[str],
    output: Optional[str],
    verbose: bool,
    quiet: bool,
):
    """
    Audit continuants, Cassels identities, interval geometry, witnesses,
    inclusions, normalization and Holder bounds for the configured schedule.

    Findings are printed to stdout as JSON lines and saved to findings.jsonl.
    Zero findings exits 0, any finding exits 1.

    Examples:

    \b
    $ dirilab audit
    $ dirilab audit --config experiment.json --depth 7
    $ dirilab audit --inject-fault gap-bound
    """
    logger = create_logger(verbose=verbose, quiet=quiet)
    try:
        config = load_experiment(config_path, output, depth=depth, seed=seed)
        schedule = require_cantor(config.build_schedule())
        lab = config.to_lab_config()
        settings = AuditSettings(
            depth=config.depth,
            seed=lab.seed,
            witness_samples=config.samples,
            inclusion_samples=config.samples,
            precision_bits=lab.precision_bits,
            solver_tolerance=lab.solver_tolerance,
            mass_tolerance=lab.mass_tolerance,
            consistency_tolerance=lab.consistency_tolerance,
            holder_margin=lab.holder_margin,
            level_budget=lab.level_budget,
            inject_fault=inject_fault,
        )
        report = run_audits(schedule, settings, on_check=lambda name: logger.step(name))

        content = exporter.render_jsonl(report.findings)
        click.echo(content, nl=False)
        path = write_output(config, FINDINGS_FILENAME, content, logger)
        write_output(
            config,
            SUMMARY_FILENAME,
            exporter.render_json(
                {
                    "schedule": schedule.to_dict(),
                    "checks": report.checks,
                    "samples": report.samples,
                    "finding_count": len(report.findings),
                }
            ),
            logger,
        )
        if report.findings:
            raise FindingsError(
                f"{len(report.findings)} findings written to {path}", count=len(report.findings)
            )
        logger.success(f"{len(report.checks)} checks passed ({logger.elapsed_time()})")
    except Exception as e:
        sys.exit(handle_error(e, verbose))
    sys.exit(EXIT_SUCCESS)
