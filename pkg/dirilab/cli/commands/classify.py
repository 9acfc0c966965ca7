"""
classify command: lower order, series verdict, dimension formula and optional
membership evidence for an approximating function.
"""

import sys
from fractions import Fraction
from typing import Optional

import click

from dirilab.cli.commands.common import common_options, load_experiment
from dirilab.cli.utils.errors import EXIT_SUCCESS, UsageError, handle_error
from dirilab.cli.utils.logging import create_logger
from dirilab.cli.utils.validation import parse_number, parse_word
from dirilab.src.engine.cf_core import CFWord, PeriodicWord
from dirilab.src.engine.classification import (
    dimension_formula,
    lower_order_tau,
    membership_evidence,
    series_classify,
)
from dirilab.src.engine.models.core import format_rational
from dirilab.src.exports import exporter


def _render(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    return value


@click.command(name="classify")
@click.option(
    "--family",
    type=click.Choice(["power", "power_log"]),
    default=None,
    help="Psi family (tabulated and derived specs come from --config)",
)
@click.option("--tau", type=str, default=None, help="Exponent tau of Psi(t) = t^tau")
@click.option("--beta", type=str, default=None, help="Log exponent of the power_log family")
@click.option("--s", "s", type=str, default=None, help="Exponent s in (0, 1) for the series test")
@click.option("--word", type=str, default=None, help="Partial quotients, e.g. '1,1,4,4'")
@click.option("--sqrt", "sqrt_of", type=int, default=None, help="Evidence for sqrt(d) - floor")
@click.option("--depth", type=int, default=None, help="Prefix length used for --sqrt")
@click.option("--C", "C", type=str, default="1", help="Constant C in G(C Psi)")
@common_options
def classify_command(
    family: Optional[str],
    tau: Optional[str],
    beta: Optional[str],
    s: Optional[str],
    word: Optional[str],
    sqrt_of: Optional[int],
    depth: Optional[int],
    C: str,
    config_path: Optional[str],
    output: Optional[str],
    verbose: bool,
    quiet: bool,
):
    """
    Classify Psi: tau, convergence of sum t (t^2 Psi(t))^-s and 2/(2 + tau).

    Prints one JSON object. Without --s the series is tested at the critical
    exponent 2/(2 + tau) when that lies in (0, 1).

    Examples:

    \b
    $ dirilab classify --tau 1
    $ dirilab classify --family power_log --tau 1 --beta 2 --s 2/3
    $ dirilab classify --tau 1 --word 1,1,4,4
    $ dirilab classify --tau 1/2 --sqrt 7 --depth 20
    """
    create_logger(verbose=verbose, quiet=quiet)
    try:
        config = load_experiment(config_path, output)
        if family is not None or tau is not None:
            psi = {"family": family or "power", "tau": tau or "1"}
            if beta is not None:
                psi["beta"] = beta
            config.psi = psi
            config.validate()
        spec = config.build_psi()

        result = {"psi": spec, "tau": _render(lower_order_tau(spec))}
        formula = dimension_formula(spec)
        result["dimension_formula"] = _render(formula)

        s_value = parse_number(s) if s is not None else None
        if s_value is None and isinstance(formula, Fraction) and 0 < formula < 1:
            s_value = formula
        if s_value is not None:
            result["series"] = series_classify(spec, s_value)

        if word is not None and sqrt_of is not None:
            raise UsageError("give either --word or --sqrt, not both")
        target = None
        if word is not None:
            target = CFWord(parse_word(word))
        elif sqrt_of is not None:
            if depth is None:
                raise UsageError("--sqrt needs --depth")
            target = PeriodicWord.for_sqrt(sqrt_of)
        if target is not None:
            result["evidence"] = membership_evidence(
                target, spec, C=parse_number(C), depth=depth if sqrt_of is not None else None
            )

        click.echo(exporter.render_json(result), nl=False)
    except Exception as e:
        sys.exit(handle_error(e, verbose))
    sys.exit(EXIT_SUCCESS)
