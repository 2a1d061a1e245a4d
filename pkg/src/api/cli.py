import functools
import logging
import sys
from pathlib import Path
from typing import Any, Callable

import click
from pydantic import ValidationError

from src.api.data_model import SUITES, RunConfig
from src.config.appconfig import env_config
from src.config.settings import settings
from src.database.pd_db import write_json, write_rows, write_table
from src.database.schemas import OutputHeader
from src.error_trace.errorlogger import system_logger
from src.error_trace.exceptions import (
    ConsistencyError,
    CriterionError,
    DomainError,
    MonopoleTripletError,
    ObservableSpecError,
)
from src.services.manager import run_gauge_table, run_matelem, run_spectrum, run_verify
from src.utilities.helpers import config_hash, parse_half_int
from src.utilities.Printer import print_check, printer

logger = logging.getLogger(__name__)

# usage errors exit 2 through click
EXIT_FAILED, EXIT_IO = 1, 3


def run_options(func: Callable) -> Callable:
    """Options shared by every subcommand."""
    options = [
        click.option("--profile", default="trivial", show_default=True, help="trivial | bps[:mu] | table:W=path[,F=path][,Phi=path]"),
        click.option("--twoj", type=int, default=None, help="2j (odd); default 3"),
        click.option("--twom", type=int, default=None, help="2m; default 1"),
        click.option("--j", "j_text", default=None, help="j as a half-integer, e.g. 3/2"),
        click.option("--m", "m_text", default=None, help="m as a half-integer, e.g. -1/2"),
        click.option("--delta", type=click.Choice(["1", "-1"]), default="1", show_default=True),
        click.option("--A", "A", default="0", show_default=True, help="sector parameter, a+bi"),
        click.option("--B", "B", default="0", show_default=True, help="T0 phase parameter, a+bi"),
        click.option("--alpha", default=None, help="override α = e^{iA}, a+bi"),
        click.option("--kappa", type=float, default=0.0, show_default=True),
        click.option("--epsilon", type=float, default=0.5, show_default=True),
        click.option("--mass", type=float, default=1.0, show_default=True),
        click.option("--tol", type=float, default=1e-8, show_default=True),
        click.option("--out", type=click.Path(file_okay=False), default=None, help="output directory"),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def build_config(command: str, **params: Any) -> RunConfig:
    """Click parameters to a validated RunConfig; bad values become usage errors."""
    j_text, m_text = params.pop("j_text", None), params.pop("m_text", None)
    try:
        if j_text is not None:
            params["twoj"] = parse_half_int(j_text).twice
        if m_text is not None:
            params["twom"] = parse_half_int(m_text).twice
    except DomainError as e:
        raise click.UsageError(str(e)) from e
    payload = {key: value for key, value in params.items() if value is not None}
    payload["format"] = payload.pop("fmt", "csv")
    payload["delta"] = int(payload.get("delta", 1))
    try:
        return RunConfig(command=command, **payload)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "config"
        raise click.UsageError(f"{where}: {first['msg']}") from e


def header_for(config: RunConfig) -> OutputHeader:
    return OutputHeader(
        command=config.command,
        config_hash=config_hash(config.model_dump(mode="json")),
        tolerances={
            "tol": config.tol,
            "ode_tol": settings.ODE_TOL,
            "match_accept": settings.MATCH_ACCEPT,
            "zero_factor": settings.ZERO_FACTOR_TOL,
            "inconsistency": settings.INCONSISTENCY_THRESHOLD,
        },
    )


def exit_codes(func: Callable) -> Callable:
    """Input errors exit 2, file-system errors exit 3, computation failures exit 1."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (ObservableSpecError, DomainError, ConsistencyError, CriterionError) as e:
            raise click.UsageError(str(e)) from e
        except OSError as e:
            system_logger.error(e, additional_info={"command": func.__name__})
            click.echo(f"I/O error: {e}", err=True)
            sys.exit(EXIT_IO)
        except MonopoleTripletError as e:
            system_logger.error(e, additional_info={"command": func.__name__}, exc_info=True)
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_FAILED)

    return wrapper


@click.group()
@click.version_option(settings.VERSION)
def cli():
    """Isotopic-triplet Dirac fields on monopole backgrounds."""


@cli.command()
@click.option(
    "--suite",
    "suites",
    multiple=True,
    type=click.Choice(list(SUITES) + ["all"]),
    default=("all",),
    show_default=True,
    help="repeat to select several suites",
)
@click.option("--no-color", is_flag=True, default=False)
@run_options
@exit_codes
def verify(suites, no_color, **params):
    """Run the identity suites; exit 0 iff every check passes."""
    selected = list(SUITES) if "all" in suites else list(dict.fromkeys(suites))
    config = build_config("verify", suite=selected, **params)
    rows = run_verify(config)
    for row in rows:
        print_check(row.suite, row.name, row.residual, row.tolerance, row.passed, colored=not no_color)
        if row.note and not row.passed:
            printer(f"    {row.note}", "yellow", colored=not no_color)
    passed = sum(row.passed for row in rows)
    printer(f"{passed}/{len(rows)} checks passed", "bold_white", colored=not no_color)
    if config.out:
        target = Path(config.out) / f"verify.{config.format}"
        write_rows(rows, target, header_for(config), config.format)
    if passed != len(rows):
        sys.exit(EXIT_FAILED)


@cli.command()
@click.option("--case", default=None, help="radial case; chosen from j and the profile when omitted")
@click.option("--eps-min", type=float, default=None)
@click.option("--eps-max", type=float, default=None)
@click.option("--radial-points", type=int, default=None)
@run_options
@exit_codes
def spectrum(**params):
    """Integrate the regular solutions and search for bound modes."""
    config = build_config("spectrum", **params)
    out = Path(config.out or env_config.output_dir)
    header = header_for(config)
    solutions, document = run_spectrum(config)
    if config.format == "json":
        write_json({"solutions": solutions.to_dict(orient="records")}, out / "solutions.json", header)
    else:
        write_table(solutions, out / "solutions.csv", header)
    write_json(document, out / "modes.json", header)
    click.echo(f"{len(document['modes'])} mode(s); files in {out}")


@cli.command()
@click.option("--observables", type=click.Path(dir_okay=False), default=None, help="YAML catalog; built-in kernels when omitted")
@click.option("--quad-theta", type=int, default=None)
@click.option("--quad-phi", type=int, default=None)
@run_options
@exit_codes
def matelem(**params):
    """Matrix elements and selection-rule verdicts for the observable catalog."""
    config = build_config("matelem", **params)
    out = Path(config.out or env_config.output_dir)
    rows = run_matelem(config)
    target = write_rows(rows, out / f"matelem.{config.format}", header_for(config), config.format)
    violated = [row for row in rows if row.verdict.endswith(":violated")]
    click.echo(f"{len(rows)} rows written to {target}; {len(violated)} selection-rule violation(s)")
    if violated:
        sys.exit(EXIT_FAILED)


@cli.command("gauge-table")
@run_options
@exit_codes
def gauge_table(**params):
    """Hedgehog → Dirac → Schwinger potential deviations on a fixed grid."""
    config = build_config("gauge-table", **params)
    out = Path(config.out or env_config.output_dir)
    rows = run_gauge_table(config)
    target = write_rows(rows, out / f"gauge_table.{config.format}", header_for(config), config.format)
    click.echo(f"{len(rows)} rows written to {target}")
