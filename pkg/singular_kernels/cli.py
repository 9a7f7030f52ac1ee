"""CLI entry point for singular-kernels."""

import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import click
import toml
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel

from . import verify
from .config import OUTPUT_FORMATS, ConfigManager, RunConfig
from .exceptions import KernelError, UserInputError
from .fundsol import (
    EvaluationPath,
    RadialExponent,
    delta_to_index,
    evaluate_q,
    index_to_delta,
    solution_family,
)
from .lauricella import (
    compare_methods,
    fa_decomposed,
    fa_direct,
    fa_integral,
    fa_recurrence,
)
from .models import (
    DeltaVector,
    EvalResult,
    GaussParams,
    LauricellaParams,
    VerificationReport,
)
from .scan import parse_axis, parse_vector, scan_to_file, total_nodes
from .special_functions import gauss_2f1, gauss_2f1_at_one
from .ui_controller import UIController

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2

SUITES = (
    "pde",
    "singularity",
    "boundary",
    "identity",
    "decomposition",
    "gauss",
    "limit",
    "indices",
    "all",
)
FA_METHODS = ("direct", "decomposed", "recurrence", "integral", "all")


def configure_logging(verbose: bool) -> None:
    """Route log records through Rich on stderr; DEBUG with --verbose, else WARNING."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _ui(ctx: click.Context) -> UIController:
    return ctx.obj["ui"]


def _fail(ctx: click.Context, error: KernelError, title: str = "Error") -> None:
    _ui(ctx).display_error(error.get_formatted_message(), title=title)
    ctx.exit(EXIT_USAGE)


def _show_result(
    ctx: click.Context,
    title: str,
    result: EvalResult,
    extra: Optional[List[Tuple[str, object]]] = None,
) -> None:
    ui = _ui(ctx)
    ui.display_eval_result(title, result, extra)
    if not result.converged:
        ui.display_warning(
            "The series hit its degree cap before the stopping rule was met; "
            "the value is a truncated sum.",
            title="Not Converged",
        )


def _load_config(config_path: Optional[str]) -> RunConfig:
    return ConfigManager(config_path).load()


def _dump_config(ctx: click.Context, config: RunConfig, path: str) -> None:
    ConfigManager().save(config, path)
    _ui(ctx).display_success(f"Configuration written to {path}", title="Config")
    ctx.exit(EXIT_OK)


@click.group(invoke_without_command=True)
@click.option("--verbose", "-v", is_flag=True, help="Log debug information to stderr")
@click.pass_context
def cli(ctx: click.Context, verbose: bool) -> None:
    """singular-kernels - Lauricella F_A and fundamental solutions of singular
    elliptic equations.

    Evaluate the special functions, the 2^n fundamental solutions, run the
    numerical verification suites and scan fields to CSV.
    """
    configure_logging(verbose)
    ctx.ensure_object(dict)
    ctx.obj.setdefault("ui", UIController())

    if ctx.invoked_subcommand is None:
        _ui(ctx).print(
            Panel(
                "[bold blue]singular-kernels[/bold blue]\n\n"
                "Available commands:\n"
                "  [cyan]eval-2f1[/cyan]      Gauss hypergeometric function\n"
                "  [cyan]eval-fa[/cyan]       Lauricella F_A by one or all methods\n"
                "  [cyan]eval-fundsol[/cyan]  Fundamental solution q_k at a point\n"
                "  [cyan]verify[/cyan]        Numerical verification suites\n"
                "  [cyan]scan[/cyan]          Tabulate q_k on a grid as CSV\n\n"
                "Use [cyan]--help[/cyan] with any command for more information.",
                title="singular-kernels",
                border_style="blue",
            )
        )


@cli.command("eval-2f1")
@click.option("--a", "a", type=float, required=True, help="Upper parameter a")
@click.option("--b", "b", type=float, required=True, help="Upper parameter b")
@click.option("--c", "c", type=float, required=True, help="Lower parameter c")
@click.option("--x", "x", type=float, help="Argument, |x| < 1")
@click.option("--tol", type=float, default=1e-15, show_default=True)
@click.option(
    "--at-one", is_flag=True, help="Use the Gamma-quotient value at x = 1 instead"
)
@click.pass_context
def eval_2f1(
    ctx: click.Context,
    a: float,
    b: float,
    c: float,
    x: Optional[float],
    tol: float,
    at_one: bool,
) -> None:
    """Evaluate the Gauss function 2F1(a, b; c; x)."""
    try:
        p = GaussParams(a, b, c)
        if at_one:
            _ui(ctx).print(f"[value]{gauss_2f1_at_one(p)!r}[/value]")
            return
        if x is None:
            raise UserInputError(
                "Missing argument --x",
                user_guidance="Give --x with |x| < 1, or --at-one",
                error_code="MISSING_ARGUMENT",
            )
        result = gauss_2f1(p, x, tol)
    except KernelError as e:
        _fail(ctx, e, title="Evaluation Failed")
        return

    _show_result(ctx, f"2F1({a}, {b}; {c}; {x})", result)


def _fa_params(
    params_file: Optional[str],
    a: Optional[float],
    b: Optional[str],
    c: Optional[str],
    x: Optional[str],
) -> LauricellaParams:
    if params_file:
        try:
            data = toml.load(Path(params_file).expanduser())
        except (OSError, toml.TomlDecodeError) as e:
            raise UserInputError(
                f"Cannot read parameter file: {e}",
                error_code="PARAMS_FILE",
                input_value=params_file,
            )
        try:
            return LauricellaParams(
                float(data["a"]),
                tuple(float(v) for v in data["b"]),
                tuple(float(v) for v in data["c"]),
                tuple(float(v) for v in data["x"]),
            )
        except KeyError as e:
            raise UserInputError(
                f"Parameter file is missing {e}",
                user_guidance="Give a, b, c and x, the last three as arrays",
                error_code="PARAMS_FILE",
                input_value=params_file,
            )

    if a is None or not (b and c and x):
        raise UserInputError(
            "Give either --params FILE or all of --a, --b, --c, --x",
            error_code="MISSING_ARGUMENT",
        )
    return LauricellaParams(a, parse_vector(b), parse_vector(c), parse_vector(x))


@cli.command("eval-fa")
@click.option(
    "--params",
    "params_file",
    type=click.Path(exists=True, dir_okay=False),
    help="TOML file with a, b, c, x",
)
@click.option("--a", "a", type=float, help="Upper parameter a")
@click.option("--b", "b", help="Comma separated b_1..b_n")
@click.option("--c", "c", help="Comma separated c_1..c_n")
@click.option("--x", "x", help="Comma separated x_1..x_n")
@click.option(
    "--method",
    type=click.Choice(FA_METHODS),
    default="all",
    show_default=True,
    help="Evaluation method",
)
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--max-degree", type=int, help="Total-degree cap of the grid sums")
@click.pass_context
def eval_fa(
    ctx: click.Context,
    params_file: Optional[str],
    a: Optional[float],
    b: Optional[str],
    c: Optional[str],
    x: Optional[str],
    method: str,
    tol: float,
    max_degree: Optional[int],
) -> None:
    """Evaluate the Lauricella function F_A.

    With --method all the three series methods are compared side by side.
    The integral method needs c = 2b and non-positive arguments.
    """
    ui = _ui(ctx)
    try:
        p = _fa_params(params_file, a, b, c, x)
        if method == "all":
            results, differences = compare_methods(p, tol, max_degree)
        elif method == "direct":
            result = fa_direct(p, tol, max_degree)
        elif method == "decomposed":
            result = fa_decomposed(p, tol, max_degree)
        elif method == "integral":
            result = fa_integral(p, tol)
        else:
            result = fa_recurrence(p, tol, max_degree)
    except KernelError as e:
        _fail(ctx, e, title="Evaluation Failed")
        return

    if method == "all":
        ui.display_comparison(results, differences)
    else:
        _show_result(ctx, f"F_A^({p.n}) by {method}", result)


def _resolve_delta(
    config: RunConfig, delta: Optional[str], k: Optional[int]
) -> DeltaVector:
    n = config.problem.n
    if k is not None:
        return index_to_delta(k, n)
    if delta is None:
        return DeltaVector((0,) * n)
    d = DeltaVector(parse_vector(delta, int))
    d.check_length(n)
    return d


@cli.command("eval-fundsol")
@click.option("--config", "config_path", type=click.Path(), help="Run configuration")
@click.option("--x", "x", help="Comma separated evaluation point")
@click.option("--delta", help="Comma separated 0/1 selector, one per x_j")
@click.option("--k", "k", type=int, help="Solution index 1..2^n instead of --delta")
@click.option(
    "--path",
    "path",
    type=click.Choice([p.value for p in EvaluationPath]),
    default=EvaluationPath.AUTO.value,
    show_default=True,
)
@click.option(
    "--radial",
    type=click.Choice([r.value for r in RadialExponent]),
    default=RadialExponent.SHIFTED.value,
    show_default=True,
    help="Power of r^2 in front of F_A",
)
@click.option("--dump-config", type=click.Path(), help="Write the config and exit")
@click.pass_context
def eval_fundsol(
    ctx: click.Context,
    config_path: Optional[str],
    x: Optional[str],
    delta: Optional[str],
    k: Optional[int],
    path: str,
    radial: str,
    dump_config: Optional[str],
) -> None:
    """Evaluate the fundamental solution q_k(x, x0) of the configured problem."""
    try:
        config = _load_config(config_path)
        if dump_config:
            _dump_config(ctx, config, dump_config)
            return
        if x is None:
            raise UserInputError(
                "Missing argument --x",
                user_guidance="Give the evaluation point, for example --x 1,0.5,2",
                error_code="MISSING_ARGUMENT",
            )
        d = _resolve_delta(config, delta, k)
        result = evaluate_q(
            parse_vector(x),
            config.x0,
            config.problem,
            d,
            config.gamma,
            tol=config.tolerances.series,
            path=EvaluationPath(path),
            radial=RadialExponent(radial),
        )
    except KernelError as e:
        _fail(ctx, e, title="Evaluation Failed")
        return

    _show_result(
        ctx,
        f"q_{delta_to_index(d)}  delta={d.delta}",
        result,
        extra=[
            ("path", result.diagnostics["path"]),
            ("r^2", result.diagnostics["r2"]),
        ],
    )


def _run_suite(
    name: str, config: RunConfig, fa_n: int
) -> List[VerificationReport]:
    cfg, x0, gamma = config.problem, config.x0, config.gamma
    settings = config.verification

    if name == "pde":
        points = verify.sample_points(cfg, x0, settings.points, settings.seed)
        return [
            verify.pde_suite(
                cfg, x0, points, gamma, settings.h_factor, settings.fd_order
            )
        ]
    if name == "singularity":
        return [verify.singularity_suite(cfg, x0, gamma)]
    if name == "limit":
        report = VerificationReport("limit")
        for d, _ in solution_family(cfg, gamma):
            report.add(verify.limit_check(cfg, x0, d, gamma))
        return [report]
    if name == "boundary":
        return [verify.boundary_suite(cfg, x0, gamma)]
    if name == "identity":
        return [verify.identity_suite(cfg, x0)]
    if name == "decomposition":
        return [
            verify.index_suite(),
            verify.decomposition_suite(fa_n, settings.random_sets, settings.seed),
        ]
    if name == "gauss":
        return [verify.gauss_suite(settings.gauss_sets, settings.seed)]
    if name == "indices":
        return [verify.index_suite()]

    reports: List[VerificationReport] = []
    for suite in (
        "pde",
        "singularity",
        "boundary",
        "identity",
        "decomposition",
        "gauss",
    ):
        if suite == "singularity" and cfg.m <= 2:
            logger.info("Skipping singularity suite: m <= 2")
            continue
        reports.extend(_run_suite(suite, config, fa_n))
    return reports


def reports_to_toml(reports: List[VerificationReport]) -> str:
    """Machine-readable report: overall status and one table per suite."""
    document: Dict[str, object] = {
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    return toml.dumps(document)


@cli.command("verify")
@click.option("--config", "config_path", type=click.Path(), help="Run configuration")
@click.option(
    "--suite",
    type=click.Choice(SUITES),
    default="all",
    show_default=True,
    help="Verification suite to run",
)
@click.option("--report", "report_path", type=click.Path(), help="Write a TOML report")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(OUTPUT_FORMATS),
    help="Console output format (default from config)",
)
@click.option(
    "--fa-n", type=int, help="Number of variables for the decomposition suite"
)
@click.option("--dump-config", type=click.Path(), help="Write the config and exit")
@click.pass_context
def verify_command(
    ctx: click.Context,
    config_path: Optional[str],
    suite: str,
    report_path: Optional[str],
    output_format: Optional[str],
    fa_n: Optional[int],
    dump_config: Optional[str],
) -> None:
    """Run numerical verification suites.

    Exit code 0 when every asserted check passes, 1 when one fails, 2 on
    invalid input.
    """
    ui = _ui(ctx)
    try:
        config = _load_config(config_path)
        if dump_config:
            _dump_config(ctx, config, dump_config)
            return
        n_vars = fa_n or max(config.problem.n, 1)
        reports = _run_suite(suite, config, n_vars)
    except KernelError as e:
        _fail(ctx, e, title="Verification Aborted")
        return

    output_format = output_format or config.output.format
    report_path = report_path or config.output.report
    text = reports_to_toml(reports)
    if report_path:
        target = Path(report_path).expanduser()
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)

    if output_format == "toml":
        click.echo(text, nl=False)
    else:
        for report in reports:
            ui.display_report(report)
        ui.display_report_summary(reports)

    if not all(r.passed for r in reports):
        ctx.exit(EXIT_VERIFICATION_FAILED)


@cli.command()
@click.option("--config", "config_path", type=click.Path(), help="Run configuration")
@click.option("--delta", help="Comma separated 0/1 selector (default from config)")
@click.option(
    "--axis",
    "axes",
    multiple=True,
    help="start:stop:count, once per coordinate (default from config)",
)
@click.option("--out", "out_path", type=click.Path(), help="CSV output file")
@click.option("--dump-config", type=click.Path(), help="Write the config and exit")
@click.pass_context
def scan(
    ctx: click.Context,
    config_path: Optional[str],
    delta: Optional[str],
    axes: Tuple[str, ...],
    out_path: Optional[str],
    dump_config: Optional[str],
) -> None:
    """Tabulate q_k on a rectangular grid and write it as CSV.

    Nodes with a non-positive singular coordinate are skipped; the source
    node gets the value inf.
    """
    ui = _ui(ctx)
    try:
        config = _load_config(config_path)
        if dump_config:
            _dump_config(ctx, config, dump_config)
            return
        if not out_path:
            raise UserInputError(
                "Missing option --out",
                user_guidance="Give the CSV file to write, for example --out q.csv",
                error_code="MISSING_ARGUMENT",
            )
        d = parse_vector(delta, int) if delta is not None else None
        axis_specs = [parse_axis(text) for text in axes] or None
        nodes = total_nodes(axis_specs or config.scan.axes)
        ui.start_progress("Scanning", total=nodes)
        try:
            summary = scan_to_file(
                config, out_path, d, axis_specs, progress=ui.advance_progress
            )
        finally:
            ui.stop_progress()
    except KernelError as e:
        _fail(ctx, e, title="Scan Failed")
        return

    ui.display_success(
        f"Wrote {summary.rows} rows to {out_path}\n"
        f"Skipped nodes outside the domain: {summary.skipped}\n"
        f"Singular nodes: {summary.singular}",
        title="Scan Complete",
    )


def main(args: Optional[list] = None) -> int:
    """Main CLI entry point.

    Args:
        args: Command line arguments (defaults to sys.argv)

    Returns:
        Exit code (0 success, 1 verification failure, 2 usage or domain error)
    """
    try:
        result = cli.main(args=args, standalone_mode=False)
        return result if isinstance(result, int) else EXIT_OK
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        Console(stderr=True).print("\n[yellow]Operation cancelled by user.[/yellow]")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
