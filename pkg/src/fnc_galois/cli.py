"""Command-line interface for fnc-galois."""

import functools
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn

from . import __version__
from .config import EngineConfig, RunConfig, load_engine_config, resolve_threads
from .errors import ConsistencyError, FieldError, FncGaloisError, InvalidParams, NotDivisible
from .fncurve import (
    build_curve,
    check_frobenius_nonclassical,
    count_points,
    frobenius_oracle,
    working_curve,
    working_extension,
)
from .galois import Verdict, analyze_point, parse_candidates, scan, summarize
from .geom import ProjPoint
from .local import find_singular_points
from .reporter import ReportGenerator, to_json
from .suite import ScenarioRunner, discover_scenarios

console = Console(stderr=True)


class ValidationFailed(click.ClickException):
    exit_code = 1


class ConsistencyFailed(click.ClickException):
    exit_code = 2


class InconclusiveScan(click.ClickException):
    exit_code = 3


def translate_errors(f):
    """Map library exceptions onto the CLI exit codes."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (InvalidParams, ValidationError) as e:
            raise ValidationFailed(str(e)) from e
        except (ConsistencyError, NotDivisible) as e:
            raise ConsistencyFailed(f"internal consistency failure: {e}") from e
        except FncGaloisError as e:
            raise ConsistencyFailed(f"{type(e).__name__}: {e}") from e

    return wrapper


def curve_options(f):
    """-q/-n/-m plus the output options every curve command shares."""
    options = [
        click.option("-q", "q", type=int, required=True, help="Field size q (a prime power)"),
        click.option("-n", "n", type=int, required=True, help="Exponent n of the first Frobenius power"),
        click.option("-m", "m", type=int, required=True, help="Exponent m of the second Frobenius power (1 <= m < n)"),
        click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json",
                     show_default=True, help="Output format"),
        click.option("--output", type=click.Path(path_type=Path), help="Write the report to this file"),
        click.option("--threads", type=int, help="Worker threads (falls back to FNC_GALOIS_THREADS)"),
        click.option("--seed", type=int, default=0, show_default=True, help="Seed for sampled points and lines"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _engine_config(ctx: click.Context) -> EngineConfig:
    obj = ctx.ensure_object(dict)
    if "engine" not in obj:
        obj["engine"] = load_engine_config(obj.get("config_path"))
    return obj["engine"]


def _run_config(ctx: click.Context, command: str, q: int, n: int, m: int, fmt: str,
                output: Optional[Path], threads: Optional[int], seed: int, **extra: Any) -> RunConfig:
    engine = _engine_config(ctx)
    return RunConfig(command=command, q=q, n=n, m=m, format=fmt, output=output,
                     threads=resolve_threads(threads, engine), seed=seed, **extra)


def _working(run: RunConfig, engine: EngineConfig):
    max_ext = run.max_ext or engine.max_ext
    ext = run.work_ext or engine.work_ext
    if ext is None:
        ext = working_extension(run.params, engine.field_size_cap, max_ext)
    return working_curve(run.params, ext)


def _field_name(wc) -> str:
    return f"GF({wc.params.q}^{wc.ext})"


def emit(report: Dict[str, Any], run: RunConfig, generator: ReportGenerator) -> None:
    """JSON through click.echo; text as a markdown summary plus a rich table."""
    if run.format == "json":
        text = to_json(report)
        if run.output:
            run.output.write_text(text + "\n")
            console.print(f"💾 [green]Report written to {run.output}[/green]")
        else:
            click.echo(text)
        return

    summary = generator.generate_human_readable_summary(report)
    if run.output:
        run.output.write_text(summary)
        console.print(f"💾 [green]Report written to {run.output}[/green]")
        return
    click.echo(summary)
    table = generator.render_table(report)
    if table is not None and table.row_count:
        Console().print(table)


@click.group()
@click.version_option(version=__version__, prog_name="fnc-galois")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Engine configuration YAML")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[Path]):
    """fnc-galois - Frobenius nonclassical plane curves and their Galois points."""
    ctx.ensure_object(dict)["config_path"] = config_path


# -- curve -------------------------------------------------------------------------


@cli.group()
def curve():
    """Build curves and check Frobenius nonclassicality."""


@curve.command("build")
@curve_options
@click.option("--emit-poly", is_flag=True, help="Include the full polynomial")
@click.pass_context
@translate_errors
def curve_build(ctx, q, n, m, fmt, output, threads, seed, emit_poly):
    """Construct F = D1/D2 and report its degree and term count."""
    run = _run_config(ctx, "curve build", q, n, m, fmt, output, threads, seed)
    c = build_curve(run.params)
    fnc = {
        "n": check_frobenius_nonclassical(c, run.n),
        "m": check_frobenius_nonclassical(c, run.m),
    }
    generator = ReportGenerator(run.seed)
    emit(generator.generate_curve_report(c, fnc, emit_poly), run, generator)


@curve.command("check-fnc")
@curve_options
@click.option("--power", "power", type=int, required=True, help="Frobenius power N to test (q^N)")
@click.option("--oracle", is_flag=True, help="Also evaluate the identity at random smooth points")
@click.option("--oracle-ext", type=int, help="Extension degree for the oracle points")
@click.pass_context
@translate_errors
def curve_check_fnc(ctx, q, n, m, fmt, output, threads, seed, power, oracle, oracle_ext):
    """Test whether F is q^N-Frobenius nonclassical."""
    run = _run_config(ctx, "curve check-fnc", q, n, m, fmt, output, threads, seed)
    engine = _engine_config(ctx)
    c = build_curve(run.params)
    nonclassical = check_frobenius_nonclassical(c, power)
    result = None
    if oracle:
        result = frobenius_oracle(c, power, oracle_ext, engine.oracle_points, run.seed)
        if nonclassical and not result.holds:
            raise ConsistencyError(f"identity holds symbolically but fails at {result.witness}")
    generator = ReportGenerator(run.seed)
    emit(generator.generate_fnc_report(c, power, nonclassical, result), run, generator)


# -- sing --------------------------------------------------------------------------


@cli.group()
def sing():
    """Singular points of F."""


@sing.command("report")
@curve_options
@click.option("--max-ext", type=int, help="Search ℙ²(GF(q^j)) for j up to this bound (default n-1)")
@click.option("--work-ext", type=int, help="Override the working extension degree")
@click.pass_context
@translate_errors
def sing_report(ctx, q, n, m, fmt, output, threads, seed, max_ext, work_ext):
    """Find, classify and compare singular points with the predicted locus."""
    run = _run_config(ctx, "sing report", q, n, m, fmt, output, threads, seed,
                      max_ext=max_ext, work_ext=work_ext)
    engine = _engine_config(ctx)
    wc = _working(run, engine)
    report = find_singular_points(wc, run.max_ext or engine.max_ext)
    generator = ReportGenerator(run.seed)
    emit(generator.generate_singularity_report(report, _field_name(wc)), run, generator)


# -- galois ------------------------------------------------------------------------


@cli.group()
def galois():
    """Galois point certification."""


@galois.command("certify")
@curve_options
@click.option("--point", "point", required=True, help='Center as "(a : b : c)"')
@click.option("--search-ext", type=int, default=1, show_default=True,
              help="Search deck parameters in GF(q^S)")
@click.option("--work-ext", type=int, help="Override the working extension degree")
@click.pass_context
@translate_errors
def galois_certify(ctx, q, n, m, fmt, output, threads, seed, point, search_ext, work_ext):
    """Certify one point as Galois or not Galois."""
    run = _run_config(ctx, "galois certify", q, n, m, fmt, output, threads, seed,
                      search_ext=search_ext, work_ext=work_ext, candidates=[point])
    engine = _engine_config(ctx)
    wc = _working(run, engine)
    try:
        P = ProjPoint.parse(wc.ctx, point)
    except (ValueError, FieldError) as e:
        raise InvalidParams(f"cannot parse point {point!r}: {e}") from e
    verdict = analyze_point(wc, P, engine, run.search_ext, np.random.default_rng([run.seed, 0]))
    generator = ReportGenerator(run.seed)
    emit(generator.generate_galois_report(run.params, [verdict], _field_name(wc), include_deck=True),
         run, generator)


@galois.command("scan")
@curve_options
@click.option("--candidates", "candidates", multiple=True, default=("base",), show_default=True,
              help="base, ext:J, ext:J:COUNT, offcurve:COUNT[:J] or a file of points (repeatable)")
@click.option("--search-ext", type=int, default=1, show_default=True,
              help="Search deck parameters in GF(q^S)")
@click.option("--work-ext", type=int, help="Override the working extension degree")
@click.option("--line-budget", type=int, help="Random lines tried per candidate")
@click.option("--strict", is_flag=True, help="Exit 3 when every verdict is inconclusive")
@click.pass_context
@translate_errors
def galois_scan(ctx, q, n, m, fmt, output, threads, seed, candidates, search_ext, work_ext,
                line_budget, strict):
    """Certify every candidate point."""
    run = _run_config(ctx, "galois scan", q, n, m, fmt, output, threads, seed,
                      search_ext=search_ext, work_ext=work_ext, candidates=list(candidates),
                      strict=strict)
    engine = _engine_config(ctx)
    if line_budget is not None:
        if line_budget < 0:
            raise InvalidParams(f"--line-budget must be >= 0, got {line_budget}")
        engine = engine.model_copy(update={"line_budget": line_budget})
    wc = _working(run, engine)
    points = parse_candidates(wc, run.candidates, run.seed)

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task(f"Scanning {len(points)} candidate(s)", total=len(points))
        verdicts = scan(wc, points, engine, run.search_ext, run.seed, run.threads,
                        on_done=lambda _: progress.advance(task))

    generator = ReportGenerator(run.seed)
    emit(generator.generate_galois_report(run.params, verdicts, _field_name(wc)), run, generator)
    counts = summarize(verdicts)
    if run.strict and verdicts and counts["inconclusive"] == len(verdicts):
        raise InconclusiveScan(f"all {len(verdicts)} verdict(s) are {Verdict.INCONCLUSIVE.value}")


# -- points ------------------------------------------------------------------------


@cli.group()
def points():
    """Rational points of F."""


@points.command("count")
@curve_options
@click.option("--ext", "ext", type=int, default=1, show_default=True, help="Count points over GF(q^ext)")
@click.pass_context
@translate_errors
def points_count(ctx, q, n, m, fmt, output, threads, seed, ext):
    """Count the zeros of F in ℙ²(GF(q^ext))."""
    run = _run_config(ctx, "points count", q, n, m, fmt, output, threads, seed)
    if ext < 1:
        raise InvalidParams(f"--ext must be >= 1, got {ext}")
    count = count_points(build_curve(run.params), ext, run.threads)
    generator = ReportGenerator(run.seed)
    emit(generator.generate_points_report(run.params, ext, count), run, generator)


# -- suite -------------------------------------------------------------------------


@cli.group()
def suite():
    """Scenario regression suite."""


@suite.command("run")
@click.option("--scenarios", "scenarios_path", type=click.Path(exists=True, path_type=Path),
              default="scenarios", show_default=True, help="Scenario file or directory")
@click.option("--golden-dir", type=click.Path(file_okay=False, path_type=Path), default="testdata",
              show_default=True, help="Directory of golden JSON reports")
@click.option("--tag", "tags", multiple=True, help="Only run scenarios with this tag (repeatable)")
@click.option("--record", is_flag=True, help="Write golden files instead of comparing")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)
@click.option("--output", type=click.Path(path_type=Path), help="Write the suite report to this file")
@click.option("--threads", type=int, help="Worker threads (falls back to FNC_GALOIS_THREADS)")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
@click.pass_context
@translate_errors
def suite_run(ctx, scenarios_path, golden_dir, tags, record, fmt, output, threads, verbose):
    """Run scenarios and compare them with their golden reports."""
    engine = _engine_config(ctx)
    files = discover_scenarios(scenarios_path, list(tags))
    if not files:
        console.print(f"[yellow]Warning: no scenarios found under {scenarios_path}[/yellow]")
    runner = ScenarioRunner(golden_dir, engine, resolve_threads(threads, engine), verbose)
    results: List[Dict[str, Any]] = runner.run_all(files, record)

    generator = ReportGenerator()
    report = generator.generate_suite_report(results)
    if fmt == "json":
        text = to_json(report)
        if output:
            output.write_text(text + "\n")
        else:
            click.echo(text)
    else:
        summary = generator.generate_human_readable_summary(report)
        if output:
            output.write_text(summary)
        else:
            click.echo(summary)
            Console().print(generator.render_table(report))
    if report["summary"]["failed"]:
        raise ConsistencyFailed(f"{report['summary']['failed']} scenario(s) failed")


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        result = cli.main(args=argv, prog_name="fnc-galois", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return 1
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        console.print("❌ [red]Aborted[/red]")
        return 1
    return result if isinstance(result, int) else 0


def cli_main() -> None:
    sys.exit(main())
