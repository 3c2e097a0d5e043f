"""modhyp: sumsets and difference sets of modular hyperbolas from the shell.

    modhyp ratio --a 11 --n 441
    modhyp card --a 1 --n 8
    modhyp verify --max-pp 1024 --max-n 300
    modhyp scan --a 4 --max-n 3000 --format csv
    modhyp plot --a 51 --n 1024 --out h51.svg

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1 usage
or precondition error, 2 computation error.
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

import click
from loguru import logger

from components.charts import write_plot
from components.reports import FORMATS, write_reports
from services.analysis_service import AnalysisService, Classification, DominanceReport
from services.cardinality_service import CardinalityService
from services.hyperbola_service import HyperbolaService, HyperbolaSpec
from services.tracking_service import TrackingService
from services.verification_service import VerificationService
from utils.arith import factorize
from utils.data_utils import format_residues, parse_ratio
from utils.exceptions import (
    ConfigurationError,
    InvariantViolationError,
    ModHypError,
    PartialResultError,
    PreconditionError,
)
from utils.settings import Settings, get_settings


@dataclass(frozen=True)
class CommandConfig:
    settings: Settings
    fmt: str

    @property
    def threads(self) -> int:
        return self.settings.threads

    @property
    def budget(self) -> int:
        return self.settings.budget


def _emit(config: CommandConfig, reports: Iterable[Any], kind: str | None = None) -> None:
    click.echo(write_reports(reports, config.fmt, kind), nl=False)


@click.group()
@click.option("--threads", type=click.IntRange(min=1), envvar="MODHYP_THREADS", default=None,
              help="Worker count for scans and sumsets (default: hardware count).")
@click.option("--budget", type=click.IntRange(min=1), default=None,
              help="Largest phi(n)^(d-1) the oracle may enumerate.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="table", show_default=True)
@click.option("--verbose", is_flag=True, help="Log at DEBUG level.")
@click.pass_context
def cli(ctx: click.Context, threads: int | None, budget: int | None, fmt: str, verbose: bool) -> None:
    """Coordinate sumsets and difference sets of xy = a mod n"""
    settings = get_settings()
    overrides = {k: v for k, v in (("threads", threads), ("budget", budget)) if v is not None}
    if verbose:
        overrides["log_level"] = "DEBUG"
    settings = dataclasses.replace(settings, **overrides)
    TrackingService.setup_logger(settings.log_level)
    ctx.obj = CommandConfig(settings, fmt)
    logger.debug("settings {}", settings)


@cli.command("enumerate")
@click.option("--d", "d", type=int, default=2, show_default=True)
@click.option("--m", "m", type=int, default=None, help="Plus signs (default: d).")
@click.option("--a", "a", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--sumset", is_flag=True, help="Emit the residues of S_d(m;a;n) instead of the points.")
@click.pass_obj
def enumerate_command(config: CommandConfig, d: int, m: int | None, a: int, n: int, sumset: bool) -> None:
    """Points of H_d(a;n), or the signed sumset"""
    spec = HyperbolaSpec(d, d if m is None else m, a, n)
    TrackingService.log_activity("enumerate", {"spec": str(spec), "sumset": sumset})
    if sumset:
        residues = HyperbolaService.signed_sumset(spec, budget=config.budget, workers=config.threads)
        _emit(config, ({"residue": r} for r in residues), kind="sumset")
        return
    points = HyperbolaService.enumerate_points(spec, budget=config.budget)
    rows = [{f"x{i + 1}": x for i, x in enumerate(point)} for point in points]
    _emit(config, rows, kind="points")


@cli.command()
@click.option("--a", "a", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--d", "d", type=int, default=2, show_default=True)
@click.option("--m", "m", type=int, default=None, help="Plus signs (default: d).")
@click.pass_obj
def card(config: CommandConfig, a: int, n: int, d: int, m: int | None) -> None:
    """Size of S_d(m;a;n) with the method used for each prime power"""
    spec = HyperbolaSpec(d, d if m is None else m, a, n)
    TrackingService.log_activity("card", {"spec": str(spec)})
    try:
        report = CardinalityService.card_signed_sumset(spec, budget=config.budget)
    except PartialResultError as e:
        for f in e.computed:
            logger.warning("{}^{}: {} ({})", f.p, f.t, f.count, f.method.value)
        raise
    _emit(config, [report])


@cli.command()
@click.option("--a", "a", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.pass_obj
def ratio(config: CommandConfig, a: int, n: int) -> None:
    """c_2(a;n) = #S_2 / #D_2 with its classification"""
    TrackingService.log_activity("ratio", {"a": a, "n": n})
    factorization = factorize(n)
    c2 = CardinalityService.ratio_c2(a, n, factorization).value
    breakdown = tuple(CardinalityService.ratio_breakdown(a, factorization))
    for p, t, r in breakdown:
        logger.info("c_2({};{}^{}) = {}", a, p, t, r)
    _emit(config, [DominanceReport(a, n, c2, Classification.of(c2), breakdown)])


@cli.command()
@click.option("--max-pp", type=click.IntRange(min=2), default=256, show_default=True,
              help="Check every prime power up to this bound against the oracle.")
@click.option("--max-n", type=click.IntRange(min=0), default=0, show_default=True,
              help="Also check multiplicativity and reflection for n up to this bound.")
@click.option("--samples", type=click.IntRange(min=1), default=20, show_default=True,
              help="Units a drawn per modulus once exhaustive checking stops.")
@click.option("--two-primes", is_flag=True, help="Check the two-prime dominance rule for p < q <= 50.")
@click.option("--coverage-max-n", type=click.IntRange(min=0), default=0, show_default=True,
              help="Check full coverage of S_3 for n up to this bound with every prime factor above 7.")
@click.option("--solver", is_flag=True, help="Run the sum-product solver over p in 11, 13, 17, 19.")
@click.pass_obj
def verify(
    config: CommandConfig,
    max_pp: int,
    max_n: int,
    samples: int,
    two_primes: bool,
    coverage_max_n: int,
    solver: bool,
) -> None:
    """Closed forms against exhaustive enumeration; exit 2 on any mismatch"""
    TrackingService.log_activity("verify", {"max_pp": max_pp, "max_n": max_n, "two_primes": two_primes,
                                            "coverage_max_n": coverage_max_n, "solver": solver})
    results = [VerificationService.verify_prime_powers(max_pp, budget=config.budget)]
    if max_n >= 2:
        results.append(VerificationService.verify_multiplicativity(max_n, samples=samples, budget=config.budget))
        results.append(VerificationService.verify_reflection(max_n, budget=config.budget))
    if two_primes:
        results.append(VerificationService.verify_two_primes())
    if coverage_max_n >= 11:
        results.append(VerificationService.verify_coverage(coverage_max_n, samples=samples, budget=config.budget))
    if solver:
        results.append(VerificationService.verify_solver())
    _emit(config, results)
    failed = [r.name for r in results if not r.ok]
    if failed:
        raise InvariantViolationError(f"mismatches in {', '.join(failed)}")


@cli.command()
@click.option("--a", "a", type=int, required=True)
@click.option("--max-n", type=click.IntRange(min=2), required=True)
@click.option("--L", "threshold", type=str, default="1", show_default=True, help="Threshold as num/den.")
@click.pass_obj
def scan(config: CommandConfig, a: int, max_n: int, threshold: str) -> None:
    """Dominance report for every 2 <= n <= max-n coprime to a"""
    L = parse_ratio(threshold)
    TrackingService.log_activity("scan", {"a": a, "max_n": max_n, "L": str(L)})
    result = AnalysisService.dominance_scan(a, max_n, L, workers=config.threads)
    logger.info("{} of {} moduli have c_2 > {}", result.above_threshold, len(result), L)
    _emit(config, result.reports, kind="dominance")


@cli.command()
@click.option("--a", "a", type=int, required=True)
@click.option("--max-n", type=click.IntRange(min=2), required=True)
@click.option("--L", "threshold", type=str, default="1", show_default=True, help="Threshold as num/den.")
@click.option("--residue-sign", type=click.Choice(["1", "-1"]), default="1", show_default=True,
              help="-1 reads the report backwards (non-residues, c_2 < 1/L).")
@click.pass_obj
def density(config: CommandConfig, a: int, max_n: int, threshold: str, residue_sign: str) -> None:
    """Share of sum-dominant n next to the K_a lower bound"""
    L = parse_ratio(threshold)
    TrackingService.log_activity("density", {"a": a, "max_n": max_n, "L": str(L), "residue_sign": residue_sign})
    report = AnalysisService.density_report(a, max_n, L, int(residue_sign), workers=config.threads)
    _emit(config, [report])


@cli.command()
@click.option("--a", "a", type=int, required=True)
@click.option("--k-max", type=click.IntRange(min=1), required=True)
@click.option("--t", "t", type=click.IntRange(min=2), default=2, show_default=True)
@click.pass_obj
def primorial(config: CommandConfig, a: int, k_max: int, t: int) -> None:
    """c_2 at products of the first k primes congruent to 3 mod 4"""
    TrackingService.log_activity("primorial", {"a": a, "k_max": k_max, "t": t})
    _emit(config, [AnalysisService.primorial_series(a, k_max, t)])


@cli.command()
@click.option("--d", "d", type=int, default=3, show_default=True)
@click.option("--m", "m", type=int, default=None, help="Plus signs (default: d).")
@click.option("--a", "a", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.pass_obj
def coverage(config: CommandConfig, d: int, m: int | None, a: int, n: int) -> None:
    """Residues missing from S_d(m;a;n), d >= 3"""
    spec = HyperbolaSpec(d, d if m is None else m, a, n)
    TrackingService.log_activity("coverage", {"spec": str(spec)})
    report = AnalysisService.coverage_check(spec, budget=config.budget, workers=config.threads)
    if len(report.missing):
        logger.info("{} misses {}", spec, format_residues(report.missing.to_list()))
    _emit(config, [report])


@cli.command()
@click.option("--b", "b", type=int, required=True)
@click.option("--a", "a", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--t", "t", type=click.IntRange(min=1), default=1, show_default=True)
@click.pass_obj
def solve3(config: CommandConfig, b: int, a: int, p: int, t: int) -> None:
    """Units x1 + x2 + x3 = b, x1 x2 x3 = a mod p^t"""
    TrackingService.log_activity("solve3", {"b": b, "a": a, "p": p, "t": t})
    x1, x2, x3 = AnalysisService.solve_sum_product(b, a, p, t)
    _emit(config, [{"b": b, "a": a, "p": p, "t": t, "x1": x1, "x2": x2, "x3": x3}], kind="solve")


@cli.command()
@click.option("--a", "a", type=int, required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="Output file; .html writes an interactive page, anything else SVG.")
@click.pass_obj
def plot(config: CommandConfig, a: int, n: int, out: Path) -> None:
    """Scatter plot of H_2(a;n)"""
    TrackingService.log_activity("plot", {"a": a, "n": n, "out": str(out)})
    x, y = HyperbolaService.planar_points(a, n, budget=config.budget)
    write_plot(out, x.tolist(), y.tolist(), HyperbolaSpec.sums(a, n).a, n)
    logger.info("wrote {} points to {}", x.size, out)


def run(argv: list[str] | None = None) -> int:
    """Run the command line and return its exit code instead of exiting"""
    try:
        rv = cli.main(args=argv, prog_name="modhyp", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return 1
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except (PreconditionError, ConfigurationError) as e:
        click.echo(f"Error: {e}", err=True)
        return 1
    except ModHypError as e:
        click.echo(f"Error: {e}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
