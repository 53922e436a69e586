#!/usr/bin/env python
"""
linmap CLI - Main entry point

Usage:
    # Exact counts
    linmap census-A -q 2 -n 3 --format json
    linmap census-B -q 3 -n 4 --inventory

    # Bounds and number theory
    linmap bounds -q 2 -n 5
    linmap sigma -q 2 --i-max 12
    linmap zsigmondy -q 2 --j-max 8

    # Brute force and the full invariant suite
    linmap oracle -q 2 -n 3
    linmap verify --workers 4

    # As module
    python -m linmap
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from typing import Iterator

import click
from rich.console import Console

from . import __version__, census, cyclegraph, ffield, numthy, oracle
from .constants import DEFAULT_SEED, EXIT_GUARD, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, OUTPUT_FORMATS
from .errors import LinmapError
from .formatting import Report, emit
from .settings import FactorCache, RunConfig, resolve_cache_path

console = Console(stderr=True)


def run_options(f):
    """--format, --cache, --workers and --seed, shared by every subcommand."""
    f = click.option('--seed', type=int, default=DEFAULT_SEED, show_default=True,
                     help='Seed for randomized suites')(f)
    f = click.option('--workers', type=click.IntRange(min=1), default=1, show_default=True,
                     help='Worker processes for census and oracle runs')(f)
    f = click.option('--cache', 'cache', type=click.Path(dir_okay=False),
                     help='Factor cache file (default: $LINMAP_CACHE or ./factor-cache.json)')(f)
    f = click.option('--format', 'output_format', type=click.Choice(OUTPUT_FORMATS), default='text',
                     show_default=True, help='Output format')(f)
    return f


q_option = click.option('-q', 'q', type=click.IntRange(min=2), required=True, help='Field size (a prime power)')
n_option = click.option('-n', 'n', type=click.IntRange(min=0), required=True, help='Dimension')


def make_config(command: str, output_format: str, cache: str | None, workers: int, seed: int, **values) -> RunConfig:
    if values.get('q') is not None:
        ffield.field_for_q(values['q'])
    return RunConfig(
        command=command,
        output_format=output_format,
        cache_path=resolve_cache_path(cache),
        workers=workers,
        seed=seed,
        **values,
    )


@contextmanager
def factor_cache(cfg: RunConfig) -> Iterator[FactorCache]:
    """Warm the factor memo from the cache file and write new entries back."""
    cache = FactorCache(cfg.cache_path)
    cache.warm()
    try:
        yield cache
    finally:
        cache.persist()


def census_report(result: census.CensusResult) -> Report:
    return Report(
        title=f"{result.kind}_{result.q}({result.n})",
        columns=('q', 'n', 'value', 'collisions'),
        rows=[(result.q, result.n, result.value, result.collisions)],
        payload=result.to_json(),
    )


@click.group()
@click.version_option(version=__version__)
def cli():
    """Functional graphs of linear maps over finite fields."""


@cli.command('census-A')
@q_option
@n_option
@click.option('--inventory', is_flag=True, help='Include the class inventory in JSON output')
@run_options
def census_a(q, n, inventory, output_format, cache, workers, seed):
    """A_q(n): classes of all linear maps on F_q^n."""
    cfg = make_config('census-A', output_format, cache, workers, seed, q=q, n=n)
    with factor_cache(cfg):
        result = census.count_A(q, n, cfg.workers, with_inventory=inventory)
    emit(census_report(result), cfg.output_format)
    return EXIT_OK


@cli.command('census-B')
@q_option
@n_option
@click.option('--inventory', is_flag=True, help='Include the class inventory in JSON output')
@run_options
def census_b(q, n, inventory, output_format, cache, workers, seed):
    """B_q(n): classes of invertible linear maps on F_q^n."""
    cfg = make_config('census-B', output_format, cache, workers, seed, q=q, n=n)
    with factor_cache(cfg):
        result = census.count_B(q, n, cfg.workers, with_inventory=inventory)
    emit(census_report(result), cfg.output_format)
    return EXIT_OK


@cli.command('bounds')
@q_option
@n_option
@run_options
def bounds(q, n, output_format, cache, workers, seed):
    """Lower and upper lambda-sum bounds for A_q(n)."""
    cfg = make_config('bounds', output_format, cache, workers, seed, q=q, n=n)
    with factor_cache(cfg):
        lower, total = census.bound_lower(q, n), census.upper_sum(q, n)
        upper = census.certified_ceil(n, total)
    emit(Report(
        title=f"Bounds for A_{q}({n})",
        columns=('q', 'n', 'lower', 'upper_sum', 'upper'),
        rows=[(q, n, lower, total, upper)],
        payload={'q': str(q), 'n': n, 'lower': str(lower), 'upper_sum': str(total), 'upper': str(upper)},
    ), cfg.output_format)
    return EXIT_OK


@cli.command('eq-main')
@q_option
@n_option
@run_options
def eq_main(q, n, output_format, cache, workers, seed):
    """Max-term bounds for A_q(n)."""
    cfg = make_config('eq-main', output_format, cache, workers, seed, q=q, n=n)
    with factor_cache(cfg):
        low, high_term = census.eq_main_terms(q, n)
        high = census.certified_ceil(n, (n + 1) * high_term)
    emit(Report(
        title=f"Max-term bounds for A_{q}({n})",
        columns=('q', 'n', 'maxterm_lower', 'maxterm_upper_product', 'maxterm_upper'),
        rows=[(q, n, low, high_term, high)],
        payload={'q': str(q), 'n': n, 'maxterm_lower': str(low),
                 'maxterm_upper_product': str(high_term), 'maxterm_upper': str(high)},
    ), cfg.output_format)
    return EXIT_OK


@cli.command('oracle')
@q_option
@n_option
@click.option('--no-fitting', is_flag=True, help='Skip the Fitting split check of every matrix')
@run_options
def oracle_cmd(q, n, no_fitting, output_format, cache, workers, seed):
    """Brute-force class counts over every n x n matrix."""
    cfg = make_config('oracle', output_format, cache, workers, seed, q=q, n=n)
    with console.status(f"[cyan]Scanning {q}^{n * n} matrices...[/cyan]"):
        report = oracle.scan(q, n, cfg.workers, check_fitting=not no_fitting)
    payload = report.to_json()
    emit(Report(
        title=f"Oracle over F_{q}, n = {n}",
        columns=tuple(payload),
        rows=[(q, n, report.total_maps, report.distinct_codes,
               report.invertible_distinct_codes, report.prop1_violations)],
        payload=payload,
    ), cfg.output_format)
    for violation in report.violations[:10]:
        console.print(f"[red]❌ {violation}[/red]")
    return EXIT_VIOLATION if report.prop1_violations else EXIT_OK


@cli.command('cycles')
@q_option
@click.option('--data', 'data_text', required=True, help="Blocks as 'm:s,...', e.g. '3:1,1:2'")
@run_options
def cycles(q, data_text, output_format, cache, workers, seed):
    """Cycle structure of the invertible maps with the given graph data."""
    cfg = make_config('cycles', output_format, cache, workers, seed, q=q)
    with factor_cache(cfg):
        data = census.GraphData.parse(data_text, q)
        structure = census.cycle_structure_of(data, q)
    emit(Report(
        title=f"Cycle structure over F_{q}",
        columns=('data', 'dimension', 'cycles'),
        rows=[(str(data), data.dimension, str(structure))],
        payload={'q': str(q), 'data': data.to_json(), 'dimension': data.dimension,
                 'cycles': structure.to_json()},
    ), cfg.output_format)
    return EXIT_OK


@cli.command('order')
@q_option
@click.option('--poly', 'poly_text', required=True, help="Coefficients low-degree first, e.g. '1,1,1'")
@run_options
def order(q, poly_text, output_format, cache, workers, seed):
    """Order of an irreducible polynomial over F_q."""
    cfg = make_config('order', output_format, cache, workers, seed, q=q)
    F = ffield.field_for_q(q)
    with factor_cache(cfg):
        f = ffield.parse_poly(poly_text, F)
        value = cyclegraph.poly_order(f, F)
    emit(Report(
        title=f"Order over F_{q}",
        columns=('poly', 'order'),
        rows=[(ffield.poly_to_str(f, F), value)],
        payload={'q': str(q), 'poly': ffield.format_poly(f, F), 'order': str(value)},
    ), cfg.output_format)
    return EXIT_OK


@cli.command('sigma')
@q_option
@click.option('--i-max', '--imax', 'i_max', type=click.IntRange(min=1), required=True, help='Largest i')
@run_options
def sigma(q, i_max, output_format, cache, workers, seed):
    """Divisor counts sigma_i and exact-order counts sigma_i*."""
    cfg = make_config('sigma', output_format, cache, workers, seed, q=q, i_max=i_max)
    with factor_cache(cfg):
        rows = numthy.sigma_table(q, i_max)
    emit(Report(title=f"sigma_i for q = {q}", columns=('i', 'sigma', 'sigma_star'), rows=rows),
         cfg.output_format)
    return EXIT_OK


@cli.command('zsigmondy')
@q_option
@click.option('--j-max', '--jmax', 'j_max', type=click.IntRange(min=1), required=True, help='Largest j')
@run_options
def zsigmondy(q, j_max, output_format, cache, workers, seed):
    """Smallest primitive prime divisor of q^j - 1 for each j."""
    cfg = make_config('zsigmondy', output_format, cache, workers, seed, q=q, j_max=j_max)
    with factor_cache(cfg):
        rows = numthy.zsigmondy_table(q, j_max)
    emit(Report(title=f"Primitive prime divisors for q = {q}", columns=('j', 'prime'), rows=rows),
         cfg.output_format)
    return EXIT_OK


@cli.command('growth')
@q_option
@click.option('--n-max', '--nmax', 'n_max', type=click.IntRange(min=1), required=True, help='Largest n')
@run_options
def growth(q, n_max, output_format, cache, workers, seed):
    """log A_q(n) against its bounds and n / log log n."""
    cfg = make_config('growth', output_format, cache, workers, seed, q=q, n_max=n_max)
    with factor_cache(cfg):
        rows = [row.as_tuple() for row in census.growth_report(q, n_max, cfg.workers)]
    emit(Report(title=f"Growth of A_{q}(n)", columns=census.GROWTH_COLUMNS, rows=rows), cfg.output_format)
    return EXIT_OK


@cli.command('factor-product')
@click.option('--cycles', 'cycles_text', required=True, help="Cycle multiset as 'len:mult,...'")
@run_options
def factor_product(cycles_text, output_format, cache, workers, seed):
    """Write a cycle multiset as a product of (C_1 + alpha C_k) factors."""
    cfg = make_config('factor-product', output_format, cache, workers, seed)
    g = cyclegraph.CycleMultiset.parse(cycles_text)
    pf = cyclegraph.factor_product(g)
    emit(Report(
        title="Product form",
        columns=('k', 'alpha'),
        rows=list(pf.factors),
        payload={'cycles': g.to_json(), 'factors': pf.to_json()},
    ), cfg.output_format)
    return EXIT_OK


@cli.command('verify')
@click.option('--quick', is_flag=True, help='Smaller grids for a fast smoke run')
@click.option('--suite', 'suites', multiple=True, help='Run only the named suite (repeatable)')
@run_options
def verify(quick, suites, output_format, cache, workers, seed):
    """Run every invariant suite and report pass/fail counts."""
    from .verify import SUITES, run_verify

    known = {name for name, _ in SUITES}
    unknown = [s for s in suites if s not in known]
    if unknown:
        raise click.BadParameter(f"unknown suite(s): {', '.join(unknown)}", param_hint='--suite')
    cfg = make_config('verify', output_format, cache, workers, seed)
    with factor_cache(cfg):
        results = run_verify(seed=cfg.seed, workers=cfg.workers, quick=quick, only=list(suites))
    emit(Report(
        title="Invariant suites",
        columns=('suite', 'passed', 'failed'),
        rows=[(r.name, r.passed, r.failed) for r in results],
    ), cfg.output_format)
    if all(r.ok for r in results):
        console.print("[green]✅ All suites passed[/green]")
        return EXIT_OK
    console.print("[red]❌ Invariant violations found[/red]")
    return EXIT_VIOLATION


def run(argv: list[str] | None = None) -> int:
    """Run the CLI and map outcomes to exit codes."""
    try:
        rv = cli.main(args=argv, prog_name='linmap', standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        console.print("[red]Cancelled[/red]")
        return EXIT_GUARD
    except (LinmapError, ValueError, ZeroDivisionError) as e:
        console.print(f"[red]❌ {type(e).__name__}: {e}[/red]")
        return EXIT_GUARD
    return rv if isinstance(rv, int) else EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
