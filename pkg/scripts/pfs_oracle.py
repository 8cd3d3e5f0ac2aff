#!/usr/bin/env python3
"""
PFS Throughput Oracle - command-line front end

Subcommands:
    evaluate       run throughput models (and optionally the simulator) on a scenario
    simulate       run the Monte-Carlo PFS simulator only
    gain-table     PFS SINR gain versus number of terminals
    converge       ultra-dense convergence sweep
    generate-drop  write a random single-cell scenario
    config         show the active configuration
"""
import functools
import sys
from pathlib import Path
from typing import Optional

sys.path.insert(0, str(Path(__file__).parent.parent))

import click
from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn

from config.settings import DEFAULT_MCS_TABLE, export_config, oracle_config, print_configuration, validate_configuration
from src import __version__
from src.exceptions import PfsOracleError, UsageError
from src.exporters import FileExporter, render_table
from src.models.mcs import load_mcs_table
from src.processors import (
    ThroughputEvaluator,
    convergence_sweep,
    gain_table,
    parse_models,
    rate_column
)
from src.scenario import DropParams, compute_link_profiles, generate_drop, load_scenario, save_scenario
from src.simulator import FadingConfig, SimConfig, run_pfs
from src.utils.helpers import ensure_extension, format_rate, sanitize_filename
from src.utils.logger import get_logger

# Status output goes to stderr; stdout carries CSV when no --out is given
console = Console(stderr=True)
logger = get_logger(__name__)

FORMATS = click.Choice(export_config.FORMATS)


def handle_errors(func):
    """Turn library errors into click errors with the right exit codes"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except UsageError as e:
            raise click.UsageError(str(e))
        except PfsOracleError as e:
            field = getattr(e, 'field', None)
            prefix = f"[{field}] " if field else ""
            console.print(f"[bold red]Error:[/bold red] {prefix}{e}")
            logger.error(f"{type(e).__name__}: {e}")
            sys.exit(1)
    return wrapper


def _emit(frame, out: Optional[str], fmt: str, title: str = '', errors=None, column_for=None):
    exporter = FileExporter()
    if fmt == 'pretty':
        render_table(frame, title=title, console=Console(), errors=errors, column_for=column_for)
    if out:
        path = exporter.export_csv(frame, out, errors=errors, column_for=column_for)
        console.print(f"[green]Wrote {path}[/green]")
    elif fmt == 'csv':
        click.echo(exporter.to_csv_text(frame, errors=errors, column_for=column_for), nl=False)


def _sim_progress(progress: Progress, description: str):
    task = progress.add_task(description, total=None)

    def update(done: int, total: int):
        progress.update(task, completed=done, total=total)
    return update


def _progress() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        console=console,
        transient=True
    )


def _sim_config(scenario, slots, window, seed, fading, pfs, mcs_rule, warmup=None, frequency_flat=False):
    return SimConfig(
        slots=slots,
        window=window or scenario.frame.window,
        seed=seed,
        fading=FadingConfig.parse(fading),
        pfs_metric=pfs,
        mcs_rule=mcs_rule,
        warmup=warmup,
        frequency_flat=frequency_flat
    )


def scenario_option(func):
    return click.option('--scenario', 'scenario_path', required=True, type=click.Path(exists=True, dir_okay=False),
                        help='Scenario JSON file')(func)


def mcs_option(func):
    return click.option('--mcs', 'mcs_path', default=str(DEFAULT_MCS_TABLE), show_default=True,
                        type=click.Path(exists=True, dir_okay=False), help='MCS table (threshold dB, efficiency)')(func)


def output_options(func):
    func = click.option('--format', 'fmt', type=FORMATS, default='csv', show_default=True)(func)
    return click.option('--out', type=click.Path(dir_okay=False), default=None,
                        help='Output CSV (default: stdout)')(func)


def simulation_options(func):
    func = click.option('--mcs-rule', type=click.Choice(['relaxed', 'unique']), default='relaxed',
                        show_default=True, help='Per-RB MCS or one MCS per co-scheduled set')(func)
    func = click.option('--pfs', type=click.Choice(['sinr', 'rate']), default='sinr', show_default=True,
                        help='PFS metric')(func)
    func = click.option('--fading', default='iid', show_default=True, help="'iid' or 'gm:RHO'")(func)
    func = click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True)(func)
    func = click.option('--window', type=click.IntRange(min=1), default=None,
                        help='PFS window W in slots (default: scenario frame)')(func)
    return func


def threads_option(func):
    return click.option('--threads', type=click.IntRange(min=1), default=None,
                        help=f'Worker threads (default PFS_ORACLE_THREADS={oracle_config.THREADS})')(func)


@click.group()
@click.version_option(version=__version__, message='%(version)s')
def cli():
    """Expected throughput of proportional fair scheduling in interference-limited OFDMA cells"""


@cli.command()
@scenario_option
@mcs_option
@click.option('--models', default='', help='Comma-separated models, or "all"')
@click.option('--slots', type=click.IntRange(min=2), default=None, help='Also simulate this many slots')
@simulation_options
@threads_option
@click.option('--cross-check/--no-cross-check', default=False, help='Verify closed forms by quadrature')
@output_options
@handle_errors
def evaluate(scenario_path, mcs_path, models, slots, window, seed, fading, pfs, mcs_rule, threads,
             cross_check, out, fmt):
    """Per-terminal expected throughput under the requested models"""
    requested = parse_models(models)
    if not requested and slots is None:
        raise UsageError("Nothing to do: pass --models and/or --slots")

    scenario = load_scenario(Path(scenario_path))
    table = load_mcs_table(mcs_path)
    sim_cfg = None
    if slots is not None:
        sim_cfg = _sim_config(scenario, slots, window, seed, fading, pfs, mcs_rule)

    evaluator = ThroughputEvaluator(table, threads=threads, cross_check=cross_check)
    with _progress() as progress:
        callback = _sim_progress(progress, "Simulating...") if sim_cfg else None
        report = evaluator.evaluate(scenario, requested, sim_cfg, progress=callback)

    _emit(report.frame, out, fmt, title=scenario.name or 'Throughput', errors=report.errors,
          column_for=rate_column)

    for note in report.fallbacks:
        logger.debug(note)
    if report.has_failures:
        console.print(f"[bold red]{len(report.errors)} terminal/model evaluation(s) failed[/bold red]")
        sys.exit(1)


@cli.command()
@scenario_option
@mcs_option
@click.option('--slots', type=click.IntRange(min=2), required=True, help='Slots to simulate')
@simulation_options
@click.option('--warmup', type=click.IntRange(min=0), default=None, help='Slots excluded (default: W)')
@click.option('--frequency-flat/--frequency-selective', default=False,
              help='Share one fading draw across all RBs')
@output_options
@handle_errors
def simulate(scenario_path, mcs_path, slots, window, seed, fading, pfs, mcs_rule, warmup, frequency_flat,
             out, fmt):
    """Monte-Carlo PFS simulation"""
    scenario = load_scenario(Path(scenario_path))
    frame_cfg = scenario.frame_config
    table = load_mcs_table(mcs_path, n_s=frame_cfg.n_s, n_c=frame_cfg.n_c)
    cfg = _sim_config(scenario, slots, window, seed, fading, pfs, mcs_rule, warmup, frequency_flat)

    with _progress() as progress:
        result = run_pfs(compute_link_profiles(scenario), table, cfg, frame_cfg,
                         progress=_sim_progress(progress, "Simulating..."),
                         terminal_ids=[t.id for t in scenario.terminals])

    frame = result.to_frame()
    _emit(frame, out, fmt, title=f"Simulation ({slots} slots)")
    console.print(f"Mean terminal throughput: {format_rate(float(result.throughput.mean()))}")


@cli.command('gain-table')
@click.option('--max-j', 'max_j', type=int, default=30, show_default=True, help='Largest |J|')
@output_options
@handle_errors
def gain_table_cmd(max_j, out, fmt):
    """PFS SINR gain G(J) next to the harmonic number H_J"""
    if max_j < 1:
        raise UsageError("--max-j must be >= 1")
    _emit(gain_table(max_j), out, fmt, title='PFS SINR gain', errors=None)


@cli.command()
@scenario_option
@mcs_option
@click.option('--doublings', type=click.IntRange(min=0), default=6, show_default=True,
              help='Sweep I = 1, 2, ..., 2^doublings')
@threads_option
@output_options
@handle_errors
def converge(scenario_path, mcs_path, doublings, threads, out, fmt):
    """Distance of the exact model to the ultra-dense limit as interference is split"""
    scenario = load_scenario(Path(scenario_path))
    frame = convergence_sweep(scenario, load_mcs_table(mcs_path), doublings, threads=threads)
    _emit(frame, out, fmt, title='Ultra-dense convergence', errors=None)


@cli.command('generate-drop')
@click.option('--radius', type=float, default=250.0, show_default=True, help='Cell radius (m)')
@click.option('--terminals', type=click.IntRange(min=1), default=10, show_default=True)
@click.option('--interferers', type=click.IntRange(min=0), default=6, show_default=True)
@click.option('--ring-radius', type=float, default=500.0, show_default=True, help='Interferer ring radius (m)')
@click.option('--n-rb', type=click.IntRange(min=1), default=DropParams.n_rb, show_default=True)
@click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True)
@click.option('--name', default=None, help='Scenario name')
@click.option('--out', type=click.Path(dir_okay=False), default=None, help='Scenario JSON to write')
@handle_errors
def generate_drop_cmd(radius, terminals, interferers, ring_radius, n_rb, seed, name, out):
    """Random single-cell deployment (uniform terminals, interferers on a ring)"""
    params = DropParams(cell_radius=radius, terminals=terminals, interferers=interferers,
                        interferer_ring_radius=ring_radius, seed=seed, n_rb=n_rb)
    scenario = generate_drop(params, name=name)
    path = Path(out) if out else Path(ensure_extension(sanitize_filename(scenario.name), '.json'))
    save_scenario(scenario, path)
    console.print(f"[green]Wrote {path}[/green]")


@cli.command()
def config():
    """Show the active configuration and any issues"""
    print_configuration(Console())
    issues = validate_configuration()
    for issue in issues:
        console.print(f"[yellow]⚠ {issue}[/yellow]")
    if issues:
        sys.exit(1)


def main():
    cli()


if __name__ == "__main__":
    main()
