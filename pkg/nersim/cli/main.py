#!/usr/bin/env python3
"""
Nuclear Electric Resonance Simulator - Command Line Interface
Config-driven NER trajectories, gate synthesis and EFG coefficients
"""

import logging
import sys
from pathlib import Path

import click
import yaml
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn

from .. import __version__
from ..core.errors import NerSimError
from ..testing.operating_points import example_configs
from .config import AppSettings, load_app_settings
from .runner import run

console = Console()


def configure_logging(settings: AppSettings, verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.logging.level)
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, RichHandler):
            root.removeHandler(handler)
    handler = RichHandler(console=console, show_path=False, rich_tracebacks=False)
    handler.setFormatter(logging.Formatter(settings.logging.format))
    root.addHandler(handler)
    root.setLevel(level)


def experiment_options(func):
    """Options shared by every experiment subcommand"""
    func = click.option(
        '--seedless', is_flag=True, help='Accepted for reproducibility scripts; runs are deterministic'
    )(func)
    func = click.option(
        '--format', 'fmt', type=click.Choice(['csv', 'json', 'both']), default=None,
        help='Which of CSV/JSON to emit (default: output.formats of the config)'
    )(func)
    func = click.option('--out', '-o', type=click.Path(file_okay=False), help='Output directory')(func)
    func = click.option(
        '--config', 'config_path', required=True, type=click.Path(exists=True, dir_okay=False),
        help='Experiment config (YAML)'
    )(func)
    return func


@click.group()
@click.version_option(version=__version__)
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose output')
@click.option('--config', '-c', type=click.Path(), help='Application settings file path')
@click.pass_context
def cli(ctx, verbose, config):
    """
    Nuclear Electric Resonance Simulator (nersim)

    Electric control of nuclear spin qubits through the quadrupole
    interaction: trajectories, gates, EFG coefficients and Rabi figures.
    """
    ctx.ensure_object(dict)
    settings = load_app_settings(config)
    ctx.obj['verbose'] = verbose
    ctx.obj['config'] = config
    ctx.obj['settings'] = settings
    configure_logging(settings, verbose)

    if verbose:
        console.print("[bold green]nersim - Nuclear Electric Resonance Simulator[/bold green]\n")


def _run_subcommand(ctx, subcommand, config_path, out, fmt, title):
    console.print(Panel.fit(
        f"[bold blue]{title}[/bold blue]\n"
        f"Config: {config_path}\n"
        f"Output: {out or 'from config'}",
        title=subcommand
    ))

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task(f"Running {subcommand}...", total=None)
        outcome = run(config_path, subcommand, out_dir=out, fmt=fmt, settings=ctx.obj['settings'], console=console)
        progress.update(task, completed=True)

    for path in outcome.files:
        console.print(f"Wrote [cyan]{path}[/cyan]")
    if outcome.exit_status == 0:
        console.print(f"[bold green]{subcommand} finished[/bold green]")
    ctx.exit(outcome.exit_status)


@cli.command()
@experiment_options
@click.pass_context
def simulate(ctx, config_path, out, fmt, seedless):
    """Integrate the single-nucleus NER dynamics and write the trajectory"""
    _run_subcommand(ctx, 'simulate', config_path, out, fmt, 'NER trajectory')


@cli.command()
@experiment_options
@click.pass_context
def gate(ctx, config_path, out, fmt, seedless):
    """Synthesize a rotation, CZ or CNOT schedule and score it"""
    _run_subcommand(ctx, 'gate', config_path, out, fmt, 'Gate synthesis')


@cli.command()
@experiment_options
@click.pass_context
def efg(ctx, config_path, out, fmt, seedless):
    """Compute the EFG coefficients A, B, C and B'"""
    _run_subcommand(ctx, 'efg', config_path, out, fmt, 'EFG coefficients')


@cli.command()
@experiment_options
@click.pass_context
def perf(ctx, config_path, out, fmt, seedless):
    """Rabi frequency and number of flips within T2*"""
    _run_subcommand(ctx, 'perf', config_path, out, fmt, 'Performance table')


@cli.command()
@experiment_options
@click.pass_context
def sweep(ctx, config_path, out, fmt, seedless):
    """Run a parameter grid and write one summary row per point"""
    _run_subcommand(ctx, 'sweep', config_path, out, fmt, 'Parameter sweep')


@cli.command()
@click.option('--workspace', '-w', type=click.Path(file_okay=False), default='.', help='Workspace directory')
def init(workspace):
    """Initialize a workspace with example experiment configs"""

    console.print(Panel.fit(
        "[bold green]nersim Workspace Initialization[/bold green]\n"
        "Writing example experiment configs...",
        title="Initialize"
    ))

    root = Path(workspace)
    workspace_dirs = ["configs/experiments", "results"]
    configs = example_configs()

    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        console=console
    ) as progress:
        task1 = progress.add_task("Creating workspace directories...", total=len(workspace_dirs))
        for dir_name in workspace_dirs:
            (root / dir_name).mkdir(parents=True, exist_ok=True)
            progress.advance(task1)

        task2 = progress.add_task("Writing example configs...", total=len(configs))
        for name, data in configs.items():
            path = root / "configs" / "experiments" / name
            with open(path, "w", encoding="utf-8") as f:
                yaml.safe_dump(data, f, sort_keys=False)
            progress.advance(task2)

    console.print("\n[bold green]nersim Workspace Initialized![/bold green]")
    console.print("\nTry: [cyan]nersim simulate --config configs/experiments/sb_pi_pulse.yaml[/cyan]")


def main():
    """Entry point for nersim CLI"""
    try:
        cli()
    except KeyboardInterrupt:
        console.print("\n[yellow]Operation cancelled by user[/yellow]")
        sys.exit(1)
    except NerSimError as e:
        console.print(f"\n[red]{e.code}: {e.message}[/red]")
        sys.exit(e.exit_status)
    except Exception as e:
        console.print(f"\n[red]Unexpected error: {str(e)}[/red]")
        sys.exit(1)


if __name__ == '__main__':
    main()
