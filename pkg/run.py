#!/usr/bin/env python3
"""
PFS Throughput Oracle - Master Script
Checks the configuration, then hands the command line to pfs-oracle
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from rich.console import Console
from rich.panel import Panel

from config.settings import validate_configuration
from src import __version__

# stderr, so CSV written to stdout stays clean
console = Console(stderr=True)


def show_banner():
    """Show banner with the available subcommands"""
    text = (
        f"[bold cyan]PFS THROUGHPUT ORACLE v{__version__}[/bold cyan]\n\n"
        "[cyan]evaluate[/cyan]       throughput models on a scenario (optionally with simulation)\n"
        "[cyan]simulate[/cyan]       Monte-Carlo PFS simulation\n"
        "[cyan]gain-table[/cyan]     PFS SINR gain versus number of terminals\n"
        "[cyan]converge[/cyan]       ultra-dense convergence sweep\n"
        "[cyan]generate-drop[/cyan]  random single-cell scenario\n"
        "[cyan]config[/cyan]         active configuration\n\n"
        "Run [bold]python run.py COMMAND --help[/bold] for options"
    )
    console.print(Panel(text, border_style="cyan"))


def main():
    """Main entry point"""
    issues = validate_configuration()
    if issues:
        console.print("\n[yellow]Configuration Issues:[/yellow]")
        for issue in issues:
            console.print(f"  {issue}")
        console.print()

    if len(sys.argv) == 1:
        show_banner()
        return

    from scripts.pfs_oracle import main as oracle_main
    oracle_main()


if __name__ == "__main__":
    main()
