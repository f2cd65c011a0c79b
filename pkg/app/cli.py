# app/cli.py
"""
Command line front end.

    python -m app.cli simulate --graph G.json --coin C.json --initial I.json --steps 10 --out dist.csv
    python -m app.cli equiv-check --graph G.json --coin C.json --report report.json
    python -m app.cli cross-prob --graph G.json --gamma S.json --initial I.json --steps 10 \
        --native-out native.csv --cross-out cross.csv
    python -m app.cli validate-graph --graph G.json

Every engine failure is printed as ``<category>: <message>`` on stderr and ends
the process with the exit code of its category (2 parse/config, 3 numerical
validation, 4 dimension). Logs go to stderr, the rounded final distribution to
stdout.
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Optional, Tuple, Union

import click  # Command group and options

# Application imports
from app.core.config import get_settings  # Log level and format
from app.core.errors import ParseError, WalkError  # Category and exit code of every failure
from app.loaders import load_graph_file, load_initial, load_mu, load_phi, load_unitary_file, parse
from app.models.state import WalkModel
from app.operations.measurement import DistributionMode
# Shared with the HTTP surface
from app.pipeline import (
    NATIVE_MODES,
    Distribution,
    WalkSetup,
    build_setup,
    check_graph_file,
    require_passed,
    run_cross_probability,
    run_equivalence,
    run_simulation,
)
from app.schemas.report import EquivalenceReport
from app.schemas.simulation import EquivalenceConfig, OutputFormat, SimulationConfig
from app.writers import summary, write_distributions, write_report  # Output files and the stdout summary

logger = logging.getLogger(__name__)

InputFile = click.Path(exists=True, dir_okay=False, path_type=Path)
OutputFile = click.Path(dir_okay=False, writable=True, path_type=Path)


def handle_errors(command):
    """Turn engine errors into a categorized message and exit code."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except WalkError as e:
            logger.debug("Command failed", exc_info=True)
            click.echo(f"{e.category}: {e}", err=True)
            sys.exit(e.exit_code)
    return wrapper


def _unitaries_path(model: WalkModel, coin: Optional[Path], gamma: Optional[Path]) -> Path:
    """The coin model takes --coin, the scattering model --gamma; never both."""
    if (coin is None) == (gamma is None):
        raise ParseError("Give exactly one of --coin or --gamma")
    given = "coin" if coin else "gamma"
    expected = "coin" if model == WalkModel.COIN else "gamma"
    if given != expected:
        raise ParseError(f"A {model.value} run needs --{expected}, got --{given}")
    return coin or gamma


def _setup(config: Union[SimulationConfig, EquivalenceConfig]) -> WalkSetup:
    return build_setup(
        load_graph_file(config.graph),
        load_mu(config.mu) if config.mu else None,
        load_phi(config.phi) if config.phi else None,
    )


def _simulation_config(graph, model, coin, gamma, mu, phi, initial, steps, fmt, seed, tol, mode=None) -> SimulationConfig:
    model = WalkModel(model)
    return parse(SimulationConfig, {
        "graph": graph,
        "model": model,
        "unitaries": _unitaries_path(model, coin, gamma),
        "mu": mu,
        "phi": phi,
        "initial": initial,
        "steps": steps,
        "format": fmt,
        "mode": mode,
        "seed": seed,
        "tolerance": tol,
    }, "command line options")


def _walk_options(command):
    options = [
        click.option("--graph", "graph", type=InputFile, required=True, help="Graph file"),
        click.option("--model", type=click.Choice([m.value for m in WalkModel]), default=WalkModel.COIN.value,
                     show_default=True, help="Walk picture to evolve"),
        click.option("--coin", type=InputFile, help="Coin file (coin model)"),
        click.option("--gamma", type=InputFile, help="Gamma file (scattering model)"),
        click.option("--mu", type=InputFile, help="Landing port table, replaces the graph file's"),
        click.option("--phi", type=InputFile, help="Edge map table, replaces the graph file's"),
        click.option("--initial", type=InputFile, required=True, help="Initial state file"),
        click.option("--steps", type=click.IntRange(min=0), default=0, show_default=True),
        click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]),
                     default=OutputFormat.CSV.value, show_default=True),
        click.option("--seed", type=int, default=None, help="Seed of the 'random' builtin"),
        click.option("--tol", type=float, default=None, help="Unitarity tolerance"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


@click.group()
@click.option("--log-level", default=None, help="Log level (LOG_LEVEL setting by default)")
def cli(log_level: Optional[str]):
    """Discrete-time quantum walks in the coin and scattering pictures."""
    settings = get_settings()
    logging.basicConfig(
        level=(log_level or settings.LOG_LEVEL).upper(),
        format=settings.LOG_FORMAT,
        stream=sys.stderr,
    )


# ------------------------------------------------------------------------------
# simulate
# ------------------------------------------------------------------------------
def cmd_simulate(config: SimulationConfig, out: Path) -> Distribution:
    """
    Evolve the configured walk and write its distribution at every step.

    Args:
        config: validated command line options
        out: distribution file, CSV or JSON per ``config.format``

    Returns:
        Distribution: the distribution after the last step

    Raises:
        WalkError: any engine failure; the command turns it into an exit code
    """
    setup = _setup(config)
    distributions = run_simulation(
        setup, config.model, load_unitary_file(config.unitaries), load_initial(config.initial), config.steps,
        mode=config.mode, seed=config.seed, tolerance=config.tolerance,
    )
    write_distributions(out, distributions, config.format)
    return distributions[-1]


@cli.command()
@_walk_options
@click.option("--mode", type=click.Choice([m.value for m in DistributionMode]), default=None,
              help="Distribution mode; native mode of the model by default")
@click.option("--out", type=OutputFile, required=True, help="Distribution file")
@handle_errors
def simulate(graph, model, coin, gamma, mu, phi, initial, steps, fmt, seed, tol, mode, out):
    """
    Evolve a walk and write its distribution at every step.

    The rounded final distribution is echoed to stdout. Exits 2 on invalid
    input, 3 on a non-unitary matrix or a bad initial norm, 4 on a size mismatch.
    """
    config = _simulation_config(graph, model, coin, gamma, mu, phi, initial, steps, fmt, seed, tol, mode)
    click.echo(summary(cmd_simulate(config, out)))


# ------------------------------------------------------------------------------
# cross-prob
# ------------------------------------------------------------------------------
def cmd_cross_prob(config: SimulationConfig, native_out: Path, cross_out: Path) -> Distribution:
    """
    Evolve once and write the native and the cross-mapped distributions.

    Args:
        config: validated command line options (``mode`` is ignored)
        native_out: distribution in the model's own projectors
        cross_out: distribution in the other picture's projectors

    Returns:
        Distribution: the cross-mapped distribution after the last step
    """
    setup = _setup(config)
    result = run_cross_probability(
        setup, config.model, load_unitary_file(config.unitaries), load_initial(config.initial), config.steps,
        seed=config.seed, tolerance=config.tolerance,
    )
    write_distributions(native_out, result.steps(NATIVE_MODES[config.model]), config.format)
    write_distributions(cross_out, result.steps(DistributionMode.CROSS), config.format)
    return result.steps(DistributionMode.CROSS)[-1]


@cli.command("cross-prob")
@_walk_options
@click.option("--native-out", type=OutputFile, required=True, help="Native distribution file")
@click.option("--cross-out", type=OutputFile, required=True, help="Cross-mapped distribution file")
@handle_errors
def cross_prob(graph, model, coin, gamma, mu, phi, initial, steps, fmt, seed, tol, native_out, cross_out):
    """Evolve once and write the native and the cross-mapped distributions."""
    config = _simulation_config(graph, model, coin, gamma, mu, phi, initial, steps, fmt, seed, tol)
    click.echo(summary(cmd_cross_prob(config, native_out, cross_out)))


# ------------------------------------------------------------------------------
# equiv-check
# ------------------------------------------------------------------------------
def cmd_equiv_check(config: EquivalenceConfig, report: Path) -> EquivalenceReport:
    """
    Run the equivalence check and write its report, passed or not.

    Args:
        config: validated command line options
        report: JSON report file

    Returns:
        EquivalenceReport: the deviations and the verdict
    """
    result = run_equivalence(
        _setup(config),
        load_unitary_file(config.coin),
        load_unitary_file(config.gamma) if config.gamma else None,
        tolerance=config.tolerance,
        cap=config.dense_cap,
        trials=config.trials,
        seed=config.seed,
    )
    write_report(report, result)
    return result


@cli.command("equiv-check")
@click.option("--graph", "graph", type=InputFile, required=True)
@click.option("--coin", type=InputFile, required=True, help="Coin file")
@click.option("--gamma", type=InputFile, default=None, help="Gamma file to check instead of the one derived from the coins")
@click.option("--mu", type=InputFile, default=None)
@click.option("--phi", type=InputFile, default=None)
@click.option("--report", type=OutputFile, required=True, help="Report file (JSON)")
@click.option("--tol", type=float, default=None, help="Deviation tolerance")
@click.option("--dense-cap", type=click.IntRange(min=0), default=None, help="Largest dimension for dense matrices")
@click.option("--trials", type=click.IntRange(min=0), default=None, help="Random states in the sparse check")
@click.option("--seed", type=int, default=None)
@handle_errors
def equiv_check(graph, coin, gamma, mu, phi, report, tol, dense_cap, trials, seed):
    """
    Check U_s = E^H U_c E and write the report; exit 3 when it fails.

    Above --dense-cap only random states are compared, so --trials 0 there
    is refused with exit 2.
    """
    config = parse(EquivalenceConfig, {
        "graph": graph, "coin": coin, "gamma": gamma, "mu": mu, "phi": phi,
        "tolerance": tol, "dense_cap": dense_cap, "trials": trials, "seed": seed,
    }, "command line options")
    result = cmd_equiv_check(config, report)
    click.echo(
        f"dense={result.dense_deviation} sparse={result.sparse_deviation} "
        f"spectral={result.spectral_deviation} passed={result.passed}"
    )
    require_passed(result)


# ------------------------------------------------------------------------------
# validate-graph
# ------------------------------------------------------------------------------
@cli.command("validate-graph")
@click.option("--graph", "graph", type=InputFile, required=True)
@click.option("--report", type=OutputFile, default=None, help="Optional report file (JSON)")
@handle_errors
def validate_graph_command(graph, report):
    """Build the graph file and check every labeling invariant."""
    result = check_graph_file(load_graph_file(graph))
    if report:
        write_report(report, result)
    if not result.valid:
        first = result.violations[0]
        raise ParseError(f"{len(result.violations)} violations, first: {first.rule} at node {first.node}: {first.detail}")
    click.echo("valid")


def main(argv: Optional[Tuple[str, ...]] = None):
    cli.main(args=argv, prog_name="qwalk")


if __name__ == "__main__":
    main()
