"""CLI interface for collisim."""

from pathlib import Path
from typing import Annotated, Any

import typer
from rich.console import Console

from collisim.config import SUBCOMMAND_DEFAULTS, build_config
from collisim.errors import ConfigError
from collisim.models import RunConfig, Subcommand

app = typer.Typer(
    name="collisim",
    help="Collisional-model simulator: correlated environments, CP-divisibility and entanglement.",
    add_completion=False,
)
console = Console(stderr=True)


def _default(subcommand: Subcommand, key: str) -> object:
    if key in SUBCOMMAND_DEFAULTS[subcommand]:
        return SUBCOMMAND_DEFAULTS[subcommand][key]
    default = RunConfig.model_fields[key].default
    return "none" if default is None else default


def _opt(subcommand: Subcommand, key: str, text: str, *decls: str) -> Any:
    """typer.Option whose help names the subcommand's default for ``key``."""
    flag = "--" + key.replace("_", "-")
    return typer.Option(flag, *decls, help=f"{text} (default: {_default(subcommand, key)})")


ConfigOpt = Annotated[
    Path | None,
    typer.Option("--config", "-c", help="key=value file; flags override its values"),
]
OutputOpt = Annotated[
    Path | None,
    typer.Option("--output", "-o", help="CSV file to write (default: stdout)"),
]
OutDirOpt = Annotated[
    Path | None,
    typer.Option(
        "--out-dir",
        envvar="COLLISIM_OUT",
        help="Directory for <subcommand>.csv when --output is not given",
    ),
]
CpTolOpt = Annotated[
    float | None, typer.Option("--cp-tol", help="Choi eigenvalue slack (default: 1e-12)")
]
PsdTolOpt = Annotated[
    float | None, typer.Option("--psd-tol", help="State eigenvalue slack (default: 1e-10)")
]


def _execute(subcommand: Subcommand, config_file: Path | None, flags: dict[str, Any]) -> None:
    from collisim.runner import run

    try:
        config = build_config(subcommand, config_file, flags)
    except ConfigError as e:
        console.print(f"[bold red]Invalid options:[/bold red] {e}")
        raise typer.Exit(2) from None

    code = run(config)
    if code:
        raise typer.Exit(code)


@app.command("single-step")
def single_step(
    eps1: Annotated[float | None, _opt("single-step", "eps1", "Probability of channel 1")] = None,
    eps2: Annotated[float | None, _opt("single-step", "eps2", "Probability of channel 2")] = None,
    a: Annotated[float | None, _opt("single-step", "a", "sigma_x weight of channel 1")] = None,
    theta: Annotated[str | None, _opt("single-step", "theta", "Initial polar angle")] = None,
    phi: Annotated[str | None, _opt("single-step", "phi", "Initial azimuth")] = None,
    steps: Annotated[int | None, _opt("single-step", "steps", "Number of collisions")] = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out_dir: OutDirOpt = None,
    psd_tol: PsdTolOpt = None,
) -> None:
    """Uncorrelated collisions, one row per step, each checked against the exact evolution."""
    _execute(
        "single-step",
        config,
        {
            "eps1": eps1,
            "eps2": eps2,
            "a": a,
            "theta": theta,
            "phi": phi,
            "steps": steps,
            "output": output,
            "out_dir": out_dir,
            "psd_tol": psd_tol,
        },
    )


@app.command("two-step")
def two_step(
    eps1: Annotated[float | None, _opt("two-step", "eps1", "Probability of channel 1")] = None,
    eps2: Annotated[float | None, _opt("two-step", "eps2", "Probability of channel 2")] = None,
    q: Annotated[float | None, _opt("two-step", "q", "Pair parameter q; Q = 2q - 1")] = None,
    Q: Annotated[float | None, _opt("two-step", "Q", "Correlation factor in [-1, 1]")] = None,
    Q_grid: Annotated[str | None, _opt("two-step", "Q_grid", "Q grid start:stop:count")] = None,
    a: Annotated[float | None, _opt("two-step", "a", "sigma_x weight of channel 1")] = None,
    theta: Annotated[str | None, _opt("two-step", "theta", "Initial polar angle")] = None,
    phi: Annotated[str | None, _opt("two-step", "phi", "Initial azimuth")] = None,
    theta_grid: Annotated[str | None, _opt("two-step", "theta_grid", "theta grid")] = None,
    phi_grid: Annotated[str | None, _opt("two-step", "phi_grid", "phi grid")] = None,
    eps_y: Annotated[
        float | None, _opt("two-step", "eps_y", "Extra sigma_y collision after the pair")
    ] = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out_dir: OutDirOpt = None,
    cp_tol: CpTolOpt = None,
    psd_tol: PsdTolOpt = None,
) -> None:
    """Two collisions with the correlated pair |R2>, with the correction and the CP verdict."""
    _execute(
        "two-step",
        config,
        {
            "eps1": eps1,
            "eps2": eps2,
            "q": q,
            "Q": Q,
            "Q_grid": Q_grid,
            "a": a,
            "theta": theta,
            "phi": phi,
            "theta_grid": theta_grid,
            "phi_grid": phi_grid,
            "eps_y": eps_y,
            "output": output,
            "out_dir": out_dir,
            "cp_tol": cp_tol,
            "psd_tol": psd_tol,
        },
    )


@app.command("markov-scan")
def markov_scan(
    eps1: Annotated[float | None, _opt("markov-scan", "eps1", "Probability of channel 1")] = None,
    eps2: Annotated[float | None, _opt("markov-scan", "eps2", "Probability of channel 2")] = None,
    a: Annotated[float | None, _opt("markov-scan", "a", "sigma_x weight of channel 1")] = None,
    a_grid: Annotated[str | None, _opt("markov-scan", "a_grid", "a grid start:stop:count")] = None,
    Q: Annotated[float | None, _opt("markov-scan", "Q", "Single correlation factor")] = None,
    q: Annotated[float | None, _opt("markov-scan", "q", "Single pair parameter q")] = None,
    Q_grid: Annotated[str | None, _opt("markov-scan", "Q_grid", "Q grid start:stop:count")] = None,
    eps_y: Annotated[
        float | None, _opt("markov-scan", "eps_y", "Extra sigma_y collision after the pair")
    ] = None,
    workers: Annotated[int | None, _opt("markov-scan", "workers", "Worker threads")] = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out_dir: OutDirOpt = None,
    cp_tol: CpTolOpt = None,
) -> None:
    """CP test of the intermediate map over an (a, Q) grid."""
    _execute(
        "markov-scan",
        config,
        {
            "eps1": eps1,
            "eps2": eps2,
            "a": a,
            "a_grid": a_grid,
            "Q": Q,
            "q": q,
            "Q_grid": Q_grid,
            "eps_y": eps_y,
            "workers": workers,
            "output": output,
            "out_dir": out_dir,
            "cp_tol": cp_tol,
        },
    )


@app.command("delta-e")
def delta_e(
    eps1: Annotated[float | None, _opt("delta-e", "eps1", "Probability of channel 1")] = None,
    eps2: Annotated[float | None, _opt("delta-e", "eps2", "Probability of channel 2")] = None,
    a: Annotated[float | None, _opt("delta-e", "a", "sigma_x weight of channel 1")] = None,
    theta: Annotated[str | None, _opt("delta-e", "theta", "Single polar angle")] = None,
    theta_grid: Annotated[str | None, _opt("delta-e", "theta_grid", "theta grid")] = None,
    phi: Annotated[str | None, _opt("delta-e", "phi", "Single azimuth")] = None,
    phi_grid: Annotated[str | None, _opt("delta-e", "phi_grid", "phi grid")] = None,
    Q: Annotated[float | None, _opt("delta-e", "Q", "Single correlation factor")] = None,
    Q_grid: Annotated[str | None, _opt("delta-e", "Q_grid", "Q grid start:stop:count")] = None,
    workers: Annotated[int | None, _opt("delta-e", "workers", "Worker threads")] = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out_dir: OutDirOpt = None,
    psd_tol: PsdTolOpt = None,
) -> None:
    """Entanglement gained from correlations after two collisions, E - E(Q=0), in bits."""
    _execute(
        "delta-e",
        config,
        {
            "eps1": eps1,
            "eps2": eps2,
            "a": a,
            "theta": theta,
            "theta_grid": theta_grid,
            "phi": phi,
            "phi_grid": phi_grid,
            "Q": Q,
            "Q_grid": Q_grid,
            "workers": workers,
            "output": output,
            "out_dir": out_dir,
            "psd_tol": psd_tol,
        },
    )


@app.command()
def ghz(
    probs: Annotated[str | None, _opt("ghz", "probs", "Level probabilities p0,p1[,p2]")] = None,
    steps: Annotated[int | None, _opt("ghz", "steps", "Largest number of collisions")] = None,
    a: Annotated[float | None, _opt("ghz", "a", "sigma_x weight of channel 1")] = None,
    theta: Annotated[str | None, _opt("ghz", "theta", "Initial polar angle")] = None,
    phi: Annotated[str | None, _opt("ghz", "phi", "Initial azimuth")] = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out_dir: OutDirOpt = None,
) -> None:
    """Collisions with a perfectly correlated (GHZ-like) chain: period-two dynamics."""
    _execute(
        "ghz",
        config,
        {
            "probs": probs,
            "steps": steps,
            "a": a,
            "theta": theta,
            "phi": phi,
            "output": output,
            "out_dir": out_dir,
        },
    )


@app.command()
def validate(
    samples: Annotated[int | None, _opt("validate", "samples", "Random draws per check")] = None,
    seed: Annotated[int | None, _opt("validate", "seed", "Random seed")] = None,
    config: ConfigOpt = None,
    output: OutputOpt = None,
    out_dir: OutDirOpt = None,
    cp_tol: CpTolOpt = None,
    psd_tol: PsdTolOpt = None,
) -> None:
    """Run the oracle suite and print pass/fail per invariant."""
    _execute(
        "validate",
        config,
        {
            "samples": samples,
            "seed": seed,
            "output": output,
            "out_dir": out_dir,
            "cp_tol": cp_tol,
            "psd_tol": psd_tol,
        },
    )


@app.command()
def version() -> None:
    """Show the version."""
    from collisim import __version__

    typer.echo(f"collisim {__version__}")


if __name__ == "__main__":
    app()
