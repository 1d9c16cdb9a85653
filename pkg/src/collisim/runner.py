"""Execute one RunConfig and emit its CSV."""

from collections.abc import Callable

import numpy as np
from rich.console import Console

from collisim.channels import ChannelPair
from collisim.csvio import SCHEMAS, write_csv
from collisim.divisibility import (
    choi_from_affine,
    compensated_map,
    cp_test,
    markovianity_scan,
    two_step_map,
)
from collisim.dynamics import (
    collide_once_analytic,
    collide_once_exact,
    collide_pair_analytic,
    collide_pair_exact,
    evolve_exact,
    ghz_evolve,
)
from collisim.environment import (
    CorrelatedPairSpec,
    EpsilonVector,
    GhzChainSpec,
    correlated_pair_state,
    ghz_chain_density,
    product_env_pure,
)
from collisim.errors import CollisimError, DomainError
from collisim.infometrics import BlochAngles, delta_e_sweep, von_neumann_entropy
from collisim.linalg import ComplexMatrix, bloch_vector
from collisim.models import RunConfig, Subcommand
from collisim.util import parse_probabilities
from collisim.validate import print_validation_report, run_validation

console = Console(stderr=True)

# Largest chain compared against the explicit d^n environment.
GHZ_EXACT_MAX_N = 4

Rows = list[dict[str, object]]


def _frobenius(m: ComplexMatrix) -> float:
    return float(np.linalg.norm(m))


def _bloch_columns(prefix: str, m: ComplexMatrix) -> dict[str, object]:
    r = bloch_vector(m)
    return {f"{prefix}_x": float(r[0]), f"{prefix}_y": float(r[1]), f"{prefix}_z": float(r[2])}


def run_single_step(config: RunConfig) -> Rows:
    """Repeated uncorrelated collisions; each step is checked against one exact collision."""
    tol = config.tolerances()
    eps = EpsilonVector((config.eps1, config.eps2))
    pair = ChannelPair(config.a)
    env = product_env_pure(eps, eps.d)
    rho = BlochAngles(config.theta, config.phi).density()

    rows: Rows = []
    for step in range(config.steps + 1):
        deviation = 0.0
        if step > 0:
            nxt = collide_once_analytic(rho, eps, pair)
            deviation = _frobenius(nxt.matrix - collide_once_exact(rho, env, pair, tol=tol).matrix)
            rho = nxt
        rows.append(
            {
                "step": step,
                **_bloch_columns("r", rho.matrix),
                "entropy": von_neumann_entropy(rho, tol),
                "oracle_deviation": deviation,
            }
        )
    return rows


def run_two_step(config: RunConfig) -> Rows:
    """Both collisions with the correlated pair, analytic and exact, over Q x theta x phi."""
    tol = config.tolerances()
    pair = ChannelPair(config.a)
    rows: Rows = []
    for Q in config.grid("Q"):
        spec = CorrelatedPairSpec.from_correlation(config.eps1, config.eps2, Q)
        phi21 = two_step_map(config.a, Q, config.eps1, config.eps2, tol)
        if config.eps_y > 0.0:
            phi21 = compensated_map(phi21, config.eps_y)
        verdict = cp_test(choi_from_affine(phi21, tol), tol.cp)
        for theta in config.grid("theta"):
            for phi in config.grid("phi"):
                rho = BlochAngles(theta, phi).density()
                analytic = collide_pair_analytic(rho, spec, pair)
                exact = collide_pair_exact(rho, correlated_pair_state(spec, tol), pair, tol=tol)
                deviation = max(
                    _frobenius(analytic.rho1.matrix - exact.rho1.matrix),
                    _frobenius(analytic.rho2.matrix - exact.rho2.matrix),
                )
                rows.append(
                    {
                        "Q": spec.Q,
                        "q": spec.q,
                        "a": config.a,
                        "eps1": config.eps1,
                        "eps2": config.eps2,
                        "theta": theta,
                        "phi": phi,
                        **_bloch_columns("r1", analytic.rho1.matrix),
                        **_bloch_columns("r2", analytic.rho2.matrix),
                        "correction_norm": _frobenius(analytic.correction),
                        "oracle_deviation": deviation,
                        "min_eigenvalue": verdict.min_eigenvalue,
                        "is_cp": verdict.is_cp,
                    }
                )
    return rows


def run_markov_scan(config: RunConfig) -> Rows:
    rows = markovianity_scan(
        config.grid("a"),
        config.grid("Q"),
        config.eps1,
        config.eps2,
        eps_y=config.eps_y,
        workers=config.workers,
        tol=config.tolerances(),
    )
    return [row.model_dump() for row in rows]


def run_delta_e(config: RunConfig) -> Rows:
    records = delta_e_sweep(
        config.grid("theta"),
        config.grid("phi"),
        config.grid("Q"),
        config.a,
        config.eps1,
        config.eps2,
        workers=config.workers,
        tol=config.tolerances(),
    )
    return [record.model_dump() for record in records]


def run_ghz(config: RunConfig) -> Rows:
    """Perfectly correlated chain for n = 0..steps; small n is checked against the explicit chain."""
    tol = config.tolerances()
    probs = tuple(parse_probabilities(config.probs))
    channels = ChannelPair(config.a).sigmas
    if not 2 <= len(probs) <= len(channels) + 1:
        raise DomainError(f"GHZ chain needs 2 or 3 probabilities, got {len(probs)}")
    sigmas = channels[: len(probs) - 1]
    rho = BlochAngles(config.theta, config.phi).density()

    rows: Rows = []
    for n in range(config.steps + 1):
        spec = GhzChainSpec(probs, n)
        state = ghz_evolve(rho, spec, sigmas)
        deviation: float | None = None
        if 1 <= n <= GHZ_EXACT_MAX_N:
            exact = evolve_exact(rho, ghz_chain_density(spec), sigmas, tol=tol)[-1]
            deviation = _frobenius(state.matrix - exact.matrix)
        elif n == 0:
            deviation = 0.0
        rows.append(
            {
                "n": n,
                **_bloch_columns("r", state.matrix),
                "entropy": von_neumann_entropy(state, tol),
                "exact_deviation": deviation,
            }
        )
    return rows


RUNNERS: dict[Subcommand, Callable[[RunConfig], Rows]] = {
    "single-step": run_single_step,
    "two-step": run_two_step,
    "markov-scan": run_markov_scan,
    "delta-e": run_delta_e,
    "ghz": run_ghz,
}


def run(config: RunConfig) -> int:
    """Run a subcommand and write its CSV; returns the process exit status.

    0 on success, 1 when a domain error aborts the run or a validation check fails.
    """
    schema = SCHEMAS[config.subcommand]
    output = config.output_path()

    if config.subcommand == "validate":
        results = run_validation(config.samples, config.seed, config.tolerances())
        write_csv([r.as_row() for r in results], schema, output)
        return 0 if print_validation_report(results) else 1

    console.print(f"[bold blue]Running {config.subcommand}...[/bold blue]")
    try:
        rows = RUNNERS[config.subcommand](config)
    except CollisimError as e:
        console.print(f"[bold red]{config.subcommand} failed:[/bold red] {e}")
        return 1

    write_csv(rows, schema, output)
    console.print(f"[green]{len(rows)} row(s)[/green]")
    return 0
