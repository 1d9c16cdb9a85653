"""Built-in oracle suite for ``collisim validate``.

Each check compares an analytic result against the exact evolution or a closed form and reports
the worst deviation it saw.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np
from rich.console import Console
from rich.table import Table

from collisim.channels import ChannelPair
from collisim.divisibility import (
    affine_from_channel,
    channel_from_kraus,
    choi_from_affine,
    cp_test,
    kraus_from_choi,
    leading_eigenvalue,
    pauli_weights,
    two_step_map,
)
from collisim.dynamics import (
    collide_once_analytic,
    collide_once_exact,
    collide_pair_analytic,
    collide_pair_exact,
    evolve_correlated_chain,
    evolve_exact,
    ghz_evolve,
    same_channel_rate,
    second_step,
    single_collision_map,
    truncated_second_step,
)
from collisim.environment import (
    CorrelatedPairSpec,
    GhzChainSpec,
    correlated_pair_state,
    dephased_pair_state,
    ghz_chain_density,
    product_env_pure,
)
from collisim.infometrics import (
    BlochAngles,
    entanglement_after_two,
    entropy_monotonicity_check,
    trace_distance,
)
from collisim.linalg import (
    PAULI_I,
    ComplexMatrix,
    DensityMatrix,
    hermitian_eigen,
    state_from_bloch,
)
from collisim.models import DEFAULT_TOLERANCES, Tolerances

console = Console(stderr=True)


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"


@dataclass
class CheckResult:
    """Outcome of one invariant check."""

    check: str
    status: Status
    max_deviation: float
    tolerance: float
    detail: str

    def as_row(self) -> dict[str, object]:
        return {
            "check": self.check,
            "status": self.status.value,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


def _result(check: str, deviation: float, tolerance: float, detail: str) -> CheckResult:
    status = Status.PASS if deviation <= tolerance else Status.FAIL
    return CheckResult(check, status, deviation, tolerance, detail)


def _norm(m: ComplexMatrix) -> float:
    return float(np.linalg.norm(m))


def random_pure_state(rng: np.random.Generator) -> DensityMatrix:
    v = rng.normal(size=3)
    return state_from_bloch(v / np.linalg.norm(v))


@dataclass
class _Draw:
    rho: DensityMatrix
    spec: CorrelatedPairSpec
    pair: ChannelPair


def _draws(rng: np.random.Generator, samples: int) -> list[_Draw]:
    # eps <= 0.3 keeps every |R2> radicand non-negative for any q.
    return [
        _Draw(
            random_pure_state(rng),
            CorrelatedPairSpec(
                float(rng.uniform(0, 0.3)), float(rng.uniform(0, 0.3)), float(rng.uniform(0, 1))
            ),
            ChannelPair(float(rng.uniform(0, 1))),
        )
        for _ in range(samples)
    ]


def check_single_step_oracle(draws: list[_Draw], tol: Tolerances) -> CheckResult:
    worst = 0.0
    for d in draws:
        exact = collide_once_exact(d.rho, product_env_pure(d.spec.eps, 3), d.pair, tol=tol)
        analytic = collide_once_analytic(d.rho, d.spec.eps, d.pair)
        worst = max(worst, _norm(exact.matrix - analytic.matrix))
    return _result("single-step oracle", worst, 1e-12, f"{len(draws)} random draws")


def check_two_step_oracle(draws: list[_Draw], tol: Tolerances) -> CheckResult:
    worst = 0.0
    for d in draws:
        exact = collide_pair_exact(d.rho, correlated_pair_state(d.spec, tol), d.pair, tol=tol)
        analytic = collide_pair_analytic(d.rho, d.spec, d.pair)
        worst = max(
            worst,
            _norm(exact.rho1.matrix - analytic.rho1.matrix),
            _norm(exact.rho2.matrix - analytic.rho2.matrix),
            _norm(exact.correction - analytic.correction),
        )
    return _result("two-step oracle", worst, 1e-12, f"{len(draws)} random draws")


def check_dephased_pair(draws: list[_Draw], tol: Tolerances) -> CheckResult:
    worst = 0.0
    for d in draws:
        pure = collide_pair_exact(d.rho, correlated_pair_state(d.spec, tol), d.pair, tol=tol)
        mixed = collide_pair_exact(d.rho, dephased_pair_state(d.spec, tol), d.pair, tol=tol)
        worst = max(worst, _norm(pure.rho2.matrix - mixed.rho2.matrix))
    return _result("pure vs dephased pair", worst, 1e-12, "identical reduced dynamics")


def check_states_and_unitality(draws: list[_Draw], tol: Tolerances) -> CheckResult:
    worst = 0.0
    mixed = DensityMatrix(0.5 * PAULI_I)
    for d in draws:
        result = collide_pair_analytic(d.rho, d.spec, d.pair)
        for rho in (result.rho1, result.rho2):
            worst = max(worst, abs(complex(np.trace(rho.matrix)) - 1.0))
            worst = max(worst, -float(hermitian_eigen(rho.matrix, tol).values[0]))
        fixed = collide_pair_analytic(mixed, d.spec, d.pair)
        worst = max(worst, _norm(fixed.rho2.matrix - mixed.matrix))
    return _result("trace, positivity, unitality", worst, tol.psd, "every output state")


def check_markov_sign(tol: Tolerances) -> CheckResult:
    a, eps1, eps2 = 0.05, 0.01, 0.02
    worst = 0.0
    mismatches = 0
    for Q in np.linspace(-1.0, 1.0, 21):
        lam = cp_test(choi_from_affine(two_step_map(a, float(Q), eps1, eps2, tol), tol)).min_eigenvalue
        if (lam < -tol.cp) != (Q > 1e-12):
            mismatches += 1
        if abs(Q) >= 0.1:
            law = leading_eigenvalue(a, float(Q), eps1, eps2)
            worst = max(worst, abs(lam - law) / abs(law))
    deviation = worst if mismatches == 0 else math.inf
    return _result(
        "non-Markovian iff Q > 0", deviation, 0.5, f"{mismatches} sign mismatches; relative law error"
    )


def check_commuting_channels(tol: Tolerances) -> CheckResult:
    worst = 0.0
    for Q in np.linspace(-1.0, 1.0, 9):
        for eps1, eps2 in ((0.01, 0.02), (0.05, 0.2), (0.1, 0.15)):
            phi21 = two_step_map(0.0, float(Q), eps1, eps2, tol)
            lam = cp_test(choi_from_affine(phi21, tol)).min_eigenvalue
            worst = max(worst, -lam - tol.cp, 0.0)
            gamma_q = same_channel_rate(eps1, eps2, eps1, eps2, float(Q), tol)
            worst = max(worst, abs(pauli_weights(phi21)[3] - gamma_q) / gamma_q)
    return _result("commuting channels stay Markovian", worst, 1e-8, "CP and sigma_z rate")


def check_second_step(tol: Tolerances) -> CheckResult:
    worst = 0.0
    rho = state_from_bloch([0.6, 0.0, 0.8])
    for a in np.linspace(0.0, 1.0, 5):
        for eps in (0.005, 0.01, 0.05, 0.1):
            for q in np.linspace(0.0, 1.0, 5):
                spec = CorrelatedPairSpec(eps, eps, float(q))
                pair = ChannelPair(float(a))
                rho1 = collide_once_analytic(rho, spec.eps, pair)
                phi21 = two_step_map(float(a), spec.Q, eps, eps, tol)
                expected = phi21.apply(rho1.matrix)
                got = second_step(rho1, float(a), eps, float(q), tol).matrix
                worst = max(worst, _norm(got - expected))
    return _result("second-step coefficients", worst, 1e-12, "5 x 4 x 5 grid")


def check_small_eps(tol: Tolerances) -> CheckResult:
    eps = 1e-3
    worst = 0.0
    rho = state_from_bloch([0.0, 0.6, 0.8])
    for a in (0.5, 1.0):
        for Q in (-1.0, 1.0):
            spec = CorrelatedPairSpec.from_correlation(eps, eps, Q)
            result = collide_pair_analytic(rho, spec, ChannelPair(a))
            truncated = truncated_second_step(result.rho1, a, eps, spec.q)
            worst = max(worst, _norm(result.rho2.matrix - truncated.matrix))
    return _result("small-eps expansion", worst, 10 * eps**3, "eps = 1e-3")


def check_no_backflow(rng: np.random.Generator, tol: Tolerances) -> CheckResult:
    worst = 0.0
    for a in (0.05, 0.5, 1.0):
        for Q in (-1.0, 0.0, 1.0):
            spec = CorrelatedPairSpec.from_correlation(0.01, 0.02, Q)
            pair = ChannelPair(a)
            rho, sigma = random_pure_state(rng), random_pure_state(rng)
            report = entropy_monotonicity_check(rho, spec, a, n_steps=4, tol=tol)
            steps = report.entropies
            worst = max(worst, *(max(0.0, e - l) for e, l in zip(steps, steps[1:])))
            chain_r = evolve_correlated_chain(rho, spec, pair, 4)
            chain_s = evolve_correlated_chain(sigma, spec, pair, 4)
            dist = [trace_distance(r, s, tol) for r, s in zip(chain_r, chain_s)]
            worst = max(worst, *(max(0.0, l - e) for e, l in zip(dist, dist[1:])))
    return _result("no information backflow", worst, 1e-10, "entropy and trace distance")


def check_delta_e_signs(tol: Tolerances) -> CheckResult:
    configs = (
        (1.0, 0.01, 0.01, BlochAngles(math.pi / 2, 0.0)),
        (0.0, 0.01, 0.02, BlochAngles(math.pi / 4, 0.0)),
    )
    bad = 0
    worst = 0.0
    for a, eps1, eps2, angles in configs:
        for Q in (-1.0, -0.5, 0.0, 0.5, 1.0):
            ent = entanglement_after_two(
                angles, CorrelatedPairSpec.from_correlation(eps1, eps2, Q), a, tol
            )
            if Q == 0.0:
                worst = max(worst, abs(ent.deltaE))
            elif np.sign(ent.deltaE) != -np.sign(Q):
                bad += 1
    deviation = worst if bad == 0 else math.inf
    return _result("entanglement sign structure", deviation, 1e-12, f"{bad} sign mismatches")


def check_ghz_parity(tol: Tolerances) -> CheckResult:
    worst = 0.0
    pair = ChannelPair(0.3)
    rho = state_from_bloch([0.6, 0.0, 0.8])
    for n in range(1, 5):
        spec = GhzChainSpec((0.9, 0.05, 0.05), n)
        exact = evolve_exact(rho, ghz_chain_density(spec), pair, tol=tol)[-1]
        worst = max(worst, _norm(ghz_evolve(rho, spec, pair).matrix - exact.matrix))
    return _result("GHZ parity", worst, 1e-12, "n = 1..4 against exact chain")


def check_kraus_roundtrip(tol: Tolerances) -> CheckResult:
    worst = 0.0
    extra_negatives = 0
    for a in (0.05, 0.5, 1.0):
        for Q in np.linspace(-1.0, 1.0, 5):
            phi21 = two_step_map(a, float(Q), 0.01, 0.02, tol)
            choi = choi_from_affine(phi21, tol)
            terms = kraus_from_choi(choi)
            rebuilt = affine_from_channel(channel_from_kraus(terms), tol)
            worst = max(worst, float(np.max(np.abs(rebuilt.Lambda - phi21.Lambda))))
            if sum(1 for t in terms if t.weight < -tol.cp) > 1:
                extra_negatives += 1
    deviation = worst if extra_negatives == 0 else math.inf
    return _result("Kraus round trip", deviation, 1e-10, f"{extra_negatives} maps with >1 negative weight")


def _single_step_cp(draws: list[_Draw], tol: Tolerances) -> CheckResult:
    worst = 0.0
    for d in draws:
        first = affine_from_channel(single_collision_map(d.spec.eps, d.pair), tol)
        worst = max(worst, -cp_test(choi_from_affine(first, tol)).min_eigenvalue)
    return _result("single collisions are CP", max(worst, 0.0), tol.cp, "Choi matrix >= 0")


def run_validation(
    samples: int = 50, seed: int = 20140107, tol: Tolerances = DEFAULT_TOLERANCES
) -> list[CheckResult]:
    """Run every check; a check that raises is reported as failed."""
    rng = np.random.default_rng(seed)
    draws = _draws(rng, samples)
    checks: list[tuple[str, Callable[[], CheckResult]]] = [
        ("single-step oracle", lambda: check_single_step_oracle(draws, tol)),
        ("two-step oracle", lambda: check_two_step_oracle(draws, tol)),
        ("pure vs dephased pair", lambda: check_dephased_pair(draws, tol)),
        ("trace, positivity, unitality", lambda: check_states_and_unitality(draws, tol)),
        ("single collisions are CP", lambda: _single_step_cp(draws, tol)),
        ("non-Markovian iff Q > 0", lambda: check_markov_sign(tol)),
        ("commuting channels stay Markovian", lambda: check_commuting_channels(tol)),
        ("second-step coefficients", lambda: check_second_step(tol)),
        ("small-eps expansion", lambda: check_small_eps(tol)),
        ("no information backflow", lambda: check_no_backflow(rng, tol)),
        ("entanglement sign structure", lambda: check_delta_e_signs(tol)),
        ("GHZ parity", lambda: check_ghz_parity(tol)),
        ("Kraus round trip", lambda: check_kraus_roundtrip(tol)),
    ]

    results: list[CheckResult] = []
    for name, check in checks:
        console.print(f"[blue]Checking {name}...[/blue]")
        try:
            results.append(check())
        except Exception as e:
            results.append(CheckResult(name, Status.FAIL, math.inf, math.nan, f"raised {e}"))
    return results


def print_validation_report(results: list[CheckResult]) -> bool:
    """Print a table of check outcomes and return True if every check passed."""
    table = Table(title="Oracle checks")
    table.add_column("Check", style="bold")
    table.add_column("Status")
    table.add_column("Max deviation", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Detail")

    for r in results:
        style = "green" if r.status == Status.PASS else "red"
        table.add_row(
            r.check,
            r.status.value,
            f"{r.max_deviation:.3e}",
            f"{r.tolerance:.1e}",
            r.detail,
            style=style,
        )
    console.print(table)

    failed = [r for r in results if r.status == Status.FAIL]
    if failed:
        console.print(f"\n[bold red]Validation failed: {len(failed)} check(s).[/bold red]")
        return False
    console.print("\n[bold green]Validation passed![/bold green]")
    return True
