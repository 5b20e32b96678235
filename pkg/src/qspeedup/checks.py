"""Built-in consistency checks wired to the `validate` CLI command.

Each check pits two independent routes to the same quantity against each
other (closed form vs kernel integration, reduction mappings, onset
detectors) or asserts a structural invariant.  All of them hold for a
correct build; any failure exits the CLI with a nonzero status.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bound_state, dynamics, measures, oracle, sweep
from .spectral import AtomKind, ModelParams, reservoir_integral, reservoir_integral_quad

TAU = 5.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    detail: str = ""


def _oracle_points(quick: bool):
    gammas = (0.5, 3.0) if quick else (0.1, 0.5, 1.0, 2.0, 3.0)
    ns = (1, 8) if quick else (1, 3, 8, 30)
    for g0 in gammas:
        for n in ns:
            yield ModelParams(gamma0=g0, n_atoms=n)
            for theta in (0.0, 1.0):
                yield ModelParams(gamma0=g0, n_atoms=n, theta=theta,
                                  kind=AtomKind.THREE_LEVEL_V)


def check_oracle_equivalence(quick: bool = False) -> CheckResult:
    """Closed-form trajectories against direct memory-kernel integration."""
    steps = 8192 if quick else 16384
    worst = 0.0
    count = 0
    for params in _oracle_points(quick):
        ref = oracle.solve_collective(params, TAU, steps=steps)
        if params.kind is AtomKind.THREE_LEVEL_V:
            amp = dynamics.nu1(ref.times, params)
        else:
            amp = dynamics.alpha1(ref.times, params)
        pop = dynamics.excited_population(ref.times, params)
        worst = max(worst,
                    float(np.abs(amp - ref.amplitude).max()),
                    float(np.abs(pop - ref.population).max()))
        count += 1
    return CheckResult("oracle-equivalence", worst < 1e-6, worst, 1e-6,
                       f"{count} parameter points")


def check_speedup_backflow_identity(quick: bool = False) -> CheckResult:
    """tau_qsl recomputed from the backflow and the final population."""
    gammas = (1.0, 2.0) if quick else (0.5, 1.0, 2.0, 3.0)
    ns = (1, 8) if quick else (1, 3, 8, 30)
    worst = 0.0
    count = 0
    for g0 in gammas:
        for n in ns:
            for params in (ModelParams(gamma0=g0, n_atoms=n),
                           ModelParams(gamma0=g0, n_atoms=n, theta=1.0,
                                       kind=AtomKind.THREE_LEVEL_V)):
                report = measures.evaluate_point(params, TAU)
                loss = 1.0 - report.final_population
                if loss <= 0.0:
                    continue
                recomputed = TAU / (2.0 * report.nonmarkov / loss + 1.0)
                worst = max(worst, abs(report.tau_qsl - recomputed))
                count += 1
    return CheckResult("speedup-backflow-identity", worst < 1e-9 * TAU, worst,
                       1e-9 * TAU, f"{count} parameter points")


def check_reduction_mappings(quick: bool = False) -> CheckResult:
    """V-type limits: theta=0 matches two-level, theta=1 matches doubled gamma0."""
    gammas = (1.5,) if quick else (0.5, 1.5, 3.0)
    ns = (3,) if quick else (1, 3, 8)
    t = np.linspace(0.0, TAU, 1025)
    worst = 0.0
    for g0 in gammas:
        for n in ns:
            flat = ModelParams(gamma0=g0, n_atoms=n, theta=0.0,
                               kind=AtomKind.THREE_LEVEL_V)
            aligned = ModelParams(gamma0=g0, n_atoms=n, theta=1.0,
                                  kind=AtomKind.THREE_LEVEL_V)
            two = ModelParams(gamma0=g0, n_atoms=n)
            two_doubled = ModelParams(gamma0=2.0 * g0, n_atoms=n)
            worst = max(worst, float(np.abs(
                dynamics.nu1(t, flat) * math.sqrt(2.0)
                - dynamics.alpha1(t, two)).max()))
            worst = max(worst, float(np.abs(
                dynamics.nu1(t, aligned) * math.sqrt(2.0)
                - dynamics.alpha1(t, two_doubled)).max()))
            for v_params, ref_params in ((flat, two), (aligned, two_doubled)):
                rv = measures.evaluate_point(v_params, TAU)
                rr = measures.evaluate_point(ref_params, TAU)
                worst = max(worst, abs(rv.tau_qsl - rr.tau_qsl),
                            abs(rv.ratio - rr.ratio),
                            abs(rv.nonmarkov - rr.nonmarkov),
                            abs(rv.final_population - rr.final_population))
    return CheckResult("reduction-mappings", worst < 1e-10, worst, 1e-10,
                       f"{len(gammas) * len(ns)} parameter points, both limits")


def check_bound_state_solver(quick: bool = False) -> CheckResult:
    """Residuals, closed-form vs quadrature integrals, monotone ordering."""
    pts = [ModelParams(gamma0=1.0),
           ModelParams(gamma0=2.0, n_atoms=3),
           ModelParams(gamma0=1.5, n_atoms=1, theta=1.0, kind=AtomKind.THREE_LEVEL_V)]
    if not quick:
        pts += [ModelParams(gamma0=3.0, n_atoms=8),
                ModelParams(gamma0=2.5, n_atoms=30, theta=0.5,
                            kind=AtomKind.THREE_LEVEL_V)]
    worst = 0.0
    quad_ok = True
    for params in pts:
        res = bound_state.find_bound_state(params)
        worst = max(worst, res.residual)
        closed = reservoir_integral(res.energy, params)
        quad = reservoir_integral_quad(res.energy, params)
        quad_ok = quad_ok and abs(closed - quad) < 1e-8 * abs(closed)

    def energy(g0, n, theta=0.0, kind=AtomKind.TWO_LEVEL):
        return bound_state.find_bound_state(
            ModelParams(gamma0=g0, n_atoms=n, theta=theta, kind=kind)).energy

    ordered = (
        energy(1.0, 3) > energy(2.0, 3) > energy(3.0, 3)
        and energy(2.0, 1) > energy(2.0, 3) > energy(2.0, 8)
        and energy(2.0, 3, 0.0, AtomKind.THREE_LEVEL_V)
        > energy(2.0, 3, 0.5, AtomKind.THREE_LEVEL_V)
        > energy(2.0, 3, 1.0, AtomKind.THREE_LEVEL_V)
    )
    passed = worst < 1e-10 and ordered and quad_ok
    detail = (f"{len(pts)} residuals; ordering {'ok' if ordered else 'violated'}; "
              f"quadrature {'ok' if quad_ok else 'off'}")
    return CheckResult("bound-state-solver", passed, worst, 1e-10, detail)


def check_onset_agreement(quick: bool = False) -> CheckResult:
    """The speedup and backflow detectors locate the same critical coupling.

    Restricted to N >= 3: there the backflow grows steeply past onset, so the
    two indicator thresholds land within 1e-3 of each other.  For N = 1 the
    first backflow is quadratically shallow and the detectors legitimately
    separate by ~1e-2.
    """
    cases = [(AtomKind.TWO_LEVEL, 8, 0.0)]
    if not quick:
        cases += [(AtomKind.TWO_LEVEL, 30, 0.0), (AtomKind.THREE_LEVEL_V, 3, 1.0)]
    worst = 0.0
    for kind, n, theta in cases:
        a = sweep.find_critical_coupling(kind, n, theta,
                                         criterion=sweep.OnsetCriterion.SPEEDUP)
        b = sweep.find_critical_coupling(kind, n, theta,
                                         criterion=sweep.OnsetCriterion.NONMARKOV)
        worst = max(worst, abs(a - b))
    return CheckResult("onset-agreement", worst < 1e-3, worst, 1e-3,
                       f"{len(cases)} cases")


def check_steady_population(quick: bool = False) -> CheckResult:
    """Long-time symmetric amplitude settles at (N-1)/N."""
    worst = 0.0
    for n in (3, 8, 30):
        params = ModelParams(gamma0=1.0, n_atoms=n)
        amp = dynamics.alpha1(50.0, params)
        worst = max(worst, abs(abs(amp) - (n - 1) / n))
    return CheckResult("steady-population", worst < 1e-6, worst, 1e-6, "N in {3, 8, 30}")


def check_speedup_monotone_in_n(quick: bool = False) -> CheckResult:
    """More emitters accelerate the evolution: ratio falls with N at gamma0=2."""
    ratios = [measures.evaluate_point(ModelParams(gamma0=2.0, n_atoms=n), TAU).ratio
              for n in (1, 3, 8, 30)]
    gaps = np.diff(ratios)
    worst = float(max(0.0, gaps.max()))
    return CheckResult("speedup-monotone-in-n", bool(np.all(gaps < 0)), worst, 0.0,
                       "N in {1, 3, 8, 30} at gamma0=2")


def check_norm_ordering(quick: bool = False) -> CheckResult:
    """Schatten norms: inf <= 2 <= 1, plus the triangle inequality."""
    rng = np.random.default_rng(7)
    worst = -math.inf
    for _ in range(8 if quick else 24):
        dim = int(rng.integers(2, 4))
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        b = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        n1 = measures.schatten_norm(a, 1)
        n2 = measures.schatten_norm(a, 2)
        ninf = measures.schatten_norm(a, math.inf)
        worst = max(worst, ninf - n2, n2 - n1,
                    measures.schatten_norm(a + b, 1)
                    - measures.schatten_norm(a, 1) - measures.schatten_norm(b, 1))
    return CheckResult("norm-ordering", worst < 1e-12, max(worst, 0.0), 1e-12,
                       "random matrices, seed 7")


ALL_CHECKS = (
    check_oracle_equivalence,
    check_speedup_backflow_identity,
    check_reduction_mappings,
    check_bound_state_solver,
    check_onset_agreement,
    check_steady_population,
    check_speedup_monotone_in_n,
    check_norm_ordering,
)


def run_checks(quick: bool = False) -> list[CheckResult]:
    results = []
    for fn in ALL_CHECKS:
        try:
            results.append(fn(quick))
        except Exception as exc:  # a crashed check is a failed check
            name = fn.__name__.removeprefix("check_").replace("_", "-")
            results.append(CheckResult(name, False, math.inf, 0.0,
                                       f"raised {exc!r}"))
    return results
