"""Scripted numerical experiments over both evolution models.

Three harnesses: a long-run trait-selection experiment on the
population model (recording totals, per-trait section curves, the final
histogram and the mean-trait curve), a seeded sweep of the drift-chain
expected state over a grid of downward-mass fractions, and a
verification grid comparing the tridiagonal closed forms against the
direct solver.

Everything here is deterministic given seeds and parameters; sweep
results are ordered by position in the input grids, never by completion
order, so output files are reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionMismatchError, SingularMatrixError
from .markov import (
    ChainSpec,
    RandomSource,
    StationaryDistribution,
    build_random_transition,
    expected_state,
    expected_state_closed,
    hessenberg_build,
    hessenberg_stationary_closed,
    stationary_direct,
    stationary_power,
)
from .verhulst import (
    EMPTY_TOTAL,
    SimulationTrace,
    VerhulstParams,
    l1_norm,
    simulate,
)

__all__ = [
    "DEFAULT_SECTION_TRAITS",
    "DEFAULT_SWEEP_DELTAS",
    "DEFAULT_SWEEP_SEEDS",
    "CLOSED_FORM_FLAG_TOLERANCE",
    "PopulationExperimentResult",
    "SweepResult",
    "ClosedFormEntry",
    "ClosedFormReport",
    "run_population_experiment",
    "run_delta_sweep",
    "verify_closed_form",
]

DEFAULT_SECTION_TRAITS = (5, 10, 15, 20, 25)
DEFAULT_SWEEP_DELTAS = (0.4, 0.2, 0.1, 0.05)
DEFAULT_SWEEP_SEEDS = (1, 2, 3, 4, 5)
CLOSED_FORM_FLAG_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class PopulationExperimentResult:
    """Curves extracted from one long population run.

    ``sections[i]`` is the count of individuals at trait
    ``section_traits[i]`` across generations; each section is one
    coordinate of the population vector and therefore pointwise at most
    the total.  ``final_histogram`` is the last generation's full
    trait profile.
    """

    trace: SimulationTrace
    section_traits: tuple[int, ...]
    sections: np.ndarray
    final_histogram: np.ndarray

    @property
    def totals(self) -> np.ndarray:
        return self.trace.totals

    @property
    def expected_velocities(self) -> np.ndarray:
        return self.trace.expected_velocities

    def section(self, trait: int) -> np.ndarray:
        """Curve of the section at ``trait``.  Raises if not recorded."""
        try:
            i = self.section_traits.index(trait)
        except ValueError:
            raise KeyError(
                f"trait {trait} was not recorded; sections exist for {self.section_traits}"
            ) from None
        return self.sections[i]


@dataclass(frozen=True, eq=False)
class SweepResult:
    """One run of the drift-chain sweep.

    Carries the full spec of the run, so it can be reproduced exactly.
    When the solver fails, ``error`` holds its message and the numeric
    fields are NaN (``pi`` is None); the sweep itself keeps going.
    """

    n: int
    epsilon: float
    delta: float
    seed: int
    pi: np.ndarray | None
    expected_state: float
    residual: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class ClosedFormEntry:
    n: int
    delta: float
    deviation: float


@dataclass(frozen=True)
class ClosedFormReport:
    """Deviations between the tridiagonal closed forms and the direct solver.

    ``deviation`` per grid point is the larger of the L-infinity gap
    between the two stationary distributions and the gap between the two
    expected states.  Entries beyond ``flag_tolerance`` appear in
    ``flagged``.
    """

    entries: tuple[ClosedFormEntry, ...]
    flagged: tuple[ClosedFormEntry, ...]
    max_deviation: float
    flag_tolerance: float

    @property
    def ok(self) -> bool:
        return not self.flagged


def _sections_for(v_max: int, section_traits) -> tuple[int, ...]:
    if section_traits is None:
        chosen = tuple(t for t in DEFAULT_SECTION_TRAITS if t <= v_max)
        return chosen if chosen else (v_max,)
    traits = tuple(int(t) for t in section_traits)
    for t in traits:
        if not 1 <= t <= v_max:
            raise ValueError(f"section trait {t} outside the range 1..{v_max}")
    return traits


def run_population_experiment(
    params: VerhulstParams,
    population0,
    generations: int = 5000,
    section_traits=None,
) -> PopulationExperimentResult:
    """Long population run with per-trait section curves.

    Parameters
    ----------
    params : VerhulstParams
    population0 : array_like, shape (v_max,)
    generations : int
        Number of steps; 0 records the initial state alone.
    section_traits : sequence of int, optional
        Traits whose per-generation counts are extracted.  Defaults to
        (5, 10, 15, 20, 25) clipped to ``v_max`` (or just ``v_max`` when
        even 5 is out of range).

    Returns
    -------
    PopulationExperimentResult
    """
    if generations < 0:
        raise ValueError(f"generations must be >= 0, got {generations}")
    traits = _sections_for(params.v_max, section_traits)

    if generations == 0:
        p0 = np.asarray(population0, dtype=float)
        if p0.shape != (params.v_max,):
            raise DimensionMismatchError(
                f"population0 has shape {p0.shape}, params expect ({params.v_max},)"
            )
        if np.any(p0 < 0):
            raise ValueError("population0 must be non-negative")
        total = l1_norm(p0)
        scale = np.arange(1, params.v_max + 1, dtype=float)
        velocity = float(np.dot(scale, p0) / total) if total > EMPTY_TOTAL else np.nan
        trace = SimulationTrace(
            generations=p0[np.newaxis, :].copy(),
            totals=np.array([total]),
            expected_velocities=np.array([velocity]),
        )
    else:
        trace = simulate(population0, params, generations)

    sections = np.stack([trace.generations[:, t - 1] for t in traits])
    return PopulationExperimentResult(
        trace=trace,
        section_traits=traits,
        sections=sections,
        final_histogram=trace.generations[-1].copy(),
    )


def _normalize_seeds(seeds) -> tuple[int, ...]:
    if isinstance(seeds, (int, np.integer)):
        if seeds < 1:
            raise ValueError(f"seed count must be >= 1, got {seeds}")
        return tuple(range(1, int(seeds) + 1))
    out = tuple(int(s) for s in seeds)
    if not out:
        raise ValueError("seeds must not be empty")
    return out


def run_delta_sweep(
    n: int = 50,
    epsilon: float = 0.1,
    deltas=DEFAULT_SWEEP_DELTAS,
    seeds=DEFAULT_SWEEP_SEEDS,
    method: str = "direct",
) -> list[SweepResult]:
    """Expected state of random drift chains over a grid of ``delta``.

    For every ``delta`` and every seed, draws one chain and solves for
    its stationary distribution.  ``seeds`` may be an explicit sequence
    or a count ``k`` (meaning seeds ``1..k``).  Solver failures do not
    abort the sweep; they are captured per run in ``SweepResult.error``.

    Results are ordered by (position of delta, position of seed).
    """
    seed_list = _normalize_seeds(seeds)
    if method not in ("direct", "power"):
        raise ValueError(f"method must be 'direct' or 'power', got {method!r}")
    solve = stationary_direct if method == "direct" else stationary_power

    results: list[SweepResult] = []
    for delta in deltas:
        spec = ChainSpec(n=n, epsilon=epsilon, delta=float(delta))
        for seed in seed_list:
            matrix = build_random_transition(spec, RandomSource(seed))
            try:
                dist = solve(matrix)
            except (ConvergenceError, SingularMatrixError) as exc:
                results.append(
                    SweepResult(
                        n=n,
                        epsilon=epsilon,
                        delta=float(delta),
                        seed=seed,
                        pi=None,
                        expected_state=float("nan"),
                        residual=float("nan"),
                        error=str(exc),
                    )
                )
                continue
            results.append(
                SweepResult(
                    n=n,
                    epsilon=epsilon,
                    delta=float(delta),
                    seed=seed,
                    pi=dist.pi,
                    expected_state=expected_state(dist),
                    residual=dist.residual,
                )
            )
    return results


def verify_closed_form(
    n_range=range(4, 13),
    delta_grid=(0.05, 0.1, 0.2, 0.25, 0.4),
    flag_tolerance: float = CLOSED_FORM_FLAG_TOLERANCE,
    epsilon: float = 0.1,
) -> ClosedFormReport:
    """Compare the tridiagonal closed forms against the direct solver.

    For each pair (n, delta) the deviation is
    ``max(L_inf(pi_closed - pi_direct), |E_closed - E_direct|)``.
    Deviations beyond ``flag_tolerance`` are flagged, never raised.
    The stationary distribution itself does not depend on ``epsilon``;
    the parameter only shapes the matrix handed to the direct solver.
    """
    entries: list[ClosedFormEntry] = []
    for n in n_range:
        for delta in delta_grid:
            spec = ChainSpec(n=int(n), epsilon=epsilon, delta=float(delta))
            closed = hessenberg_stationary_closed(spec)
            direct = stationary_direct(hessenberg_build(spec))
            gap_pi = float(np.max(np.abs(closed.pi - direct.pi)))
            gap_e = abs(expected_state_closed(spec) - expected_state(direct))
            entries.append(
                ClosedFormEntry(
                    n=int(n), delta=float(delta), deviation=max(gap_pi, gap_e)
                )
            )
    flagged = tuple(e for e in entries if e.deviation > flag_tolerance)
    max_dev = max(e.deviation for e in entries) if entries else 0.0
    return ClosedFormReport(
        entries=tuple(entries),
        flagged=flagged,
        max_deviation=max_dev,
        flag_tolerance=flag_tolerance,
    )
