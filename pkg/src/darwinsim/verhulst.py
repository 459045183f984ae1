"""Trait-structured discrete logistic population dynamics.

The population is a vector of real-valued counts indexed by an integer
trait ``v = 1..v_max`` (think of it as the average running speed of the
individuals carrying it).  One generation applies two forces:

* selection — each trait class keeps the fraction ``1 - mortality(v)``
  of its members;
* reproduction with imperfect copying — every individual produces ``b``
  offspring whose trait is displaced from the parent's by a symmetric
  mutation kernel, and the whole brood is scaled by the logistic factor
  ``1 - total/K`` that vanishes as the population approaches the
  environmental capacity ``K`` (and is clamped to zero above it).

Offspring whose trait would fall outside ``[1, v_max]`` are discarded;
there is no reflection or re-normalisation at the boundary.

All counts are deterministic real numbers: this is a difference
equation, not an agent-based simulation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, EmptyPopulationError

__all__ = [
    "MutationKernel",
    "MortalityTable",
    "VerhulstParams",
    "SimulationTrace",
    "KernelReport",
    "ParamsReport",
    "RetentionTable",
    "nearest_neighbor_kernel",
    "inverse_trait_mortality",
    "constant_mortality",
    "default_params",
    "point_mass_population",
    "l1_norm",
    "validate_kernel",
    "validate_params",
    "convolve_mutation",
    "scalar_step",
    "population_step",
    "simulate",
    "mutation_retention",
    "upper_bound",
    "extinction_condition_holds",
    "expected_velocity",
]

# Totals at or below this are treated as an extinct population when
# computing statistics that divide by the total.
EMPTY_TOTAL = 1e-300


def l1_norm(values) -> float:
    """Total population size: plain left-to-right sum in binary64.

    Sequential accumulation keeps totals reproducible bit-for-bit across
    runs; the package's tolerances are calibrated against this order.
    """
    total = 0.0
    for x in values:
        total += float(x)
    return total


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class MutationKernel:
    """Symmetric probability mass function of trait displacements.

    ``mass[j]`` is the probability that a child's trait differs from the
    parent's by ``j - v_max``, for displacements ``-v_max..v_max``.
    Construction only enforces the shape; use :func:`validate_kernel` to
    check the probabilistic axioms (range, symmetry, monotone tail,
    normalisation) — violations there are report content, not errors.
    """

    v_max: int
    mass: np.ndarray

    def __post_init__(self):
        if self.v_max < 1:
            raise ValueError(f"v_max must be a positive integer, got {self.v_max}")
        mass = np.asarray(self.mass, dtype=float)
        if mass.shape != (2 * self.v_max + 1,):
            raise DimensionMismatchError(
                f"kernel mass must have length 2*v_max+1 = {2 * self.v_max + 1}, "
                f"got shape {mass.shape}"
            )
        if not np.all(np.isfinite(mass)):
            raise ValueError("kernel mass must be finite")
        object.__setattr__(self, "mass", _readonly(mass))

    def mass_at(self, displacement: int) -> float:
        """Probability of a trait displacement ``u`` in ``-v_max..v_max``."""
        u = int(displacement)
        if abs(u) > self.v_max:
            return 0.0
        return float(self.mass[u + self.v_max])


@dataclass(frozen=True, eq=False)
class MortalityTable:
    """Per-generation death probability for each trait ``v = 1..v_max``.

    Values must lie in ``(0, 1]``.  A value of exactly 1 (no survivors
    for that trait) is admitted but flagged by :func:`validate_params`.
    """

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("mortality table must be a non-empty 1-d array")
        if not np.all(np.isfinite(values)):
            raise ValueError("mortality values must be finite")
        bad = np.flatnonzero((values <= 0.0) | (values > 1.0))
        if bad.size:
            v = bad[0] + 1
            raise ValueError(
                f"mortality must lie in (0, 1]; trait v={v} has {values[bad[0]]!r}"
            )
        object.__setattr__(self, "values", _readonly(values))

    @property
    def v_max(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class VerhulstParams:
    """Parameter bundle for the trait-structured logistic model.

    Attributes
    ----------
    birth_rate : float
        Offspring per individual per generation, > 0.
    capacity : float
        Environmental capacity ``K`` in individuals, > 0.
    v_max : int
        Trait-range radius; must match the kernel and mortality table.
    kernel : MutationKernel
    mortality : MortalityTable
    """

    birth_rate: float
    capacity: float
    v_max: int
    kernel: MutationKernel
    mortality: MortalityTable

    def __post_init__(self):
        if not self.birth_rate > 0:
            raise ValueError(f"birth_rate must be > 0, got {self.birth_rate}")
        if not self.capacity > 0:
            raise ValueError(f"capacity must be > 0, got {self.capacity}")
        if self.kernel.v_max != self.v_max or self.mortality.v_max != self.v_max:
            raise DimensionMismatchError(
                f"v_max mismatch: params={self.v_max}, kernel={self.kernel.v_max}, "
                f"mortality={self.mortality.v_max}"
            )


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    """Generation-by-generation record of a simulation run.

    ``generations`` has shape ``(n_generations + 1, v_max)`` with row 0
    the initial population.  ``totals[k]`` is the sequential L1 norm of
    row ``k``; ``expected_velocities[k]`` is the population-weighted mean
    trait, or NaN where the total is numerically zero.
    """

    generations: np.ndarray
    totals: np.ndarray
    expected_velocities: np.ndarray

    @property
    def n_generations(self) -> int:
        return self.generations.shape[0] - 1

    @property
    def v_max(self) -> int:
        return self.generations.shape[1]


@dataclass(frozen=True)
class KernelReport:
    """Outcome of the kernel axiom checks."""

    ok: bool
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class ParamsReport:
    """Outcome of whole-parameter validation plus bound diagnostics.

    ``max_survival`` is ``max(1 - mortality)``, the quantity the
    population bound is built from; ``kernel_complement_l2`` is the l2
    norm of ``1 - mass`` over the kernel's full support, recorded
    alongside it for reference.
    """

    ok: bool
    violations: tuple[str, ...]
    warnings: tuple[str, ...]
    max_survival: float
    kernel_complement_l2: float
    max_retention: float


@dataclass(frozen=True, eq=False)
class RetentionTable:
    """Fraction of each parent trait's offspring mass kept in ``[1, v_max]``."""

    values: np.ndarray = field(repr=False)
    max_value: float = 0.0


# ---------------------------------------------------------------------------
# Constructors for the stock configurations


def nearest_neighbor_kernel(v_max: int, stay: float = 0.9, step: float = 0.05) -> MutationKernel:
    """Kernel whose support is ``{-1, 0, 1}``: stay with probability
    ``stay``, move one trait up or down with probability ``step`` each.

    The defaults (0.9 / 0.05) are the stock configuration used by the
    bundled experiments.  ``stay + 2*step`` must equal 1.
    """
    if v_max < 1:
        raise ValueError("v_max must be >= 1")
    if step < 0 or stay < step:
        raise ValueError("need stay >= step >= 0 for a monotone kernel")
    if abs(stay + 2.0 * step - 1.0) > 1e-12:
        raise ValueError(f"stay + 2*step must be 1, got {stay + 2 * step}")
    mass = np.zeros(2 * v_max + 1)
    mass[v_max] = stay
    if v_max >= 1:
        mass[v_max - 1] = step
        mass[v_max + 1] = step
    return MutationKernel(v_max=v_max, mass=mass)


def inverse_trait_mortality(v_max: int) -> MortalityTable:
    """Mortality ``1/v``: faster traits survive better; trait 1 never does."""
    return MortalityTable(values=1.0 / np.arange(1, v_max + 1))


def constant_mortality(v_max: int, rate: float) -> MortalityTable:
    """Trait-independent mortality, e.g. for extinction-regime studies."""
    return MortalityTable(values=np.full(v_max, float(rate)))


def default_params(
    v_max: int = 25, birth_rate: float = 0.5, capacity: float = 10_000.0
) -> VerhulstParams:
    """Stock parameter set: nearest-neighbour kernel and ``1/v`` mortality."""
    return VerhulstParams(
        birth_rate=birth_rate,
        capacity=capacity,
        v_max=v_max,
        kernel=nearest_neighbor_kernel(v_max),
        mortality=inverse_trait_mortality(v_max),
    )


def point_mass_population(v_max: int, trait: int = 1, size: float = 100.0) -> np.ndarray:
    """Population of ``size`` individuals all carrying ``trait``."""
    if not 1 <= trait <= v_max:
        raise ValueError(f"trait must be in 1..{v_max}, got {trait}")
    p0 = np.zeros(v_max)
    p0[trait - 1] = size
    return p0


# ---------------------------------------------------------------------------
# Validation


def validate_kernel(kernel: MutationKernel) -> KernelReport:
    """Check the four kernel axioms; violations are data, not failures.

    Axioms: every mass in [0, 1]; symmetry under displacement negation;
    non-increasing mass for displacements 0, 1, 2, ...; total mass 1
    within absolute tolerance 1e-12.
    """
    mass = kernel.mass
    v_max = kernel.v_max
    violations: list[str] = []
    for j, m in enumerate(mass):
        if not 0.0 <= m <= 1.0:
            violations.append(f"range: mass({j - v_max}) = {m!r} outside [0, 1]")
    for u in range(1, v_max + 1):
        lo, hi = mass[v_max - u], mass[v_max + u]
        if lo != hi:
            violations.append(f"symmetry: mass(-{u}) = {lo!r} != mass({u}) = {hi!r}")
    for u in range(0, v_max):
        if mass[v_max + u] < mass[v_max + u + 1]:
            violations.append(
                f"monotone tail: mass({u}) = {mass[v_max + u]!r} < "
                f"mass({u + 1}) = {mass[v_max + u + 1]!r}"
            )
    total = l1_norm(mass)
    if abs(total - 1.0) > 1e-12:
        violations.append(f"normalization: total mass {total!r} != 1 beyond 1e-12")
    return KernelReport(ok=not violations, violations=tuple(violations))


def validate_params(params: VerhulstParams) -> ParamsReport:
    """Validate a parameter bundle and report the bound diagnostics.

    Kernel axiom violations land in ``violations``.  Traits whose
    mortality is exactly 1 are legal but reported in ``warnings`` since
    they leave no survivors.  The report also records the two norm
    quantities relevant to the population bound (see
    :class:`ParamsReport`).
    """
    kernel_report = validate_kernel(params.kernel)
    warnings = tuple(
        f"trait v={v + 1}: mortality is exactly 1 (no survivors in this class)"
        for v in np.flatnonzero(params.mortality.values == 1.0)
    )
    retention = mutation_retention(params.kernel)
    return ParamsReport(
        ok=kernel_report.ok,
        violations=kernel_report.violations,
        warnings=warnings,
        max_survival=float(np.max(1.0 - params.mortality.values)),
        kernel_complement_l2=float(np.linalg.norm(1.0 - params.kernel.mass)),
        max_retention=retention.max_value,
    )


# ---------------------------------------------------------------------------
# Dynamics


def convolve_mutation(population, kernel: MutationKernel, birth_rate: float) -> np.ndarray:
    """Newborns per trait produced by one round of imperfect copying.

    Parameters
    ----------
    population : array_like, shape (v_max,)
        Parent counts per trait.
    kernel : MutationKernel
        Trait-displacement distribution of offspring.
    birth_rate : float
        Offspring per parent.

    Returns
    -------
    ndarray, shape (v_max,)
        ``birth_rate * sum_u population[u] * mass(v - u)`` for each trait
        ``v``.  Mass displaced outside ``[1, v_max]`` is discarded.
    """
    p = np.asarray(population, dtype=float)
    if p.shape != (kernel.v_max,):
        raise DimensionMismatchError(
            f"population has shape {p.shape}, kernel expects ({kernel.v_max},)"
        )
    full = np.convolve(p, kernel.mass)
    return birth_rate * full[kernel.v_max : 2 * kernel.v_max]


def scalar_step(population: float, mortality: float, birth_rate: float, capacity: float) -> float:
    """One generation of the unstructured logistic baseline model.

    ``(1-m)*P + b*P*(1 - P/K)`` with the birth term clamped to zero for
    ``P > K`` so births are never negative.
    """
    if not 0.0 < mortality <= 1.0:
        raise ValueError(f"mortality must be in (0, 1], got {mortality}")
    if not birth_rate > 0:
        raise ValueError(f"birth_rate must be > 0, got {birth_rate}")
    if not capacity > 0:
        raise ValueError(f"capacity must be > 0, got {capacity}")
    if population < 0:
        raise ValueError(f"population must be >= 0, got {population}")
    survivors = (1.0 - mortality) * population
    if population > capacity:
        return survivors
    return survivors + birth_rate * population * (1.0 - population / capacity)


def population_step(population, params: VerhulstParams) -> np.ndarray:
    """Advance the trait-structured population by one generation.

    Parameters
    ----------
    population : array_like, shape (v_max,)
        Current counts per trait (non-negative).
    params : VerhulstParams

    Returns
    -------
    ndarray, shape (v_max,)
        ``(1 - mortality(v)) * P(v)`` plus the mutation-convolved births
        scaled by the logistic factor ``1 - total/K``.  The factor uses
        the population *total*, and the birth term is zero whenever the
        total exceeds the capacity (inclusive indicator at ``K``, where
        the factor vanishes anyway).
    """
    p = np.asarray(population, dtype=float)
    if p.shape != (params.v_max,):
        raise DimensionMismatchError(
            f"population has shape {p.shape}, params expect ({params.v_max},)"
        )
    total = l1_norm(p)
    survivors = (1.0 - params.mortality.values) * p
    if total > params.capacity:
        return survivors
    births = convolve_mutation(p, params.kernel, params.birth_rate)
    return survivors + births * (1.0 - total / params.capacity)


def simulate(population0, params: VerhulstParams, n_generations: int) -> SimulationTrace:
    """Run the model for ``n_generations`` steps and record every generation.

    Parameters
    ----------
    population0 : array_like, shape (v_max,)
        Initial counts per trait; must be non-negative.
    params : VerhulstParams
    n_generations : int
        Number of steps, >= 1.

    Returns
    -------
    SimulationTrace
        ``n_generations + 1`` rows starting at ``population0``, with the
        per-generation totals and expected velocities (NaN once the
        population is numerically extinct).
    """
    if n_generations < 1:
        raise ValueError(f"n_generations must be >= 1, got {n_generations}")
    p0 = np.asarray(population0, dtype=float)
    if p0.shape != (params.v_max,):
        raise DimensionMismatchError(
            f"population0 has shape {p0.shape}, params expect ({params.v_max},)"
        )
    if np.any(p0 < 0):
        raise ValueError("population0 must be non-negative")

    generations = np.empty((n_generations + 1, params.v_max))
    generations[0] = p0
    for k in range(n_generations):
        generations[k + 1] = population_step(generations[k], params)

    totals = np.array([l1_norm(row) for row in generations])
    traits = np.arange(1, params.v_max + 1, dtype=float)
    velocities = np.array(
        [
            float(np.dot(traits, row) / t) if t > EMPTY_TOTAL else np.nan
            for row, t in zip(generations, totals)
        ]
    )
    return SimulationTrace(
        generations=generations, totals=totals, expected_velocities=velocities
    )


# ---------------------------------------------------------------------------
# Analytic certificates and statistics


def mutation_retention(kernel: MutationKernel) -> RetentionTable:
    """Per-parent-trait fraction of offspring mass landing inside ``[1, v_max]``.

    ``values[u-1] = sum_v mass(v - u)`` over admissible child traits
    ``v``; ``max_value`` is its maximum, which is at most 1 for any
    normalised kernel.
    """
    v_max = kernel.v_max
    prefix = np.concatenate(([0.0], np.cumsum(kernel.mass)))
    u = np.arange(1, v_max + 1)
    values = prefix[2 * v_max + 1 - u] - prefix[v_max + 1 - u]
    return RetentionTable(values=values, max_value=float(values.max()))


def upper_bound(params: VerhulstParams, population0) -> float:
    """Certified ceiling for the population total at every generation.

    The total can never exceed
    ``max(g^2 / (4 b r) * K, K, total0)`` where
    ``g = max(1 - mortality) + b * r`` and ``r`` is the maximal retained
    birth mass.  The first term is the peak of the quadratic one-step
    map below capacity, the other two cover populations starting at or
    above capacity.
    """
    max_survival = float(np.max(1.0 - params.mortality.values))
    retention = mutation_retention(params.kernel).max_value
    growth = max_survival + params.birth_rate * retention
    peak = growth**2 / (4.0 * params.birth_rate * retention) * params.capacity
    return max(peak, params.capacity, l1_norm(population0))


def extinction_condition_holds(params: VerhulstParams) -> bool:
    """Sufficient condition for the population to die out.

    True iff ``max(1 - mortality) + b * max_retention <= 1``: even at
    full logistic strength one generation cannot grow the total, so it
    decreases to zero.
    """
    max_survival = float(np.max(1.0 - params.mortality.values))
    retention = mutation_retention(params.kernel).max_value
    return max_survival + params.birth_rate * retention <= 1.0


def expected_velocity(population) -> float:
    """Population-weighted mean trait, in ``[1, v_max]``.

    Raises
    ------
    EmptyPopulationError
        If the population total is zero or below 1e-300; the statistic
        is undefined there.
    """
    p = np.asarray(population, dtype=float)
    total = l1_norm(p)
    if not total > EMPTY_TOTAL:
        raise EmptyPopulationError(
            f"expected velocity is undefined for an empty population (total={total!r})"
        )
    traits = np.arange(1, p.shape[0] + 1, dtype=float)
    return float(np.dot(traits, p) / total)
