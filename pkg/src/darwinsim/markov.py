"""Markov-chain model of trait drift under directional pressure.

A population occupies one of ``n`` ordered states (low index = low
trait value).  Each row of the transition matrix keeps ``1 - epsilon``
on the diagonal and splits the remaining ``epsilon`` so that a fraction
``delta < 0.5`` of it points to lower states: the chain is constantly
pushed toward higher indices, the drift analogue of selection pressure.

The module provides a seeded random constructor for such matrices, an
assumption validator, two independent stationary-distribution solvers
(power iteration and a direct linear solve), and closed forms for the
tridiagonal special case where the stationary distribution is a
geometric profile with ratio ``(1-delta)/delta``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, SingularMatrixError

__all__ = [
    "ChainSpec",
    "RandomSource",
    "StationaryDistribution",
    "AssumptionCheck",
    "AssumptionsReport",
    "is_row_stochastic",
    "require_row_stochastic",
    "build_random_transition",
    "validate_assumptions",
    "stationary_power",
    "stationary_direct",
    "expected_state",
    "hessenberg_build",
    "hessenberg_stationary_closed",
    "expected_state_closed",
    "limit_expected_state",
]

ROW_SUM_TOLERANCE = 1e-12
DEFAULT_POWER_TOLERANCE = 1e-12
DEFAULT_MAX_ITERATIONS = 10_000_000
DEFAULT_PIVOT_TOLERANCE = 1e-13

# splitmix64 constants (Steele, Lea & Vigna, "Fast splittable
# pseudorandom number generators", OOPSLA 2014).
_SPLITMIX_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SPLITMIX_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_SPLITMIX_MIX2 = np.uint64(0x94D049BB133111EB)


@dataclass(frozen=True)
class ChainSpec:
    """Shape parameters of a drift chain.

    ``n`` states; each row carries ``1 - epsilon`` on the diagonal and
    ``epsilon`` off it, of which the fraction ``delta`` is directed to
    lower states.  Both rates must lie strictly inside ``(0, 0.5)``;
    the tridiagonal closed forms additionally require ``n > 3``.
    """

    n: int
    epsilon: float
    delta: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must be in (0, 0.5), got {self.epsilon}")
        if not 0.0 < self.delta < 0.5:
            raise ValueError(f"delta must be in (0, 0.5), got {self.delta}")


@dataclass(eq=False)
class RandomSource:
    """Deterministic uniform source, fully determined by a 64-bit seed.

    The stream is splitmix64: draw ``i`` (counted from 1) mixes the word
    ``seed + i * gamma`` through the standard two-round xor-multiply
    finaliser, and the top 53 bits are mapped to the centre of their
    dyadic bin, giving doubles strictly inside ``(0, 1)``.  The mapping
    is pure 64-bit integer arithmetic plus one float division, so
    identical seeds reproduce identical sequences on every platform, and
    draws depend only on their position in the stream: splitting one
    request into several yields the same values.

    The counter is single-owner mutable state: give each parallel task
    its own instance.
    """

    seed: int

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        self._state = np.uint64(self.seed)
        self._drawn = 0

    def uniform_open(self, k: int) -> np.ndarray:
        """``k`` independent draws from the open unit interval."""
        if k < 0:
            raise ValueError(f"draw count must be non-negative, got {k}")
        index = np.arange(self._drawn + 1, self._drawn + k + 1, dtype=np.uint64)
        self._drawn += int(k)
        with np.errstate(over="ignore"):
            z = self._state + index * _SPLITMIX_GAMMA
            z = (z ^ (z >> np.uint64(30))) * _SPLITMIX_MIX1
            z = (z ^ (z >> np.uint64(27))) * _SPLITMIX_MIX2
            z = z ^ (z >> np.uint64(31))
        return ((z >> np.uint64(11)).astype(np.float64) + 0.5) / float(1 << 53)


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    """Probability row vector fixed by a transition matrix.

    ``residual`` is the achieved L1 fixed-point defect ``‖πP - π‖₁``.
    """

    pi: np.ndarray
    residual: float

    @property
    def n(self) -> int:
        return self.pi.shape[0]


@dataclass(frozen=True)
class AssumptionCheck:
    passed: bool
    witnesses: tuple[str, ...] = ()


@dataclass(frozen=True)
class AssumptionsReport:
    """Per-assumption verdicts for a transition matrix.

    ``constant_diagonal``: every diagonal entry equals ``1 - epsilon``
    (the chain is lazy, hence aperiodic).  ``monotone_neighbors``:
    jump probability decays with distance on both sides of the diagonal
    and one-step neighbours are reachable (irreducibility).
    ``upward_pressure``: every interior row sends more mass up than
    down.
    """

    constant_diagonal: AssumptionCheck
    monotone_neighbors: AssumptionCheck
    upward_pressure: AssumptionCheck
    strict: bool

    @property
    def all_passed(self) -> bool:
        return (
            self.constant_diagonal.passed
            and self.monotone_neighbors.passed
            and self.upward_pressure.passed
        )


def is_row_stochastic(matrix, atol: float = ROW_SUM_TOLERANCE) -> bool:
    """True iff all entries are in [0, 1] and every row sums to 1 within ``atol``."""
    P = np.asarray(matrix, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        return False
    if np.any(P < 0) or np.any(P > 1):
        return False
    return bool(np.all(np.abs(P.sum(axis=1) - 1.0) <= atol))


def require_row_stochastic(matrix, atol: float = ROW_SUM_TOLERANCE) -> np.ndarray:
    """Return the matrix as a float array, raising if it is not row-stochastic."""
    P = np.asarray(matrix, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise ValueError(f"transition matrix must be square, got shape {P.shape}")
    if np.any(P < 0) or np.any(P > 1):
        raise ValueError("transition probabilities must lie in [0, 1]")
    defect = np.abs(P.sum(axis=1) - 1.0)
    if np.any(defect > atol):
        i = int(np.argmax(defect))
        raise ValueError(
            f"row {i + 1} sums to {P[i].sum()!r}, off by more than {atol}"
        )
    return P


def build_random_transition(spec: ChainSpec, rng: RandomSource) -> np.ndarray:
    """Draw a random transition matrix with the drift structure.

    Every diagonal entry is ``1 - epsilon``.  Off-diagonal mass per row
    comes from uniform draws rescaled to the row's budget and sorted so
    probabilities decay away from the diagonal: the first row spreads
    ``epsilon`` rightward (sorted descending), the last row spreads it
    leftward (ascending), and each interior row spreads ``delta*epsilon``
    over its left block (ascending) and ``(1-delta)*epsilon`` over its
    right block (descending).

    Returns
    -------
    ndarray, shape (n, n)
        Row-stochastic matrix; identical seeds give identical matrices.
    """
    n, eps, delta = spec.n, spec.epsilon, spec.delta
    P = np.zeros((n, n))
    for i in range(n):
        P[i, i] = 1.0 - eps
        if i == 0:
            v = rng.uniform_open(n - 1)
            P[0, 1:] = np.sort(eps * v / v.sum())[::-1]
        elif i == n - 1:
            u = rng.uniform_open(n - 1)
            P[n - 1, : n - 1] = np.sort(eps * u / u.sum())
        else:
            u = rng.uniform_open(i)
            P[i, :i] = np.sort(delta * eps * u / u.sum())
            v = rng.uniform_open(n - 1 - i)
            P[i, i + 1 :] = np.sort((1.0 - delta) * eps * v / v.sum())[::-1]
    return P


def validate_assumptions(
    matrix, epsilon: float, strict: bool = True, atol: float = ROW_SUM_TOLERANCE
) -> AssumptionsReport:
    """Check the three structural assumptions on a transition matrix.

    Parameters
    ----------
    matrix : array_like, shape (n, n)
        Row-stochastic transition matrix.
    epsilon : float
        Expected off-diagonal mass per row; the diagonal must equal
        ``1 - epsilon``.
    strict : bool
        In strict mode the away-from-diagonal decay must be strictly
        monotone (ties are failures); random constructions satisfy this
        with probability 1.  Non-strict mode accepts flat (e.g. zero)
        tails and fits tridiagonal matrices, whose entries beyond the
        first off-diagonal are constant at zero.

    Failures are report content, not exceptions.
    """
    P = require_row_stochastic(matrix, atol=atol)
    n = P.shape[0]

    diag_witnesses = tuple(
        f"row {i + 1}: diagonal {P[i, i]!r} != 1 - epsilon = {1.0 - epsilon!r}"
        for i in range(n)
        if abs(P[i, i] - (1.0 - epsilon)) > atol
    )

    mono_witnesses: list[str] = []
    for i in range(n):
        if i <= n - 2:
            right = P[i, i:]
            diffs = np.diff(right)
            bad = np.flatnonzero(diffs > 0 if not strict else diffs >= 0)
            if bad.size:
                j = i + int(bad[0]) + 1
                word = "non-increasing" if not strict else "strictly decreasing"
                mono_witnesses.append(
                    f"row {i + 1}: rightward sequence not {word} at column {j + 1}"
                )
            if not P[i, i + 1] > 0:
                mono_witnesses.append(f"row {i + 1}: right neighbour has zero probability")
        if i >= 1:
            left = P[i, : i + 1]
            diffs = np.diff(left)
            bad = np.flatnonzero(diffs < 0 if not strict else diffs <= 0)
            if bad.size:
                word = "non-decreasing" if not strict else "strictly increasing"
                mono_witnesses.append(
                    f"row {i + 1}: leftward sequence not {word} at column {int(bad[0]) + 2}"
                )
            if not P[i, i - 1] > 0:
                mono_witnesses.append(f"row {i + 1}: left neighbour has zero probability")

    pressure_witnesses = []
    for i in range(1, n - 1):
        down, up = P[i, :i].sum(), P[i, i + 1 :].sum()
        if not down < up:
            pressure_witnesses.append(
                f"row {i + 1}: downward mass {down!r} not below upward mass {up!r}"
            )

    return AssumptionsReport(
        constant_diagonal=AssumptionCheck(not diag_witnesses, diag_witnesses),
        monotone_neighbors=AssumptionCheck(not mono_witnesses, tuple(mono_witnesses)),
        upward_pressure=AssumptionCheck(not pressure_witnesses, tuple(pressure_witnesses)),
        strict=strict,
    )


def stationary_power(
    matrix,
    tolerance: float = DEFAULT_POWER_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> StationaryDistribution:
    """Stationary distribution by power iteration from the uniform start.

    Iterates ``pi <- pi P`` until the L1 fixed-point defect of the
    current iterate drops below ``tolerance``.  Intended for irreducible
    aperiodic chains, for which the iteration converges from any start.

    Raises
    ------
    ConvergenceError
        If the defect is still above tolerance after ``max_iterations``
        steps; the error carries the last residual.
    """
    P = require_row_stochastic(matrix)
    n = P.shape[0]
    pi = np.full(n, 1.0 / n)
    advanced = pi @ P
    residual = float(np.abs(advanced - pi).sum())
    for _ in range(max_iterations):
        if residual < tolerance:
            return StationaryDistribution(pi=pi, residual=residual)
        pi = advanced / advanced.sum()
        advanced = pi @ P
        residual = float(np.abs(advanced - pi).sum())
    if residual < tolerance:
        return StationaryDistribution(pi=pi, residual=residual)
    raise ConvergenceError(
        f"power iteration did not reach {tolerance} within {max_iterations} "
        f"iterations (last residual {residual})",
        residual=residual,
        iterations=max_iterations,
    )


def stationary_direct(
    matrix, pivot_tolerance: float = DEFAULT_PIVOT_TOLERANCE
) -> StationaryDistribution:
    """Stationary distribution by a direct linear solve.

    The fixed-point equations ``pi (P - I) = 0`` have one redundant
    component; the last equation of the transposed system is replaced by
    the normalisation ``sum(pi) = 1`` and the result solved by LU
    elimination with partial pivoting.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below ``pivot_tolerance`` relative to the
        largest one, which signals a reducible or near-reducible chain,
        or if the solution is not a probability vector up to round-off.
    """
    P = require_row_stochastic(matrix)
    n = P.shape[0]
    A = (P - np.eye(n)).T
    A[n - 1, :] = 1.0
    rhs = np.zeros(n)
    rhs[n - 1] = 1.0
    with warnings.catch_warnings():
        # scipy warns on exact singularity; the pivot check below turns
        # that condition into a typed error instead
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= pivot_tolerance * max(pivots.max(), 1.0):
        raise SingularMatrixError(
            f"fixed-point system is singular beyond pivot tolerance "
            f"{pivot_tolerance} (smallest pivot {pivots.min()!r}); "
            "the chain is reducible or nearly so"
        )
    pi = scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False)
    if pi.min() < -1e-12:
        raise SingularMatrixError(
            f"stationary solve produced a negative probability ({pi.min()!r}); "
            "the chain is too ill-conditioned for a direct solve"
        )
    pi = np.maximum(pi, 0.0)
    pi /= pi.sum()
    residual = float(np.abs(pi @ P - pi).sum())
    return StationaryDistribution(pi=pi, residual=residual)


def expected_state(distribution) -> float:
    """Mean state index ``sum_k k * pi_k``, a value in ``[1, n]``.

    Accepts a :class:`StationaryDistribution` or a bare probability
    vector.
    """
    pi = (
        distribution.pi
        if isinstance(distribution, StationaryDistribution)
        else np.asarray(distribution, dtype=float)
    )
    states = np.arange(1, pi.shape[0] + 1, dtype=float)
    return float(np.dot(states, pi))


# ---------------------------------------------------------------------------
# Tridiagonal special case and its closed forms


def _require_closed_form_size(n: int):
    if n <= 3:
        raise ValueError(f"the tridiagonal closed forms require n > 3, got {n}")


def hessenberg_build(spec: ChainSpec) -> np.ndarray:
    """Tridiagonal drift matrix: the fully structured special case.

    Diagonal ``1 - epsilon`` everywhere; the first and last rows send
    all their off-diagonal mass to their single neighbour; interior rows
    send ``delta*epsilon`` down and ``(1-delta)*epsilon`` up.  Requires
    ``n > 3``.
    """
    _require_closed_form_size(spec.n)
    n, eps, delta = spec.n, spec.epsilon, spec.delta
    P = np.zeros((n, n))
    np.fill_diagonal(P, 1.0 - eps)
    P[0, 1] = eps
    P[n - 1, n - 2] = eps
    for i in range(1, n - 1):
        P[i, i - 1] = delta * eps
        P[i, i + 1] = (1.0 - delta) * eps
    return P


def hessenberg_stationary_closed(spec: ChainSpec) -> StationaryDistribution:
    """Exact stationary distribution of the tridiagonal drift matrix.

    The fixed-point equations force the component ratios
    ``pi_2 = pi_1 / delta``, ``pi_{k+1} = pi_k (1-delta)/delta`` for
    ``k = 2..n-2`` and ``pi_n = (1-delta) pi_{n-1}``; normalising the
    resulting geometric profile gives the distribution without ever
    forming ``delta**(n-1)``, which would underflow for large ``n``.
    The recurrence is accumulated from the largest component downward so
    no intermediate overflows either.

    The reported residual is measured against the matrix built from the
    same spec; the distribution itself does not depend on ``epsilon``.
    """
    _require_closed_form_size(spec.n)
    n, delta = spec.n, spec.delta
    down = delta / (1.0 - delta)
    w = np.zeros(n)
    # States 2..n-1 form a geometric ladder; its top (state n-1) anchors
    # the scale at 1 so every weight stays in [0, 1].
    w[n - 2] = 1.0
    for j in range(n - 3, 0, -1):
        w[j] = w[j + 1] * down
    w[0] = delta * w[1]
    w[n - 1] = (1.0 - delta) * w[n - 2]
    pi = w / w.sum()
    P = hessenberg_build(spec)
    residual = float(np.abs(pi @ P - pi).sum())
    return StationaryDistribution(pi=pi, residual=residual)


def expected_state_closed(spec: ChainSpec) -> float:
    """Mean state of the tridiagonal chain via the closed-form distribution."""
    return expected_state(hessenberg_stationary_closed(spec))


def limit_expected_state(n: int) -> float:
    """Limit of the tridiagonal mean state as the downward fraction vanishes.

    The two top components each approach probability one half, so the
    limit is ``(2n - 1) / 2``.  Requires ``n > 3``.
    """
    _require_closed_form_size(n)
    return (2.0 * n - 1.0) / 2.0
