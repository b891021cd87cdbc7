"""Null distribution construction, quantile decisions, and randomization p-values.

The null distribution of the DiD coefficient is built by relabeling the
indicator vectors while holding outcomes fixed, either by Monte Carlo
sampling (`simulate_null`) or by exact enumeration of every admissible
relabeling (`enumerate_null`, for small spaces).  `test_significance`
turns a distribution into a two-sided quantile decision plus p-values,
and `exactness_audit` verifies the finite-sample validity guarantee
P(p <= alpha) <= alpha exhaustively on enumerable spaces.

Relabelings that empty a cell leave the DiD contrast undefined.  Such
draws are discarded and, in the Monte Carlo path, redrawn from the same
per-iteration stream (up to a retry cap), so every retained distribution
is conditional on estimability.  The discard count is always reported.

Simulation is embarrassingly parallel: iteration k depends only on
(master_seed, k), so results are bit-identical for any worker count.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import SpaceTooLargeError, TooManyDegenerateDrawsError
from .panel import PanelSample, compute_cell_means, did_from_means
from .randomize import (
    Margins,
    Mode,
    RandomizationScheme,
    SeedSpec,
    _IterationStreams,
    generator_for,
)

__all__ = [
    "Source",
    "NullDistribution",
    "TestResult",
    "UniformityReport",
    "simulate_null",
    "enumerate_null",
    "empirical_quantile",
    "decide",
    "test_significance",
    "randomization_p_value",
    "exactness_audit",
    "DEFAULT_ITERATIONS",
    "DEFAULT_ENUMERATION_CAP",
]

DEFAULT_ITERATIONS = 15_000
DEFAULT_ENUMERATION_CAP = 10_000_000
MAX_RETRY_ATTEMPTS = 1_000

# Row-block size for generating arrangement matrices during enumeration.
_BLOCK_ROWS = 4_096


class Source(Enum):
    """Provenance of a null distribution."""

    MONTE_CARLO = "monte_carlo"
    EXACT_ENUMERATION = "exact_enumeration"


@dataclass(frozen=True, eq=False)
class NullDistribution:
    """Realized DiD values under a randomization scheme, with provenance.

    `iterations_requested` is the Monte Carlo iteration count, or the full
    space size for exact enumeration.  `iterations_retained` equals
    len(values); it falls short of the space size exactly when degenerate
    (empty-cell) relabelings were discarded.
    """

    values: np.ndarray
    iterations_requested: int
    iterations_retained: int
    scheme: RandomizationScheme
    master_seed: int | None
    degenerate_draws_discarded: int
    source: Source

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise ValueError("values must be a 1-d vector")
        if not np.isfinite(values).all():
            raise ValueError("null distribution values must all be finite")
        if self.iterations_retained != values.size:
            raise ValueError("iterations_retained must equal len(values)")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class TestResult:
    """Two-sided quantile decision for an observed DiD value.

    The null is rejected exactly when `observed` falls outside the open
    interval (lower, upper); equality with either bound rejects.  For
    continuous outcomes such ties have probability zero.  `p_value` is the
    plain fraction of null draws at least as extreme in absolute value;
    `p_value_corrected` is the add-one Monte Carlo version
    (1 + count) / (retained + 1), never anti-conservative at finite
    sample counts.
    """

    observed: float
    lower: float
    upper: float
    alpha: float
    reject: bool
    p_value: float
    p_value_corrected: float


# ---------------------------------------------------------------------------
# statistic kernel
# ---------------------------------------------------------------------------


def _stat_from_sums(counts: np.ndarray, sums: np.ndarray) -> float:
    # Cell index is 2*affected + time. The grouping (treated change) minus
    # (control change) is kept explicit so that label symmetries of the
    # relabeling space map to exact floating-point sign flips; every path
    # that produces null values goes through this kernel so that tie
    # comparisons between paths are exact.
    c0, c1, c2, c3 = counts.tolist()
    s0, s1, s2, s3 = sums.tolist()
    return (s3 / c3 - s2 / c2) - (s1 / c1 - s0 / c0)


def _require_estimable(sample: PanelSample) -> float:
    """Observed DiD value; raises EmptyCellError when the sample is inestimable."""
    return did_from_means(compute_cell_means(sample)).value


# ---------------------------------------------------------------------------
# Monte Carlo simulation
# ---------------------------------------------------------------------------


def _simulate_chunk(args) -> tuple[np.ndarray, int]:
    (y, time, affected, margins_value, mode_value, master_seed, start, stop, max_attempts) = args
    fixed = Mode(mode_value) is Mode.FIXED_MARGINS
    dual = Margins(margins_value) is Margins.DUAL
    n = y.size
    streams = _IterationStreams(master_seed)
    values = np.empty(stop - start, dtype=np.float64)
    discarded = 0
    for i, k in enumerate(range(start, stop)):
        rng = streams.generator(k)
        for attempt in range(max_attempts):
            if fixed:
                a = rng.permutation(affected)
                t = rng.permutation(time) if dual else time
            else:
                a = (rng.random(n) < 0.5).astype(np.int64)
                t = (rng.random(n) < 0.5).astype(np.int64) if dual else time
            idx = 2 * a + t
            counts = np.bincount(idx, minlength=4)
            if counts.all():
                sums = np.bincount(idx, weights=y, minlength=4)
                values[i] = _stat_from_sums(counts, sums)
                discarded += attempt
                break
        else:
            raise TooManyDegenerateDrawsError(iteration=k, attempts=max_attempts)
    return values, discarded


def simulate_null(
    sample: PanelSample,
    scheme: RandomizationScheme,
    iterations: int = DEFAULT_ITERATIONS,
    master_seed: int = 0,
    *,
    workers: int = 1,
    max_attempts: int = MAX_RETRY_ATTEMPTS,
) -> NullDistribution:
    """Monte Carlo null distribution of the DiD coefficient.

    Iteration k (1-based) relabels the sample with the stream
    SeedSpec(master_seed, k); a degenerate draw is retried from the same
    stream up to `max_attempts` times.  The result is a pure function of
    (sample, scheme, iterations, master_seed) and is bit-identical for
    every `workers` value.

    Parameters
    ----------
    sample : PanelSample
        Must be estimable under its original labels.
    scheme : RandomizationScheme
        Margins and relabeling mode.
    iterations : int
        Number of retained draws, >= 1.
    master_seed : int
        Unsigned 64-bit seed identifying the whole run.
    workers : int
        Process count for chunked evaluation; affects speed only.
    max_attempts : int
        Retry cap per iteration before TooManyDegenerateDrawsError.

    Raises
    ------
    EmptyCellError
        If the original sample is inestimable.
    TooManyDegenerateDrawsError
        If some iteration cannot find an estimable relabeling.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    SeedSpec(master_seed, 0)  # validates the seed range
    _require_estimable(sample)

    def chunk_args(start: int, stop: int):
        return (
            sample.y,
            sample.time,
            sample.affected,
            scheme.margins.value,
            scheme.mode.value,
            master_seed,
            start,
            stop,
            max_attempts,
        )

    if workers <= 1:
        values, discarded = _simulate_chunk(chunk_args(1, iterations + 1))
    else:
        bounds = np.linspace(1, iterations + 1, num=min(workers, iterations) + 1, dtype=np.int64)
        jobs = [chunk_args(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_simulate_chunk, jobs))
        values = np.concatenate([part for part, _ in parts])
        discarded = sum(d for _, d in parts)

    return NullDistribution(
        values=values,
        iterations_requested=iterations,
        iterations_retained=values.size,
        scheme=scheme,
        master_seed=master_seed,
        degenerate_draws_discarded=discarded,
        source=Source.MONTE_CARLO,
    )


# ---------------------------------------------------------------------------
# exact enumeration
# ---------------------------------------------------------------------------


def _space_size(n: int, ones_affected: int, ones_time: int, scheme: RandomizationScheme) -> int:
    if scheme.mode is Mode.FIXED_MARGINS:
        size = math.comb(n, ones_affected)
        if scheme.margins is Margins.DUAL:
            size *= math.comb(n, ones_time)
        return size
    size = 1 << n
    if scheme.margins is Margins.DUAL:
        size <<= n
    return size


def _fixed_blocks(n: int, ones: int, block_rows: int):
    """Indicator matrices over all C(n, ones) arrangements, lexicographic order."""
    combos = itertools.combinations(range(n), ones)
    while True:
        rows = list(itertools.islice(combos, block_rows))
        if not rows:
            return
        block = np.zeros((len(rows), n), dtype=np.int64)
        if ones:
            block[np.arange(len(rows))[:, None], np.array(rows, dtype=np.intp)] = 1
        yield block


def _bernoulli_blocks(n: int, block_rows: int):
    """Indicator matrices over all 2**n binary vectors, integer order (bit j = obs j)."""
    total = 1 << n
    shifts = np.arange(n, dtype=np.uint64)
    for start in range(0, total, block_rows):
        ints = np.arange(start, min(start + block_rows, total), dtype=np.uint64)
        yield ((ints[:, None] >> shifts) & np.uint64(1)).astype(np.int64)


def _label_blocks(n: int, ones: int, mode: Mode, block_rows: int = _BLOCK_ROWS):
    if mode is Mode.FIXED_MARGINS:
        return _fixed_blocks(n, ones, block_rows)
    return _bernoulli_blocks(n, block_rows)


def enumerate_null(
    sample: PanelSample,
    scheme: RandomizationScheme,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> NullDistribution:
    """Exact null distribution over every admissible relabeling.

    Fixed-margin spaces enumerate the C(n, ones) arrangements of each
    relabeled vector (both vectors independently for the dual scheme);
    Bernoulli spaces enumerate all 2**n binary vectors per margin.  The
    values vector is assembled in canonical order: arrangements in
    lexicographic (fixed) or integer (Bernoulli) order, affected-major for
    the dual scheme.  Degenerate relabelings are counted in
    `degenerate_draws_discarded` and excluded from the values.

    Every value comes from the same statistic kernel as `simulate_null`,
    so exact ties (the observed labeling against itself, sign-symmetric
    relabeling pairs) survive in floating point and the weak inequality
    in `randomization_p_value` counts them correctly.

    Raises
    ------
    SpaceTooLargeError
        If the space size exceeds `cap`; use `simulate_null` instead.
    """
    n = sample.n
    ones_a = sample.n_affected
    ones_t = sample.n_time
    size = _space_size(n, ones_a, ones_t, scheme)
    if size > cap:
        raise SpaceTooLargeError(log_size=math.log(size), cap=cap)

    y = sample.y
    if scheme.margins is Margins.DUAL:
        # The time side is the smaller factor of the viable products; hold
        # it as one int8 matrix and iterate its rows per affected row.
        t_side = np.concatenate(
            [blk.astype(np.int8) for blk in _label_blocks(n, ones_t, scheme.mode)]
        )
    else:
        t_side = sample.time.astype(np.int8)[None, :]

    values = np.empty(size, dtype=np.float64)
    pos = 0
    discarded = 0
    t_rows = t_side.shape[0]
    for a_block in _label_blocks(n, ones_a, scheme.mode):
        doubled = a_block * 2
        for row in range(a_block.shape[0]):
            a2 = doubled[row]
            for t_row in range(t_rows):
                idx = a2 + t_side[t_row]
                counts = np.bincount(idx, minlength=4)
                if counts.all():
                    sums = np.bincount(idx, weights=y, minlength=4)
                    values[pos] = _stat_from_sums(counts, sums)
                    pos += 1
                else:
                    discarded += 1

    return NullDistribution(
        values=values[:pos].copy(),
        iterations_requested=size,
        iterations_retained=pos,
        scheme=scheme,
        master_seed=None,
        degenerate_draws_discarded=discarded,
        source=Source.EXACT_ENUMERATION,
    )


# ---------------------------------------------------------------------------
# quantiles, decisions, p-values
# ---------------------------------------------------------------------------


def empirical_quantile(dist: NullDistribution, q: float) -> float:
    """Order-statistic quantile with linear interpolation between closest ranks.

    On the sorted values of length m this reads off position 1 + q*(m - 1),
    interpolating linearly between neighbouring order statistics; q = 0 and
    q = 1 return the minimum and maximum.
    """
    if dist.iterations_retained == 0:
        raise ValueError("null distribution is empty")
    if not 0.0 <= q <= 1.0:
        raise ValueError("quantile level must lie in [0, 1]")
    return float(np.quantile(dist.values, q))


def decide(observed: float, lower: float, upper: float) -> bool:
    """Two-sided decision: reject iff `observed` is outside the open (lower, upper)."""
    return bool(observed <= lower or observed >= upper)


def randomization_p_value(observed: float, dist: NullDistribution) -> tuple[float, float]:
    """Two-sided randomization p-value of `observed` against a null distribution.

    Returns (raw, corrected): raw is the fraction of null values v with
    |v| >= |observed| (the exact p-value when the distribution is a full
    enumeration); corrected is (1 + count) / (retained + 1).
    """
    if dist.iterations_retained == 0:
        raise ValueError("null distribution is empty")
    count = int(np.count_nonzero(np.abs(dist.values) >= abs(observed)))
    m = dist.iterations_retained
    return count / m, (1 + count) / (m + 1)


def test_significance(observed: float, dist: NullDistribution, alpha: float = 0.05) -> TestResult:
    """Quantile-based two-sided significance decision with attached p-values."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    lower = empirical_quantile(dist, alpha / 2.0)
    upper = empirical_quantile(dist, 1.0 - alpha / 2.0)
    raw, corrected = randomization_p_value(observed, dist)
    return TestResult(
        observed=float(observed),
        lower=lower,
        upper=upper,
        alpha=float(alpha),
        reject=decide(observed, lower, upper),
        p_value=raw,
        p_value_corrected=corrected,
    )


# ---------------------------------------------------------------------------
# exactness audit
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UniformityReport:
    """Exhaustive law of the exact p-value over an enumerable relabeling space.

    Every estimable relabeling is treated in turn as the observed
    assignment and its exact p-value computed against the full (estimable)
    space.  Under the sharp null the assignment is uniform over that
    space, so P(p <= alpha) <= alpha must hold for every alpha; when all
    absolute statistic values are distinct the p-values are exactly a
    permutation of {1/m, 2/m, ..., 1}.
    """

    n: int
    n_affected: int
    n_time: int
    scheme: RandomizationScheme
    total_relabelings: int
    estimable_relabelings: int
    statistic_values: np.ndarray
    p_values: np.ndarray

    def rejection_rate(self, alpha: float) -> float:
        """P(p <= alpha) over the uniform assignment law."""
        return float(np.mean(self.p_values <= alpha))

    def worst_violation(self, alphas=None) -> float:
        """max over alphas of P(p <= alpha) - alpha; exactness means <= 0.

        With alphas=None the maximum is taken over all attainable p-value
        levels, where P(p <= alpha) - alpha is piecewise largest.
        """
        if alphas is None:
            alphas = np.unique(self.p_values)
        return max(self.rejection_rate(a) - a for a in np.asarray(alphas, dtype=np.float64))


def exactness_audit(
    n: int,
    n_affected: int,
    n_time: int,
    scheme: RandomizationScheme,
    outcome_seed: int = 0,
    cap: int = DEFAULT_ENUMERATION_CAP,
    outcomes=None,
) -> UniformityReport:
    """Exhaustive finite-sample validity check on a small relabeling space.

    Outcomes are drawn once from a standard normal stream seeded by
    `outcome_seed` (continuous, so cross-relabeling ties occur only
    through exact symmetries of the space), or taken from `outcomes` when
    given.  All statistics are computed with the same scalar kernel as
    the Monte Carlo path, so those symmetries hold exactly in floating
    point.

    Raises
    ------
    SpaceTooLargeError
        If the space exceeds `cap` relabelings.
    ValueError
        If no relabeling in the space is estimable (e.g. a margin of 1).
    """
    if not 0 < n_affected < n:
        raise ValueError("need 0 < n_affected < n")
    if not 0 < n_time < n:
        raise ValueError("need 0 < n_time < n")
    if outcomes is None:
        y = generator_for(SeedSpec(outcome_seed, 0)).standard_normal(n)
    else:
        y = np.asarray(outcomes, dtype=np.float64)
        if y.shape != (n,):
            raise ValueError(f"outcomes must be a length-{n} vector")

    base_affected = np.zeros(n, dtype=np.int64)
    base_affected[:n_affected] = 1
    base_time = np.zeros(n, dtype=np.int64)
    base_time[:n_time] = 1
    sample = PanelSample(y=y, time=base_time, affected=base_affected)
    dist = enumerate_null(sample, scheme, cap)
    if dist.iterations_retained == 0:
        raise ValueError("no estimable relabeling exists in this space")

    stats = dist.values
    m = stats.size
    magnitudes = np.sort(np.abs(stats))
    p_values = (m - np.searchsorted(magnitudes, np.abs(stats), side="left")) / m
    return UniformityReport(
        n=n,
        n_affected=n_affected,
        n_time=n_time,
        scheme=scheme,
        total_relabelings=dist.iterations_requested,
        estimable_relabelings=m,
        statistic_values=stats,
        p_values=p_values,
    )
