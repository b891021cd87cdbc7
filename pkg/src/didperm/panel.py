"""Data model for two-group, two-period panels and the DiD point estimators.

A panel is three aligned vectors: a real-valued outcome, a binary period
indicator (`time`), and a binary group indicator (`affected`).  The
difference-in-differences (DiD) coefficient can be read off the four
(group, period) cell means, or equivalently estimated as the interaction
coefficient of the saturated two-way OLS model

    y = alpha + beta * time + gamma * affected + delta * (time * affected) + error.

Both estimators are provided; for the saturated 2x2 design they agree exactly,
and the OLS coefficients are solved in closed form from the cell means.

All types are immutable after construction and all operations are pure
functions, so everything here is safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import EmptyCellError

__all__ = [
    "PanelSample",
    "CellMeans",
    "DidEstimate",
    "OlsFit",
    "EstimationMethod",
    "compute_cell_means",
    "did_from_means",
    "did_from_ols",
    "did_value",
]


class EstimationMethod(Enum):
    """How a DiD value was computed."""

    FOUR_MEANS = "four_means"
    OLS = "ols"


def _as_binary(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-d vector")
    out = arr.astype(np.int64, copy=True)
    if not np.array_equal(out, arr) or not np.isin(out, (0, 1)).all():
        raise ValueError(f"{name} must contain only 0/1 values")
    return out


@dataclass(frozen=True, eq=False)
class PanelSample:
    """Aligned outcome, period, and group vectors for a 2x2 panel.

    Parameters
    ----------
    y : array_like of float
        Observed outcomes. Must be finite.
    time : array_like of {0, 1}
        0 for the pre period, 1 for the post period.
    affected : array_like of {0, 1}
        0 for the control group, 1 for the treated group.

    All three vectors must share the same length n >= 4.  Estimability
    (all four cells non-empty) is checked at estimation time, not here,
    so relabeled samples that empty a cell can still be represented.
    """

    y: np.ndarray
    time: np.ndarray
    affected: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=np.float64)
        if y.ndim != 1:
            raise ValueError("y must be a 1-d vector")
        if not np.isfinite(y).all():
            raise ValueError("y must contain only finite values")
        time = _as_binary(self.time, "time")
        affected = _as_binary(self.affected, "affected")
        if not (y.size == time.size == affected.size):
            raise ValueError("y, time, and affected must have identical length")
        if y.size < 4:
            raise ValueError("a 2x2 panel needs at least 4 observations")
        y = y.copy()
        for arr in (y, time, affected):
            arr.flags.writeable = False
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "time", time)
        object.__setattr__(self, "affected", affected)

    @property
    def n(self) -> int:
        """Number of observations."""
        return int(self.y.size)

    @property
    def n_affected(self) -> int:
        """Number of treated-group observations."""
        return int(self.affected.sum())

    @property
    def n_time(self) -> int:
        """Number of post-period observations."""
        return int(self.time.sum())


@dataclass(frozen=True)
class CellMeans:
    """Per-cell means and counts of the 2x2 design.

    `means[g, t]` is the sample mean for group g in period t; it is NaN
    when `counts[g, t]` is zero (no mean is defined for an empty cell).
    The four counts always sum to n.
    """

    means: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        means = np.asarray(self.means, dtype=np.float64).reshape(2, 2)
        counts = np.asarray(self.counts, dtype=np.int64).reshape(2, 2)
        if (counts < 0).any():
            raise ValueError("cell counts must be non-negative")
        means = means.copy()
        counts = counts.copy()
        means.flags.writeable = False
        counts.flags.writeable = False
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def __eq__(self, other):
        if not isinstance(other, CellMeans):
            return NotImplemented
        same_counts = np.array_equal(self.counts, other.counts)
        mask = self.counts > 0
        return same_counts and np.array_equal(
            self.means[mask], other.means[mask]
        )


@dataclass(frozen=True)
class DidEstimate:
    """A DiD coefficient together with the cell means it was computed from."""

    value: float
    cells: CellMeans
    method: EstimationMethod

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise ValueError("DiD value must be finite")


@dataclass(frozen=True)
class OlsFit:
    """Coefficients of the saturated two-way OLS model.

    For the 2x2 design the fitted value in each cell is that cell's mean,
    so `residual_sum_squares` is the total within-cell squared deviation.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    residual_sum_squares: float


def compute_cell_means(sample: PanelSample) -> CellMeans:
    """Compute the four (group, period) cell means and counts.

    Empty cells are represented (count 0, mean NaN) rather than rejected,
    so callers can decide how to treat inestimable relabelings.
    """
    idx = 2 * sample.affected + sample.time
    counts = np.bincount(idx, minlength=4)
    sums = np.bincount(idx, weights=sample.y, minlength=4)
    with np.errstate(invalid="ignore", divide="ignore"):
        means = sums / counts
    means[counts == 0] = np.nan
    return CellMeans(means=means.reshape(2, 2), counts=counts.reshape(2, 2))


def _require_four_cells(counts: np.ndarray) -> None:
    flat = np.asarray(counts).reshape(4)
    for cell in range(4):
        if flat[cell] == 0:
            raise EmptyCellError(affected=cell >> 1, time=cell & 1)


def did_from_means(cells: CellMeans) -> DidEstimate:
    """DiD coefficient from the four cell means.

    value = (mean[1,1] - mean[1,0]) - (mean[0,1] - mean[0,0]): the treated
    group's change over time minus the control group's change.

    Raises
    ------
    EmptyCellError
        If any cell has zero count, naming the first empty (g, t) cell in
        scan order (0,0), (0,1), (1,0), (1,1).
    """
    _require_four_cells(cells.counts)
    m = cells.means
    value = (m[1, 1] - m[1, 0]) - (m[0, 1] - m[0, 0])
    return DidEstimate(value=float(value), cells=cells, method=EstimationMethod.FOUR_MEANS)


def did_from_ols(sample: PanelSample) -> tuple[DidEstimate, OlsFit]:
    """Fit the saturated two-way OLS model and return (estimate, coefficients).

    The design is saturated, so the normal equations have the closed-form
    solution alpha = mean[0,0], beta = mean[0,1] - mean[0,0],
    gamma = mean[1,0] - mean[0,0], and delta equal to the four-means DiD.
    The rank of the design matrix drops exactly when a cell is empty, in
    which case EmptyCellError is raised.
    """
    cells = compute_cell_means(sample)
    _require_four_cells(cells.counts)
    m = cells.means
    alpha = m[0, 0]
    beta = m[0, 1] - m[0, 0]
    gamma = m[1, 0] - m[0, 0]
    delta = (m[1, 1] - m[1, 0]) - (m[0, 1] - m[0, 0])
    resid = sample.y - m[sample.affected, sample.time]
    rss = float(resid @ resid)
    estimate = DidEstimate(value=float(delta), cells=cells, method=EstimationMethod.OLS)
    fit = OlsFit(
        alpha=float(alpha),
        beta=float(beta),
        gamma=float(gamma),
        delta=float(delta),
        residual_sum_squares=rss,
    )
    return estimate, fit


def did_value(sample: PanelSample) -> float:
    """Convenience: the four-means DiD value of an estimable sample."""
    return did_from_means(compute_cell_means(sample)).value
