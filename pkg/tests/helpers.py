"""Shared test oracles, deliberately independent of the library internals.

Everything here recomputes quantities from first principles (pure Python,
itertools, Fraction arithmetic) so library results can be checked against
a second route.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def brute_force_did(y, time, affected):
    """Four-means DiD via dict grouping; None when a cell is empty."""
    cells = {}
    for yi, ti, ai in zip(y, time, affected):
        cells.setdefault((int(ai), int(ti)), []).append(yi)
    if any((g, t) not in cells for g in (0, 1) for t in (0, 1)):
        return None
    m = {key: sum(vals) / len(vals) for key, vals in cells.items()}
    return (m[(1, 1)] - m[(1, 0)]) - (m[(0, 1)] - m[(0, 0)])


def brute_force_did_fraction(y, time, affected):
    """Exact-rational DiD; None when a cell is empty."""
    cells = {}
    for yi, ti, ai in zip(y, time, affected):
        cells.setdefault((int(ai), int(ti)), []).append(Fraction(float(yi)))
    if any((g, t) not in cells for g in (0, 1) for t in (0, 1)):
        return None
    m = {key: sum(vals) / len(vals) for key, vals in cells.items()}
    return (m[(1, 1)] - m[(1, 0)]) - (m[(0, 1)] - m[(0, 0)])


def arrangements_fixed(n, ones):
    """All 0/1 vectors with `ones` ones, lexicographic by positions of ones."""
    out = []
    for combo in itertools.combinations(range(n), ones):
        vec = [0] * n
        for pos in combo:
            vec[pos] = 1
        out.append(vec)
    return out


def arrangements_bernoulli(n):
    """All 2**n 0/1 vectors in integer order, bit j = observation j."""
    out = []
    for mask in range(1 << n):
        out.append([(mask >> j) & 1 for j in range(n)])
    return out


def enumerate_brute_force(y, time, affected, dual, fixed):
    """All relabeled DiD values in canonical order; None marks degenerate draws."""
    n = len(y)
    if fixed:
        a_space = arrangements_fixed(n, int(np.sum(affected)))
        t_space = arrangements_fixed(n, int(np.sum(time))) if dual else [list(time)]
    else:
        a_space = arrangements_bernoulli(n)
        t_space = arrangements_bernoulli(n) if dual else [list(time)]
    values = []
    for a_vec in a_space:
        for t_vec in t_space:
            values.append(brute_force_did(y, t_vec, a_vec))
    return values


def exact_p_law_fraction(y, label_pairs):
    """Exact-rational two-sided p-value law over estimable relabelings.

    `label_pairs` is the full list of (affected, time) vectors; returns the
    sorted list of Fraction p-values over the estimable subset.
    """
    stats = []
    for a_vec, t_vec in label_pairs:
        value = brute_force_did_fraction(y, t_vec, a_vec)
        if value is not None:
            stats.append(abs(value))
    m = len(stats)
    p_values = [Fraction(sum(1 for other in stats if other >= s), m) for s in stats]
    return sorted(p_values)


def sup_cdf_distance(sample_values, exact_values):
    """Sup-norm distance between two empirical CDFs, evaluated at all atoms."""
    atoms = np.unique(np.concatenate([sample_values, exact_values]))
    s = np.sort(sample_values)
    e = np.sort(exact_values)
    right = np.abs(
        np.searchsorted(s, atoms, side="right") / s.size
        - np.searchsorted(e, atoms, side="right") / e.size
    )
    left = np.abs(
        np.searchsorted(s, atoms, side="left") / s.size
        - np.searchsorted(e, atoms, side="left") / e.size
    )
    return float(max(right.max(), left.max()))


def random_estimable_sample(rng, n_min=8, n_max=24):
    """Random PanelSample guaranteed estimable under its original labels."""
    from didperm import PanelSample

    n = int(rng.integers(n_min, n_max + 1))
    while True:
        time = rng.integers(0, 2, size=n)
        affected = rng.integers(0, 2, size=n)
        idx = 2 * affected + time
        if np.bincount(idx, minlength=4).all():
            break
    y = rng.normal(size=n)
    return PanelSample(y=y, time=time, affected=affected)
