"""Length-scale selection on held-out training data.

Each candidate ``gamma = 2**e`` is scored by the p-values of repeated test
runs on resampled training data; the candidate with the smallest median
p-value wins. Exact median ties go to the smaller upper quartile, then to
the candidate sitting deepest inside a run of small-median neighbours, then
to the smaller exponent.
"""

from dataclasses import dataclass

import numpy as np

from . import core
from .errors import DomainError

__all__ = ["ScalingGrid", "ScalingSummary", "select_scaling", "parse_grid"]

DEFAULT_REPS = 25


@dataclass(frozen=True)
class ScalingGrid:
    log2_values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.log2_values)
        if not values:
            raise DomainError("scaling grid is empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise DomainError("scaling grid exponents must be strictly increasing")
        object.__setattr__(self, "log2_values", values)

    @classmethod
    def arange(cls, lo=-10.0, hi=10.0, step=1.0):
        if step <= 0:
            raise DomainError(f"grid step must be positive, got {step}")
        count = int(np.floor((hi - lo) / step + 1e-9)) + 1
        return cls(tuple(lo + i * step for i in range(count)))

    @property
    def gammas(self):
        return [2.0**e for e in self.log2_values]


def parse_grid(text):
    """Parse ``lo:hi:step`` (step defaults to 1) into a :class:`ScalingGrid`."""
    parts = str(text).split(":")
    if len(parts) not in (2, 3):
        raise DomainError(f"grid must look like lo:hi[:step], got {text!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise DomainError(f"grid must look like lo:hi[:step], got {text!r}") from None
    return ScalingGrid.arange(*values)


@dataclass(frozen=True)
class ScalingSummary:
    log2_gamma: float
    gamma: float
    median: float
    upper_quartile: float
    p_values: tuple


def select_scaling(test, X_train=None, Y_train=None, grid=None, reps=DEFAULT_REPS, resample="bootstrap", seed=0, draw=None):
    """Pick the length-scale with the smallest median p-value.

    Parameters
    ----------
    test : callable
        ``test(X, Y, gamma, seed) -> TestOutcome``.
    X_train, Y_train : array
        Training samples, used by ``resample="bootstrap"``: every run draws
        both samples with replacement at their original size.
    grid : ScalingGrid
        Candidate exponents; defaults to -10 ... 10.
    reps : int
        Runs per candidate (at least 5).
    resample : {"bootstrap", "fresh"}
        ``"fresh"`` calls ``draw(seed) -> (X, Y)`` for new training data on
        every run instead of bootstrapping.

    Returns
    -------
    gamma : float
    table : list of ScalingSummary, in grid order
    """
    grid = grid if grid is not None else ScalingGrid.arange()
    if reps < 5:
        raise DomainError(f"reps must be >= 5, got {reps}")
    if resample == "bootstrap":
        if X_train is None or Y_train is None:
            raise DomainError("bootstrap resampling needs X_train and Y_train")
        X_train = core.as_samples(X_train, "X_train")
        Y_train = core.as_samples(Y_train, "Y_train")
    elif resample == "fresh":
        if draw is None:
            raise DomainError("fresh resampling needs a draw(seed) callable")
    else:
        raise DomainError(f"resample must be 'bootstrap' or 'fresh', got {resample!r}")

    pvals = [[] for _ in grid.log2_values]
    for r in range(reps):
        # one training draw per repetition, shared by every candidate
        data_seed = core.mix(seed, 0, r)
        if resample == "fresh":
            X, Y = draw(data_seed)
        else:
            gen = core.rng(data_seed)
            X = X_train[gen.integers(0, len(X_train), len(X_train))]
            Y = Y_train[gen.integers(0, len(Y_train), len(Y_train))]
        for gi, (e, gamma) in enumerate(zip(grid.log2_values, grid.gammas)):
            # keyed by the exponent, not its position, so the grid layout does not matter
            test_seed = core.mix(seed, 1, round(e * 1e6), r)
            pvals[gi].append(test(X, Y, gamma, test_seed).p_value)

    table = []
    for e, gamma, pv in zip(grid.log2_values, grid.gammas, pvals):
        q50, q75 = np.quantile(pv, [0.5, 0.75])
        table.append(ScalingSummary(e, gamma, float(q50), float(q75), tuple(pv)))

    key = lambda i: (table[i].median, table[i].upper_quartile)  # noqa: E731
    tied = [i for i in range(len(table)) if key(i) == min(map(key, range(len(table))))]
    best = min(tied, key=lambda i: (_surroundings(table, i), table[i].log2_gamma))
    return table[best].gamma, table


def _surroundings(table, i):
    # worst neighbouring median at radius 1, 2, ...; off-grid neighbours are ignored
    worst, out = table[i].median, []
    for r in range(1, len(table)):
        for j in (i - r, i + r):
            if 0 <= j < len(table):
                worst = max(worst, table[j].median)
        out.append(worst)
    return tuple(out)
