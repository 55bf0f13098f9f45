"""Linear-time two-sample tests built on a Hotelling statistic.

For paired samples X_i, Y_i the difference vectors
``Z_i = feature(X_i / gamma) - feature(Y_i / gamma)`` are averaged into W and
their covariance Sigma is estimated; the statistic ``n W' Sigma^-1 W`` is
compared against a chi-squared law with ``feature_dim(kind, J)`` degrees of
freedom (J for ME, 2J for SCF and CF).
"""

import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import core, statdist
from .errors import DomainError, SingularMatrixError
from .features import FeatureKind, feature_dim, log_weights, _interleave

__all__ = [
    "TestOutcome",
    "HotellingSummary",
    "truncate_pair",
    "difference_matrix",
    "mean_and_covariance",
    "hotelling_statistic",
    "run_analytic_test",
]

# squared relative rounding level below which a covariance counts as zero
_ROUNDING = (64 * np.finfo(float).eps) ** 2


@dataclass(frozen=True)
class TestOutcome:
    """Result of one two-sample test.

    ``dof`` is the chi-squared degrees of freedom for the analytic tests and a
    tag naming the null approximation otherwise ("permutation", "normal").
    """

    __test__ = False  # keep pytest from collecting this class

    statistic: float
    dof: object
    p_value: float
    threshold: float
    reject: bool
    alpha: float
    elapsed: float = 0.0
    flags: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class HotellingSummary:
    W: np.ndarray
    Sigma: np.ndarray
    n: int
    centered: bool


def truncate_pair(X, Y, seed=0):
    """Cut the larger sample down to the size of the smaller one.

    The larger sample is shuffled with ``seed`` before truncation so that the
    kept points are a uniform subsample.
    """
    nx, ny = len(X), len(Y)
    if nx == ny:
        return X, Y
    gen = core.rng(seed)
    if nx > ny:
        return X[gen.permutation(nx)[:ny]], Y
    return X, Y[gen.permutation(ny)[:nx]]


def _paired(X, Y, truncate, seed):
    X = core.as_samples(X, "X")
    Y = core.as_samples(Y, "Y")
    if X.shape[1] != Y.shape[1]:
        raise DomainError(f"X has dimension {X.shape[1]} but Y has dimension {Y.shape[1]}")
    if len(X) != len(Y):
        if not truncate:
            raise DomainError(
                f"samples must have equal size (got {len(X)} and {len(Y)}); "
                "pass truncate=True to subsample the larger one"
            )
        X, Y = truncate_pair(X, Y, core.mix(seed, 0x7472))
    return X, Y


def difference_matrix(kind, X, Y, T, gamma, truncate=False, seed=0, stabilize=False):
    """The n x p matrix of paired feature differences.

    With ``stabilize=True`` each Gaussian factor exp(-||x - T_j||^2) is divided
    by its largest value over both samples before subtracting. That multiplies
    the ME/SCF columns of frequency j by a positive constant, which leaves the
    Hotelling statistic unchanged but avoids underflow in high dimension.
    """
    kind = FeatureKind.parse(kind)
    X, Y = _paired(X, Y, truncate, seed)
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if T.shape[1] != X.shape[1]:
        raise DomainError(f"frequencies have dimension {T.shape[1]} but data has {X.shape[1]}")
    Xs = core.scale_data(X, gamma)
    Ys = core.scale_data(Y, gamma)

    if kind is FeatureKind.CF:
        px, py = Xs @ T.T, Ys @ T.T
        return _interleave(np.sin(px) - np.sin(py), np.cos(px) - np.cos(py))

    lx, px = log_weights(Xs, T)
    ly, py = log_weights(Ys, T)
    if stabilize:
        offset = -np.maximum(lx.max(axis=0), ly.max(axis=0))
        lx += offset
        ly += offset
    wx, wy = np.exp(lx), np.exp(ly)
    if kind is FeatureKind.ME:
        return wx - wy
    return _interleave(wx * np.sin(px) - wy * np.sin(py), wx * np.cos(px) - wy * np.cos(py))


def mean_and_covariance(Z, centered=True):
    """Row mean W and covariance Sigma (divisor n) of the difference matrix.

    ``centered=False`` gives the raw second moment ``Z'Z / n``.
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[0] == 0:
        raise DomainError(f"Z must be a non-empty n x p matrix, got shape {Z.shape}")
    n, p = Z.shape
    if n < p + 1:
        warnings.warn(f"only {n} rows for {p} features; covariance is rank deficient", stacklevel=2)
    W = Z.mean(axis=0)
    Zc = Z - W if centered else Z
    Sigma = Zc.T @ Zc / n
    Sigma = 0.5 * (Sigma + Sigma.T)
    return HotellingSummary(W=W, Sigma=Sigma, n=n, centered=centered)


def hotelling_statistic(summary, ridge=None):
    """``n W' (Sigma + ridge I)^-1 W``.

    The default ridge is ``1e-8 * trace(Sigma) / p``. Returns exactly 0 when W
    is identically zero, without touching Sigma. Raises
    :class:`SingularMatrixError` when Sigma is zero up to rounding while W is
    not, since the statistic is then unbounded.
    """
    W = summary.W
    if not np.any(W):
        return 0.0
    p = len(W)
    trace = float(np.trace(summary.Sigma))
    if trace <= p * (_ROUNDING * float(W @ W)):
        raise SingularMatrixError("covariance vanishes but the mean difference does not", trace / p)
    if ridge is None:
        ridge = 1e-8 * trace / p
    w = core.solve_spd(summary.Sigma, W, ridge)
    return max(float(summary.n * (W @ w)), 0.0)


def run_analytic_test(
    kind,
    X,
    Y,
    J,
    gamma,
    alpha=0.05,
    seed=0,
    centered=True,
    ridge=None,
    truncate=False,
):
    """Run the ME, SCF or CF test and return a :class:`TestOutcome`.

    Frequencies are drawn from N(0, I_d) with ``seed``. The elapsed time
    covers frequency draws, features, the statistic and the decision.
    """
    kind = FeatureKind.parse(kind)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    start = time.perf_counter()
    X, Y = _paired(X, Y, truncate, seed)
    T = core.draw_frequencies(J, X.shape[1], seed)
    Z = difference_matrix(kind, X, Y, T, gamma, stabilize=True)
    summary = mean_and_covariance(Z, centered=centered)
    stat = hotelling_statistic(summary, ridge)
    dof = feature_dim(kind, J)
    threshold = statdist.chi2_quantile(1.0 - alpha, dof)
    p_value = statdist.chi2_sf(stat, dof)
    elapsed = time.perf_counter() - start
    return TestOutcome(
        statistic=stat,
        dof=dof,
        p_value=p_value,
        threshold=threshold,
        reject=stat > threshold,
        alpha=alpha,
        elapsed=elapsed,
    )
