"""Scalar distribution functions used for thresholds and p-values.

Chi-squared probabilities go through the regularized incomplete gamma
function: a power series below ``a + 1`` and a Lentz continued fraction
above it. Both tails are computed directly so that small upper-tail
probabilities keep full relative precision.
"""

import math
from statistics import NormalDist

from .errors import DomainError

__all__ = [
    "chi2_cdf",
    "chi2_sf",
    "chi2_quantile",
    "chi2_isf",
    "normal_cdf",
    "normal_quantile",
]

_EPS = 1e-16
_TINY = 1e-300
_MAX_TERMS = 10_000
_MAX_QUANTILE_ITER = 200


def _gamma_series(a, x):
    # P(a, x) by the series x^a e^-x / Gamma(a+1) * sum x^n / (a+1)...(a+n)
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_TERMS):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_contfrac(a, x):
    # Q(a, x) by the modified Lentz continued fraction
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_TERMS):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def _regularized_gamma(a, x):
    """Return ``(P(a, x), Q(a, x))``."""
    if x == 0.0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    if x < a + 1.0:
        p = _gamma_series(a, x)
        return p, 1.0 - p
    q = _gamma_contfrac(a, x)
    return 1.0 - q, q


def _check_dof(k):
    if int(k) != k or k < 1:
        raise DomainError(f"degrees of freedom must be a positive integer, got {k!r}")


def _check_x(x):
    if math.isnan(x) or x < 0:
        raise DomainError(f"chi-squared argument must be nonnegative, got {x!r}")


def chi2_cdf(x, k):
    """P(chi2_k <= x)."""
    _check_dof(k)
    _check_x(x)
    return _regularized_gamma(0.5 * k, 0.5 * x)[0]


def chi2_sf(x, k):
    """P(chi2_k > x), accurate far into the upper tail."""
    _check_dof(k)
    _check_x(x)
    return _regularized_gamma(0.5 * k, 0.5 * x)[1]


def _chi2_logpdf(x, k):
    a = 0.5 * k
    return (a - 1.0) * math.log(x) - 0.5 * x - a * math.log(2.0) - math.lgamma(a)


def _invert(target, k, upper):
    """Find x with F(x) = target where F is the cdf (or the sf if ``upper``).

    Newton steps on the log-scale are accepted only while they stay inside
    the current bracket; otherwise the bracket is bisected.
    """
    func = chi2_sf if upper else chi2_cdf
    sign = -1.0 if upper else 1.0

    lo, hi = 0.0, max(1.0, float(k))
    while (func(hi, k) - target) * sign < 0:
        lo, hi = hi, hi * 2.0
        if hi > 1e12:
            break
    x = 0.5 * (lo + hi)
    for _ in range(_MAX_QUANTILE_ITER):
        fx = func(x, k)
        diff = (fx - target) * sign
        if diff == 0.0:
            return x
        if diff < 0:
            lo = x
        else:
            hi = x
        if hi - lo <= 4e-16 * hi:
            break
        step = None
        if x > 0:
            pdf = math.exp(_chi2_logpdf(x, k))
            if pdf > 0:
                step = (fx - target) / (sign * pdf)
        candidate = x - step if step is not None else None
        if candidate is None or not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        if candidate == x:
            break
        x = candidate
    return x


def chi2_quantile(p, k):
    """Inverse of :func:`chi2_cdf` for ``0 < p < 1``."""
    _check_dof(k)
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    if p > 0.5:
        # 1 - p is exact here, and the upper tail keeps relative precision
        return _invert(1.0 - p, k, upper=True)
    return _invert(p, k, upper=False)


def chi2_isf(q, k):
    """Inverse of :func:`chi2_sf`: the x with P(chi2_k > x) = q."""
    _check_dof(k)
    if not 0.0 < q < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {q!r}")
    if q < 0.5:
        return _invert(q, k, upper=True)
    return _invert(1.0 - q, k, upper=False)


def normal_cdf(z):
    """Standard normal CDF, computed through erfc to keep the lower tail."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_quantile(p):
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p!r}")
    return NormalDist().inv_cdf(p)
