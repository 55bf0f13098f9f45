"""Synthetic data for the simulation benchmarks, plus characteristic-function oracles.

Generators return float arrays with one row per point and are deterministic
in their seed. :func:`polya_cf` and :func:`smooth_cf_quadrature` work at the
level of characteristic functions: two Polya-type CFs that agree outside a
small interval become distinguishable everywhere once convolved with a
Gaussian smoothing kernel.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from . import core
from .errors import DomainError

__all__ = [
    "BlobsSpec",
    "AnalyticCF",
    "gaussian_sample",
    "dataset_one",
    "dataset_two",
    "blobs",
    "add_noise",
    "polya_cf",
    "smooth_cf_quadrature",
]


def gaussian_sample(n, mean, std_diag, seed):
    """n rows with independent coordinates N(mean_k, std_k^2)."""
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    std = np.atleast_1d(np.asarray(std_diag, dtype=float))
    if np.any(std <= 0):
        raise DomainError("standard deviations must be positive")
    d = max(len(mean), len(std))
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return mean + std * core.rng(seed).standard_normal((n, d))


def dataset_one(n, D, seed):
    """P = N(0, I_D) against Q = N(e_1, I_D)."""
    if D < 1:
        raise DomainError(f"D must be >= 1, got {D}")
    gen = core.rng(seed)
    P = gen.standard_normal((n, D))
    Q = gen.standard_normal((n, D))
    Q[:, 0] += 1.0
    return P, Q


def dataset_two(n, D, seed):
    """P = N(0, I_D) against Q = N(0, diag(2, 1, ..., 1))."""
    if D < 1:
        raise DomainError(f"D must be >= 1, got {D}")
    gen = core.rng(seed)
    P = gen.standard_normal((n, D))
    Q = gen.standard_normal((n, D))
    Q[:, 0] *= math.sqrt(2.0)
    return P, Q


@dataclass(frozen=True)
class BlobsSpec:
    """Grid of 2-d Gaussians; Q components are stretched and rotated.

    Component centers sit at ``spacing * (i, j)`` for ``0 <= i, j < grid`` and
    are chosen with equal probability. Q components have standard deviation
    ``stretch`` along the direction at ``angle`` and 1 orthogonal to it.
    """

    grid: int = 4
    spacing: float = 10.0
    stretch: float = 2.0
    angle: float = math.pi / 4

    def __post_init__(self):
        if self.grid < 1 or self.spacing <= 0 or self.stretch < 1:
            raise DomainError(f"invalid blobs parameters: {self}")

    def q_covariance(self):
        c, s = math.cos(self.angle), math.sin(self.angle)
        R = np.array([[c, -s], [s, c]])
        return R @ np.diag([self.stretch**2, 1.0]) @ R.T


def blobs(n, spec=None, which="P", seed=0):
    spec = spec or BlobsSpec()
    which = str(which).upper()
    if which not in ("P", "Q"):
        raise DomainError(f"which must be 'P' or 'Q', got {which!r}")
    gen = core.rng(seed)
    cells = gen.integers(0, spec.grid, size=(n, 2))
    noise = gen.standard_normal((n, 2))
    if which == "Q":
        c, s = math.cos(spec.angle), math.sin(spec.angle)
        # rotate (stretch * z1, z2) so the long axis points along `angle`
        A = np.array([[c, -s], [s, c]]) @ np.diag([spec.stretch, 1.0])
        noise = noise @ A.T
    return spec.spacing * cells + noise


def add_noise(X, sigma, seed):
    """X plus i.i.d. N(0, sigma^2) noise; ``sigma = 0`` returns X unchanged."""
    if sigma < 0:
        raise DomainError(f"sigma must be nonnegative, got {sigma}")
    X = np.asarray(X, dtype=float)
    if sigma == 0:
        return X
    return X + sigma * core.rng(seed).standard_normal(X.shape)


@dataclass(frozen=True)
class AnalyticCF:
    """A characteristic function on the real line.

    ``kinks`` lists points where the function is not smooth; quadrature
    splits its domain there.
    """

    evaluate: Callable[[float], complex]
    support_radius: float = math.inf
    kinks: tuple = ()

    def __call__(self, t):
        return self.evaluate(t)


def polya_cf(w):
    """``max(0, 1 - w|t|)``, a valid CF by Polya's criterion, vanishing for |t| >= 1/w."""
    if not w > 0:
        raise DomainError(f"w must be positive, got {w}")

    def evaluate(t):
        return complex(max(0.0, 1.0 - w * abs(t)))

    r = 1.0 / w
    return AnalyticCF(evaluate=evaluate, support_radius=r, kinks=(-r, 0.0, r))


def smooth_cf_quadrature(cf, t, ell_width, truncation=None, epsabs=1e-12, epsrel=1e-10):
    """Convolve ``cf`` with ``l(u) = exp(-u^2 / ell_width^2)`` and evaluate at t.

    The integral runs over ``[-R, R]`` with R the support radius of ``cf`` (or
    ``truncation`` when given), using adaptive Gauss-Kronrod quadrature split
    at the kinks of ``cf``.
    """
    if not ell_width > 0:
        raise DomainError(f"ell_width must be positive, got {ell_width}")
    R = truncation if truncation is not None else cf.support_radius
    if not math.isfinite(R):
        raise DomainError("cf has unbounded support; pass a finite truncation radius")

    kinks = sorted({k for k in cf.kinks if -R < k < R})
    # also split where the smoothing kernel peaks, so narrow kernels are not missed
    if -R < t < R:
        kinks = sorted(set(kinks) | {t})
    edges = [-R, *kinks, R]

    def part(fn):
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(
                lambda s: fn(cf.evaluate(s)) * math.exp(-((t - s) / ell_width) ** 2),
                a,
                b,
                epsabs=epsabs,
                epsrel=epsrel,
                limit=200,
            )
            total += val
        return total

    return complex(part(lambda z: z.real), part(lambda z: z.imag))
