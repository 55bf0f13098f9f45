"""Sample validation, seeded random streams, frequency draws and SPD solves.

Sample sets and frequency matrices are plain 2-d float arrays (one row per
point). Every randomized routine in the package takes an explicit integer
seed in ``[0, 2**64)`` and builds its own generator with :func:`rng`, so a
run is reproduced exactly by repeating its seeds.

Random streams
--------------
``rng(seed)`` is numpy's ``Philox`` (4x64, 10 rounds) keyed directly with
the seed and started at counter zero; no seed hashing is involved, so the
stream is fixed by the published Philox algorithm. Normal deviates come
from numpy's ziggurat sampler on top of that stream.

Child seeds are derived with :func:`mix`, which folds integer indices into
a seed through the SplitMix64 finalizer::

    h = splitmix64(seed)
    for i in indices:
        h = splitmix64(h ^ i)
"""

import numpy as np
import scipy.linalg

from .errors import DomainError, SingularMatrixError

__all__ = [
    "MASK64",
    "splitmix64",
    "mix",
    "rng",
    "as_samples",
    "draw_frequencies",
    "scale_data",
    "solve_spd",
]

MASK64 = (1 << 64) - 1


def splitmix64(x):
    """One SplitMix64 step: add the golden-ratio increment, then finalize."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix(seed, *indices):
    """Derive a child seed from ``seed`` and a tuple of integer indices."""
    h = splitmix64(int(seed) & MASK64)
    for i in indices:
        h = splitmix64(h ^ (int(i) & MASK64))
    return h


def rng(seed):
    """A numpy Generator on Philox keyed with ``seed``."""
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed))


def as_samples(X, name="X"):
    """Validate ``X`` as an n x d matrix of finite floats and return it.

    A 1-d input is read as n scalar observations (d = 1).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise DomainError(f"{name} must be a 2-d array, got shape {X.shape}")
    n, d = X.shape
    if n < 1 or d < 1:
        raise DomainError(f"{name} must have at least one row and column, got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DomainError(f"{name} contains non-finite values")
    return X


def draw_frequencies(J, d, seed):
    """Draw J test frequencies/locations i.i.d. from N(0, I_d).

    Rows are checked for exact duplicates; on a collision the draw is repeated
    from a derived seed.
    """
    if J < 1 or d < 1:
        raise DomainError(f"need J >= 1 and d >= 1, got J={J}, d={d}")
    attempt = 0
    s = seed
    while True:
        T = rng(s).standard_normal((J, d))
        if J == 1 or len(np.unique(T, axis=0)) == J:
            return T
        attempt += 1
        s = mix(seed, attempt)


def scale_data(X, gamma):
    """Divide every entry of X by the length-scale ``gamma``."""
    if not (np.isfinite(gamma) and gamma > 0):
        raise DomainError(f"gamma must be a positive finite number, got {gamma!r}")
    return np.asarray(X, dtype=float) / gamma


def solve_spd(M, v, ridge=0.0):
    """Solve ``(M + ridge*I) w = v`` for symmetric positive (semi)definite M.

    Uses a Cholesky factorization. If it fails, or the residual is not within
    ``1e-8 * (||M|| + ridge) * ||w||``, the ridge is multiplied by 10 (starting
    from ``1e-12 * trace(M)/p`` when ``ridge`` is zero) until it exceeds
    ``1e-2 * trace(M)/p``, at which point :class:`SingularMatrixError` is raised.
    """
    M = np.asarray(M, dtype=float)
    v = np.asarray(v, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"M must be square, got shape {M.shape}")
    p = M.shape[0]
    if v.shape != (p,):
        raise DomainError(f"v must have shape ({p},), got {v.shape}")
    if ridge < 0:
        raise DomainError(f"ridge must be nonnegative, got {ridge}")

    scale = np.trace(M) / p
    cap = 1e-2 * scale
    norm_m = np.linalg.norm(M, 2)
    eye = np.eye(p)
    r = float(ridge)
    while True:
        A = M + r * eye
        try:
            factor = scipy.linalg.cho_factor(A, lower=True, check_finite=False)
            w = scipy.linalg.cho_solve(factor, v, check_finite=False)
            resid = np.linalg.norm(A @ w - v)
            if np.all(np.isfinite(w)) and resid <= 1e-8 * (norm_m + r) * np.linalg.norm(w):
                return w
        except np.linalg.LinAlgError:
            pass
        r = r * 10.0 if r > 0 else 1e-12 * scale
        if not (r > 0 and r <= cap):
            raise SingularMatrixError("matrix is not numerically positive definite", r)
