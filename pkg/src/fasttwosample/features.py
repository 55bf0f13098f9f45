"""Per-point feature maps: mean embedding (ME), smooth CF (SCF) and CF.

All maps take data that has already been divided by the length-scale
(see :func:`fasttwosample.core.scale_data`) and a J x d frequency matrix T.

* ME:  ``exp(-||x - T_j||^2)``
* SCF: ``exp(-||x - T_j||^2) * (sin(T_j.x), cos(T_j.x))``
* CF:  ``(sin(T_j.x), cos(T_j.x))``

SCF and CF coordinates are interleaved per frequency:
``(sin_1, cos_1, sin_2, cos_2, ...)``.
"""

import enum

import numpy as np

from .errors import DomainError

__all__ = ["FeatureKind", "feature_dim", "feature_map", "feature_matrix", "log_weights"]


class FeatureKind(str, enum.Enum):
    ME = "me"
    SCF = "scf"
    CF = "cf"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown feature kind {value!r}; expected one of me, scf, cf") from None


def feature_dim(kind, J):
    kind = FeatureKind.parse(kind)
    if J < 1:
        raise DomainError(f"J must be >= 1, got {J}")
    return J if kind is FeatureKind.ME else 2 * J


def _interleave(sin, cos):
    out = np.empty(sin.shape[:-1] + (2 * sin.shape[-1],))
    out[..., 0::2] = sin
    out[..., 1::2] = cos
    return out


def feature_map(kind, x, T, gaussian=True):
    """Features of a single (pre-scaled) point ``x``.

    With ``gaussian=False`` the SCF map drops its Gaussian factor, which makes
    it coincide with the plain CF map.
    """
    kind = FeatureKind.parse(kind)
    x = np.asarray(x, dtype=float)
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if x.ndim != 1 or x.shape[0] != T.shape[1]:
        raise DomainError(f"x has shape {x.shape} but frequencies have dimension {T.shape[1]}")
    diff = x[None, :] - T
    weight = np.exp(-np.einsum("jd,jd->j", diff, diff))
    if kind is FeatureKind.ME:
        return weight
    proj = T @ x
    sin, cos = np.sin(proj), np.cos(proj)
    if kind is FeatureKind.SCF and gaussian:
        sin, cos = weight * sin, weight * cos
    return _interleave(sin, cos)


def log_weights(X, T):
    """``-||x_i - T_j||^2`` for every row of X, as an n x J array.

    Also returns ``X @ T.T`` since the trigonometric features reuse it.
    """
    proj = X @ T.T
    sq = np.einsum("nd,nd->n", X, X)[:, None] - 2.0 * proj + np.einsum("jd,jd->j", T, T)[None, :]
    np.maximum(sq, 0.0, out=sq)
    return -sq, proj


def feature_matrix(kind, X, T, offset=None):
    """Features of every row of a pre-scaled sample, as an n x p array.

    ``offset`` (length J) is added to the log of the Gaussian factor of
    frequency j before exponentiation. It rescales each ME/SCF coordinate by a
    positive constant, which callers use to keep features representable when
    ``||x - T_j||^2`` is in the hundreds.
    """
    kind = FeatureKind.parse(kind)
    X = np.asarray(X, dtype=float)
    T = np.atleast_2d(np.asarray(T, dtype=float))
    if X.ndim != 2 or X.shape[1] != T.shape[1]:
        raise DomainError(f"data dimension {X.shape[-1]} does not match frequency dimension {T.shape[1]}")
    if kind is FeatureKind.CF:
        proj = X @ T.T
        return _interleave(np.sin(proj), np.cos(proj))
    logw, proj = log_weights(X, T)
    if offset is not None:
        logw += offset[None, :]
    weight = np.exp(logw)
    if kind is FeatureKind.ME:
        return weight
    return _interleave(weight * np.sin(proj), weight * np.cos(proj))
