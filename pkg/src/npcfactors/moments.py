"""Population and sample second-moment matrices."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ValidationError


@dataclass(frozen=True)
class CovariancePair:
    gamma_y: np.ndarray
    gamma_c: np.ndarray
    gamma_e: np.ndarray

    @property
    def n(self):
        return self.gamma_y.shape[0]


def _symmetrize(m):
    return 0.5 * (m + m.T)


def _as_matrix(x, name):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValidationError(f"{name} must be a 2-d array, got shape {x.shape}")
    return x


def population_covariances(loadings, gamma_e):
    """``Gamma_C = Lambda Lambda'`` and ``Gamma_y = Gamma_C + Gamma_e`` (E F F' = I)."""
    loadings = _as_matrix(loadings, "loadings")
    gamma_e = np.asarray(gamma_e, dtype=float)
    n = loadings.shape[0]
    if gamma_e.shape != (n, n):
        raise ValidationError(
            f"gamma_e has shape {gamma_e.shape}, expected ({n}, {n}) to match loadings")
    if not np.allclose(gamma_e, gamma_e.T, rtol=0.0, atol=1e-12):
        raise ValidationError("gamma_e must be symmetric")
    gamma_c = _symmetrize(loadings @ loadings.T)
    gamma_e = _symmetrize(gamma_e)
    return CovariancePair(gamma_y=gamma_c + gamma_e, gamma_c=gamma_c, gamma_e=gamma_e)


def population_matvec(loadings, rho, sigma):
    """Matrix-free ``v -> Gamma_y v`` for AR(1) idiosyncratic covariance.

    Costs O(n r) per product instead of O(n^2); used for large-n eigensolves.
    """
    loadings = _as_matrix(loadings, "loadings")

    def matvec(v):
        v = np.asarray(v, dtype=float)
        out = loadings @ (loadings.T @ v)
        if sigma != 0.0:
            out = out + kernels.kms_matvec(v, rho, sigma)
        return out

    return matvec


def loadings_gram(loadings):
    """``Lambda' Lambda / n``."""
    loadings = _as_matrix(loadings, "loadings")
    return _symmetrize(loadings.T @ loadings) / loadings.shape[0]


def is_gram_diagonal(gram, tol=1e-12):
    gram = np.asarray(gram, dtype=float)
    off = gram - np.diag(np.diag(gram))
    return bool(np.all(np.abs(off) <= tol))


def sample_covariance(data):
    """``X'X / T`` without demeaning; the model's process is zero mean."""
    data = _as_matrix(data, "data")
    if data.size == 0:
        raise ValidationError("data is empty")
    return _symmetrize(data.T @ data) / data.shape[0]


def sample_cross_moment(a, b):
    """``A'B / T`` for two panels observed over the same T periods."""
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    if a.shape[0] != b.shape[0]:
        raise ValidationError(f"a has {a.shape[0]} rows but b has {b.shape[0]}")
    if a.shape[0] == 0:
        raise ValidationError("data is empty")
    return a.T @ b / a.shape[0]


def demean(data):
    """Subtract column means; only for ingested real data."""
    data = _as_matrix(data, "data")
    return data - data.mean(axis=0, keepdims=True)
