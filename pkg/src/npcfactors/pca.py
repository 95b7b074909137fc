"""Normalized principal components, PC loadings and their n -> infinity limits.

For an eigensystem (M, P) of a covariance matrix the normalized principal
components of an observation are ``M^{-1/2} P y`` and the loadings of unit i
are ``P^i M^{1/2}`` (row i of ``P' M^{1/2}``).
"""
from dataclasses import dataclass

import numpy as np

from . import dgp, moments, spectra
from .errors import ConfigurationError, NumericalError, ValidationError

LANCZOS_MIN_DIM = 600
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class FactorEstimate:
    factors: np.ndarray
    loadings: np.ndarray
    eigen: spectra.EigenSystem
    source: str

    @property
    def common(self):
        return self.factors @ self.loadings.T


@dataclass(frozen=True)
class LimitObjects:
    p_lambda: np.ndarray
    d_lambda: np.ndarray
    f_infinity: np.ndarray
    lambda_infinity: np.ndarray


def normalized_pcs(eigen, data):
    """Rows ``M^{-1/2} P y_t`` for every row ``y_t`` of ``data`` (T x n)."""
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data[None, :]
    if data.shape[1] != eigen.dimension:
        raise ValidationError(
            f"data has {data.shape[1]} series but the eigensystem has dimension "
            f"{eigen.dimension}")
    if np.any(eigen.values <= 0):
        raise ValidationError("normalized principal components need positive eigenvalues")
    return (data @ eigen.vectors.T) / np.sqrt(eigen.values)


def npc_coefficients(eigen):
    """The r x n matrix ``M^{-1/2} P``; row j maps an observation to factor j."""
    return eigen.vectors / np.sqrt(eigen.values)[:, None]


def pc_loadings(eigen):
    """n x r loadings ``P' M^{1/2}``."""
    return eigen.vectors.T * np.sqrt(np.maximum(eigen.values, 0.0))


def align_signs(estimated, target):
    """Flip columns of ``estimated`` to correlate nonnegatively with ``target``."""
    estimated = np.asarray(estimated, dtype=float)
    dots = np.einsum("ij,ij->j", estimated, np.asarray(target, dtype=float))
    return estimated * np.where(dots < 0, -1.0, 1.0)


def limit_objects(config, loadings, factors, gamma_lambda=None):
    """P_Lambda, D_Lambda and the limit factors/loadings for a known DGP.

    ``gamma_lambda`` defaults to the config's limit gram. Signs of P_Lambda
    follow the same convention as the eigenvectors of Gamma_y: the leading
    r x r block of the limit loadings ``Lambda P_Lambda'`` has a positive
    diagonal, so the finite-n components converge to ``f_infinity`` itself.
    """
    gamma = config.gamma_lambda if gamma_lambda is None else np.asarray(gamma_lambda, float)
    r = config.r
    if gamma.shape != (r, r):
        raise ValidationError(f"gamma_lambda has shape {gamma.shape}, expected ({r}, {r})")
    loadings = np.asarray(loadings, dtype=float)
    factors = np.asarray(factors, dtype=float)
    if loadings.ndim != 2 or loadings.shape[1] != r:
        raise ValidationError(f"loadings must be n x {r}, got shape {loadings.shape}")
    if factors.ndim != 2 or factors.shape[1] != r:
        raise ValidationError(f"factors must be T x {r}, got shape {factors.shape}")

    w, v = np.linalg.eigh(0.5 * (gamma + gamma.T))
    d, p = w[::-1], v[:, ::-1].T
    if np.any(d <= 0):
        raise ConfigurationError("limit loadings gram must be positive definite")
    if np.any(-np.diff(d) <= spectra.DEGENERACY_TOL * max(1.0, d[0])):
        raise ConfigurationError(
            f"limit loadings gram has repeated eigenvalues {d}; they must be distinct")

    lam_inf = loadings @ p.T
    signs = np.ones(r)
    for j in range(r):
        col = lam_inf[:, j]
        if j < col.shape[0] and abs(col[j]) > spectra.PIVOT_TOL:
            pivot = col[j]
        else:
            pivot = col[int(np.argmax(np.abs(col)))]
        signs[j] = -1.0 if pivot < 0 else 1.0
    p = p * signs[:, None]
    return LimitObjects(p_lambda=p, d_lambda=d, f_infinity=factors @ p.T,
                        lambda_infinity=loadings @ p.T)


def population_eigen(loadings, config, r, which="y"):
    """Top-r eigensystem of Gamma_y (``which="y"``) or Gamma_C (``"c"``).

    Gamma_C = Lambda Lambda' is handled through its r x r gram; Gamma_y uses
    the matrix-free Lanczos path for large n, with ``mu_1(Gamma_e)`` bounding
    the (r+1)-th eigenvalue. Without idiosyncratic noise the two coincide and
    share the gram path.
    """
    loadings = np.asarray(loadings, dtype=float)
    n = loadings.shape[0]
    if which == "c" or (which == "y" and config.idio_sigma == 0):
        return spectra.top_r_eigs_gram(loadings.T, r)
    if which != "y":
        raise ValidationError(f"which must be 'y' or 'c', got {which!r}")
    if n < LANCZOS_MIN_DIM:
        pair = moments.population_covariances(loadings, dgp.idio_covariance(config, n))
        return spectra.top_r_eigs(pair.gamma_y, r)
    matvec = moments.population_matvec(loadings, config.idio_rho, config.idio_sigma)
    return spectra.top_r_eigs_operator(matvec, n, r,
                                       next_value=dgp.idio_top_eigenvalue(config, n))


def sample_eigen(panel, r, method="auto"):
    """Top-r eigensystem of the sample covariance ``Y'Y / T``.

    ``method`` is ``"dense"`` (form the n x n matrix), ``"gram"`` (decompose
    the T x T matrix instead), ``"lanczos"`` (matrix-free) or ``"auto"``.
    All give the same eigensystem to rounding error.
    """
    panel = np.asarray(panel, dtype=float)
    T, n = panel.shape
    if method == "auto":
        if min(T, n) < LANCZOS_MIN_DIM:
            method = "gram" if T < n else "dense"
        else:
            method = "lanczos"
    if method == "dense":
        return spectra.top_r_eigs(moments.sample_covariance(panel), r)
    if method == "gram":
        return spectra.top_r_eigs_gram(panel, r, scale=1.0 / T)
    if method == "lanczos":
        def matvec(v):
            return panel.T @ (panel @ v) / T
        return spectra.top_r_eigs_operator(matvec, n, r)
    raise ValidationError(f"unknown eigensolver method {method!r}")


def estimate_from_panel(panel, r, method="auto"):
    """Sample NPC estimator: factors ``M^{-1/2} P y_t`` from ``Y'Y / T``."""
    panel = np.asarray(panel, dtype=float)
    if panel.ndim != 2 or panel.size == 0:
        raise ValidationError(f"panel must be a nonempty T x n matrix, got {panel.shape}")
    T, n = panel.shape
    if int(r) != r or r < 1 or r > min(n, T):
        raise ValidationError(f"r = {r} must lie in [1, min(n, T)] = [1, {min(n, T)}]")
    eigen = sample_eigen(panel, int(r), method)
    return FactorEstimate(factors=normalized_pcs(eigen, panel), loadings=pc_loadings(eigen),
                          eigen=eigen, source="sample")


def estimate_population(loadings, config, data, r, which="y"):
    """Population NPCs of ``data`` using the exact Gamma_y or Gamma_C."""
    eigen = population_eigen(loadings, config, r, which)
    return FactorEstimate(factors=normalized_pcs(eigen, data), loadings=pc_loadings(eigen),
                          eigen=eigen, source="population")


def rotation_h(estimated, true_factors):
    """``(T^{-1} sum Fhat_t F_t') (T^{-1} sum F_t F_t')^{-1}``."""
    est = np.asarray(estimated, dtype=float)
    tru = np.asarray(true_factors, dtype=float)
    if est.ndim != 2 or tru.ndim != 2 or est.shape[0] != tru.shape[0]:
        raise ValidationError(
            f"estimated {est.shape} and true factors {tru.shape} need equal T")
    T = est.shape[0]
    cross = est.T @ tru / T
    gram = tru.T @ tru / T
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise NumericalError(f"factor gram is singular (condition number {cond:.3g})",
                             condition_number=cond)
    return np.linalg.solve(gram.T, cross.T).T
