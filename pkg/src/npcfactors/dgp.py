"""Synthetic approximate-factor panels.

The design is uniform loadings, iid standard normal factors, and Gaussian
idiosyncratic terms whose cross-sectional covariance is ``sigma^2 rho^|i-j|``.
Loadings are keyed by ``(seed, i, j)`` so unit ``i`` keeps the same loadings
whatever the panel width; shocks are keyed by ``(seed, replicate, t, i)``.
"""
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal, toeplitz

from . import kernels, rng
from .errors import ConfigurationError, ValidationError

MAX_PANEL_ENTRIES = 1 << 31


@dataclass(frozen=True)
class ModelConfig:
    r: int
    n_max: int
    loading_half_widths: Sequence[float]
    idio_rho: float = 0.5
    idio_sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        widths = tuple(float(w) for w in self.loading_half_widths)
        object.__setattr__(self, "loading_half_widths", widths)
        if int(self.r) != self.r or self.r < 1:
            raise ValidationError(f"r must be a positive integer, got {self.r}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValidationError(f"n_max must be a positive integer, got {self.n_max}")
        if len(widths) != self.r:
            raise ValidationError(
                f"loading_half_widths has {len(widths)} entries but r = {self.r}")
        if any(not np.isfinite(w) or w <= 0 for w in widths):
            raise ValidationError(f"loading half-widths must be positive, got {widths}")
        if not 0.0 <= self.idio_rho < 1.0:
            raise ValidationError(f"idio_rho must lie in [0, 1), got {self.idio_rho}")
        if not np.isfinite(self.idio_sigma) or self.idio_sigma < 0:
            raise ValidationError(f"idio_sigma must be nonnegative, got {self.idio_sigma}")
        if not 0 <= int(self.seed) < (1 << 64) or int(self.seed) != self.seed:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "n_max", int(self.n_max))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "idio_rho", float(self.idio_rho))
        object.__setattr__(self, "idio_sigma", float(self.idio_sigma))

    @classmethod
    def canonical(cls, n_max=3200, seed=2):
        """Two factors with limit loadings gram diag(2, 1), rho = 0.5, sigma = 1."""
        return cls(r=2, n_max=n_max, loading_half_widths=(np.sqrt(6.0), np.sqrt(3.0)),
                   idio_rho=0.5, idio_sigma=1.0, seed=seed)

    @property
    def gamma_lambda(self):
        """Limit of the loadings gram, ``diag(w_j^2 / 3)``."""
        return np.diag(np.square(self.loading_half_widths) / 3.0)

    @property
    def idio_bound(self):
        """Upper bound on the top eigenvalue of the idiosyncratic covariance, any n."""
        s2 = self.idio_sigma ** 2
        return s2 * (1.0 + self.idio_rho) / (1.0 - self.idio_rho)

    @property
    def distinct_limit_eigenvalues(self):
        w = self.loading_half_widths
        return all(a > b for a, b in zip(w, w[1:]))

    def with_seed(self, seed):
        return replace(self, seed=int(seed))


@dataclass(frozen=True)
class SyntheticPanel:
    """One simulated panel. ``observations == factors @ loadings.T + idio``."""

    loadings: np.ndarray
    factors: np.ndarray
    idio: np.ndarray
    observations: np.ndarray
    config: ModelConfig
    replicate: int = 0
    common: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "common", self.factors @ self.loadings.T)

    @property
    def n(self):
        return self.observations.shape[1]

    @property
    def T(self):
        return self.observations.shape[0]


def _check_n(config, n):
    if int(n) != n or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}")
    if n > config.n_max:
        raise ConfigurationError(f"n = {n} exceeds n_max = {config.n_max}")
    return int(n)


def draw_loadings(config, n):
    """First ``n`` rows of the loadings matrix; row i is the same for every n."""
    n = _check_n(config, n)
    u = rng.uniforms(config.seed, rng.LOADINGS, n, config.r)
    return (2.0 * u - 1.0) * np.asarray(config.loading_half_widths)


def idio_covariance(config, n):
    """Dense ``sigma^2 rho^|i-j|`` covariance of the idiosyncratic vector."""
    if int(n) != n or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}")
    col = config.idio_sigma ** 2 * config.idio_rho ** np.arange(int(n), dtype=float)
    return toeplitz(col)


def idio_top_eigenvalue(config, n):
    """Largest eigenvalue of ``idio_covariance(config, n)`` without forming it.

    The inverse of the AR(1) covariance is tridiagonal, so its smallest
    eigenvalue is cheap and exact.
    """
    n = int(n)
    s2, rho = config.idio_sigma ** 2, config.idio_rho
    if s2 == 0.0:
        return 0.0
    if rho == 0.0 or n == 1:
        return s2
    diag = np.full(n, 1.0 + rho * rho)
    diag[0] = diag[-1] = 1.0
    off = np.full(n - 1, -rho)
    smallest = eigvalsh_tridiagonal(diag, off, select="i", select_range=(0, 0))[0]
    return s2 * (1.0 - rho * rho) / smallest


def simulate_panel(config, n, T, replicate=0):
    """Simulate ``y_t = Lambda F_t + e_t`` for t = 0..T-1.

    Factors are iid N(0, I_r); the idiosyncratic vector is an AR(1) filter run
    across the cross-section, which gives covariance ``sigma^2 rho^|i-j|``.
    The replicate index selects the shock streams and leaves loadings alone.
    """
    n = _check_n(config, n)
    if int(T) != T or T < 1:
        raise ValidationError(f"T must be a positive integer, got {T}")
    T = int(T)
    if n * T > MAX_PANEL_ENTRIES:
        raise ValidationError(f"panel of {T} x {n} entries is too large")
    if int(replicate) != replicate or replicate < 0:
        raise ValidationError(f"replicate must be a nonnegative integer, got {replicate}")

    loadings = draw_loadings(config, n)
    factors = rng.normals(config.seed, rng.FACTORS, replicate, T, config.r)
    if config.idio_sigma == 0.0:
        idio = np.zeros((T, n))
    else:
        z = rng.normals(config.seed, rng.IDIO, replicate, T, n)
        idio = kernels.ar1_filter(z, config.idio_rho, config.idio_sigma)
    observations = factors @ loadings.T + idio
    return SyntheticPanel(loadings=loadings, factors=factors, idio=idio,
                          observations=observations, config=config,
                          replicate=int(replicate))
