"""Top-r symmetric eigensystems with a fixed sign convention, and first-order
eigenpair perturbation predictors.

Eigenvectors are stored as rows (``vectors`` is r x n). The sign of row j is
chosen so that the j-th diagonal entry of the leading r x r block of
``P' M^{1/2}`` (i.e. ``P[j, j] * sqrt(mu_j)``) is positive.
"""
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import LinearOperator, eigsh

from . import rng
from .errors import DegeneracyError, DegeneracyWarning, ValidationError

SYMMETRY_TOL = 1e-8
DEGENERACY_TOL = 1e-10
PIVOT_TOL = 1e-12
DENSE_CUTOFF = 64


@dataclass(frozen=True)
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray
    next_value: Optional[float] = None
    degenerate: bool = False

    @property
    def r(self):
        return self.values.shape[0]

    @property
    def dimension(self):
        return self.vectors.shape[1]

    @property
    def gap(self):
        """Smallest consecutive difference among the top values and the next one."""
        vals = list(self.values)
        if self.next_value is not None:
            vals.append(self.next_value)
        if len(vals) < 2:
            return np.inf
        return float(np.min(-np.diff(vals)))


def _check_symmetric(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > SYMMETRY_TOL:
        raise ValidationError(f"matrix is not symmetric: max |A - A'| = {asym:.3g}")
    return a


def _is_degenerate(values, next_value):
    vals = list(values) + ([next_value] if next_value is not None else [])
    if len(vals) < 2:
        return False
    scale = max(1.0, abs(vals[0]))
    return bool(np.any(np.abs(np.diff(vals)) <= DEGENERACY_TOL * scale))


def _sign_pivots(values, vectors):
    r = values.shape[0]
    signs = np.ones(r)
    for j in range(r):
        row = vectors[j]
        diag = row[j] * np.sqrt(max(values[j], 0.0)) if j < row.shape[0] else 0.0
        if abs(diag) > PIVOT_TOL:
            pivot = row[j]
        else:
            pivot = row[int(np.argmax(np.abs(row)))]
        if pivot < 0:
            signs[j] = -1.0
    return signs


def fix_signs(system):
    """Flip eigenvector rows so the sign convention holds. Idempotent."""
    signs = _sign_pivots(system.values, system.vectors)
    if np.all(signs > 0):
        return system
    return EigenSystem(values=system.values, vectors=system.vectors * signs[:, None],
                       next_value=system.next_value, degenerate=system.degenerate)


def _build(values, vectors, next_value):
    degenerate = _is_degenerate(values, next_value)
    if degenerate:
        warnings.warn("top eigenvalues are numerically repeated; eigenvectors are not "
                      "uniquely determined", DegeneracyWarning, stacklevel=3)
    system = EigenSystem(values=np.ascontiguousarray(values),
                         vectors=np.ascontiguousarray(vectors),
                         next_value=None if next_value is None else float(next_value),
                         degenerate=degenerate)
    return fix_signs(system)


def _check_r(r, n):
    if int(r) != r or r < 1:
        raise ValidationError(f"r must be a positive integer, got {r}")
    if r > n:
        raise ValidationError(f"r = {r} exceeds the matrix dimension {n}")
    return int(r)


def top_r_eigs(a, r):
    """Largest ``r`` eigenpairs of a dense symmetric matrix, descending, sign-fixed."""
    a = _check_symmetric(a)
    n = a.shape[0]
    r = _check_r(r, n)
    k = min(r + 1, n)
    w, v = scipy.linalg.eigh(a, subset_by_index=[n - k, n - 1])
    w, v = w[::-1], v[:, ::-1]
    next_value = w[r] if k > r else None
    return _build(w[:r], v[:, :r].T, next_value)


def top_r_eigs_operator(matvec, n, r, next_value=None):
    """Largest ``r`` eigenpairs of a symmetric operator given only ``v -> A v``.

    Runs implicitly restarted Lanczos to machine precision from a fixed start
    vector, so results are reproducible. ``next_value`` (e.g. a known upper
    bound on the (r+1)-th eigenvalue) is carried on the result for gap checks.
    """
    r = _check_r(r, n)
    if n <= max(DENSE_CUTOFF, 2 * r + 2):
        dense = matvec(np.eye(n))
        system = top_r_eigs(0.5 * (dense + dense.T), r)
        if next_value is None:
            return system
        return _build(system.values, system.vectors, next_value)
    op = LinearOperator((n, n), matvec=matvec, matmat=matvec, dtype=float)
    w, v = eigsh(op, k=r, which="LA", tol=0.0, v0=rng.start_vector(n))
    order = np.argsort(w)[::-1]
    return _build(w[order], v[:, order].T, next_value)


def top_r_eigs_gram(x, r, scale=1.0):
    """Largest ``r`` eigenpairs of ``scale * X'X`` for an m x n matrix X.

    When m < n the m x m matrix ``X X'`` is decomposed instead and its
    eigenvectors mapped back through X'.
    """
    x = np.asarray(x, dtype=float)
    m, n = x.shape
    r = _check_r(r, n)
    if m >= n:
        return top_r_eigs(scale * (x.T @ x), r)
    if r > m:
        raise ValidationError(f"r = {r} exceeds the rank bound min(m, n) = {m}")
    small = scale * (x @ x.T)
    small = 0.5 * (small + small.T)
    k = min(r + 1, m)
    w, u = scipy.linalg.eigh(small, subset_by_index=[m - k, m - 1])
    w, u = w[::-1], u[:, ::-1]
    if np.any(w[:r] <= 0):
        raise DegeneracyError(f"matrix has rank below r = {r}")
    vectors = (x.T @ u[:, :r]) * np.sqrt(scale / w[:r])
    next_value = w[r] if k > r else 0.0
    return _build(w[:r], vectors.T, next_value)


def full_eigensystem(a):
    """All eigenpairs, descending; vectors as rows. Signs are LAPACK's."""
    a = _check_symmetric(a)
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].T.copy()


def _check_simple(values, j):
    values = np.asarray(values, dtype=float)
    if not 0 <= j < values.shape[0]:
        raise ValidationError(f"index j = {j} out of range for {values.shape[0]} eigenvalues")
    others = np.delete(values, j)
    scale = max(1.0, float(np.max(np.abs(values))))
    if others.size and np.min(np.abs(values[j] - others)) < DEGENERACY_TOL * scale:
        raise DegeneracyError(f"eigenvalue {j} is not simple: {values[j]!r}")
    return values


def wilkinson_vector_shift(values, vectors, delta, j):
    """First-order change of eigenvector ``j`` (0-based) under ``A -> A + delta``.

    ``sum_{l != j} (p_l delta p_j') / (mu_j - mu_l) * p_l``, with all n
    eigenpairs of the base matrix supplied (vectors as rows).
    """
    values = _check_simple(values, j)
    vectors = np.asarray(vectors, dtype=float)
    delta = _check_symmetric(delta)
    coupling = vectors @ (delta @ vectors[j])
    denom = values[j] - values
    denom[j] = 1.0
    coef = coupling / denom
    coef[j] = 0.0
    return coef @ vectors


def wilkinson_value_shift(values, vectors, delta, j):
    """First-order change of eigenvalue ``j`` (0-based): ``p_j delta p_j'``."""
    _check_simple(values, j)
    delta = _check_symmetric(delta)
    p = np.asarray(vectors, dtype=float)[j]
    return float(p @ delta @ p)
