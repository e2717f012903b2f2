"""Dense matrix utilities shared by every estimator.

Two operations cover all the numerics the estimators need: a truncated-SVD
Moore-Penrose pseudo-inverse (for the least-squares operators) and a
jittered symmetric positive-definite solve (for every Gram-matrix inverse).
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from .exceptions import ConditioningError, InvalidInputError

DEFAULT_RANK_TOL = 1e-12

__all__ = ["pseudo_inverse", "solve_regularized", "DEFAULT_RANK_TOL"]


def _as_2d(A: np.ndarray, name: str) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidInputError(f"{name} must be a 2-D matrix, got shape {A.shape}")
    return A


def pseudo_inverse(A: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse via SVD with a relative rank cutoff.

    Singular values below ``rank_tol`` times the largest singular value are
    treated as zero, which keeps the result stable on the rank-deficient
    feature matrices that snapshot least-squares problems routinely produce.

    Parameters
    ----------
    A : (m, n) ndarray
        Matrix to invert. Must be finite.
    rank_tol : float
        Relative singular-value cutoff, >= 0.

    Returns
    -------
    (n, m) ndarray
        A matrix satisfying the four Moore-Penrose identities up to
        numerical tolerance.
    """
    A = _as_2d(A, "A")
    if not np.isfinite(A).all():
        raise InvalidInputError("pseudo_inverse: input contains non-finite entries")
    if not (rank_tol >= 0.0):
        raise InvalidInputError(f"rank_tol must be >= 0, got {rank_tol}")

    u, s, vt = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((A.shape[1], A.shape[0]))
    cutoff = rank_tol * s[0]
    rank = int(np.sum(s > cutoff))
    if rank == 0:
        return np.zeros((A.shape[1], A.shape[0]))
    return (vt[:rank].T / s[:rank]) @ u[:, :rank].T


def _smallest_cholesky_pivot(A: np.ndarray) -> tuple[int, float]:
    """Run an unblocked Cholesky until it breaks; return (index, pivot value).

    Used only on the error path to give a diagnosable message.
    """
    n = A.shape[0]
    L = np.zeros_like(A)
    smallest = math.inf
    for j in range(n):
        pivot = A[j, j] - np.dot(L[j, :j], L[j, :j])
        smallest = min(smallest, pivot)
        if pivot <= 0.0 or not math.isfinite(pivot):
            return j, pivot
        L[j, j] = math.sqrt(pivot)
        if j + 1 < n:
            L[j + 1 :, j] = (A[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return n - 1, smallest


def solve_regularized(G: np.ndarray, c: float, B: np.ndarray) -> np.ndarray:
    """Solve ``(G + c*I) X = B`` for symmetric ``G`` via Cholesky.

    Parameters
    ----------
    G : (n, n) ndarray
        Symmetric matrix (checked to 1e-10 relative asymmetry).
    c : float
        Nonnegative ridge added to the diagonal before factorizing.
    B : (n, k) or (n,) ndarray
        Right-hand side(s).

    Raises
    ------
    ConditioningError
        If ``G + c*I`` is not numerically positive definite; the message
        names the smallest pivot encountered.
    """
    G = _as_2d(G, "G")
    n = G.shape[0]
    if G.shape[1] != n:
        raise InvalidInputError(f"G must be square, got shape {G.shape}")
    if not np.isfinite(G).all():
        raise InvalidInputError("solve_regularized: G contains non-finite entries")
    if not (c >= 0.0 and math.isfinite(c)):
        raise InvalidInputError(f"regularization c must be finite and >= 0, got {c}")
    B = np.asarray(B, dtype=float)
    if B.shape[0] != n:
        raise InvalidInputError(f"B has {B.shape[0]} rows, expected {n}")
    if not np.isfinite(B).all():
        raise InvalidInputError("solve_regularized: B contains non-finite entries")

    scale = np.abs(G).max()
    asym = np.abs(G - G.T).max()
    if scale > 0.0 and asym > 1e-10 * scale:
        raise InvalidInputError(
            f"G is not symmetric: max asymmetry {asym:.3e} exceeds 1e-10 relative"
        )

    Gc = 0.5 * (G + G.T) + c * np.eye(n)
    try:
        factor = scipy.linalg.cho_factor(Gc, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        idx, pivot = _smallest_cholesky_pivot(Gc)
        raise ConditioningError(
            f"G + {c:g}*I is not positive definite: "
            f"smallest pivot {pivot:.6e} at index {idx}"
        ) from exc
    return scipy.linalg.cho_solve(factor, B, check_finite=False)
