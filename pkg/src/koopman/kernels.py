"""Kernel functions and Gram-matrix assembly.

Two families are provided: the kernel induced by a weighted inner product
of dictionary features (so fixed-basis estimation can be phrased as kernel
estimation) and the Gaussian RBF.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .observables import Dictionary, as_points

__all__ = [
    "Kernel",
    "DictionaryKernel",
    "RBFKernel",
    "dictionary_kernel",
    "rbf_kernel",
    "gram",
    "validate_gram",
]


class Kernel(abc.ABC):
    """Symmetric positive-semidefinite bivariate function on states."""

    @abc.abstractmethod
    def gram(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Pairwise evaluations: entry (i, j) is k(row i of A, row j of B)."""

    def __call__(self, a: np.ndarray, b: np.ndarray) -> float:
        a = np.atleast_1d(np.asarray(a, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        return float(self.gram(a[None, :], b[None, :])[0, 0])


@dataclass(frozen=True, eq=False)
class DictionaryKernel(Kernel):
    """k(a, b) = Psi(a) @ weight @ Psi(b)^T for a fixed feature dictionary."""

    dictionary: Dictionary
    weight: np.ndarray

    def __post_init__(self):
        n = len(self.dictionary)
        W = np.asarray(self.weight, dtype=float)
        if W.shape != (n, n):
            raise InvalidInputError(f"weight must be {n}x{n}, got shape {W.shape}")
        if not np.isfinite(W).all():
            raise InvalidInputError("weight contains non-finite entries")
        scale = max(np.abs(W).max(), 1.0)
        if np.abs(W - W.T).max() > 1e-10 * scale:
            raise InvalidInputError("weight must be symmetric")
        eigs = np.linalg.eigvalsh(0.5 * (W + W.T))
        if eigs.min() < -1e-10 * max(eigs.max(), 1.0):
            raise InvalidInputError(f"weight must be positive semidefinite, min eigenvalue {eigs.min():.3e}")
        object.__setattr__(self, "weight", W)

    def gram(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        PA = self.dictionary.feature_matrix(A)
        PB = self.dictionary.feature_matrix(B)
        return PA @ self.weight @ PB.T


@dataclass(frozen=True)
class RBFKernel(Kernel):
    """Gaussian kernel k(a, b) = exp(-rho * ||a - b||^2)."""

    rho: float

    def __post_init__(self):
        if not (self.rho > 0.0 and np.isfinite(self.rho)):
            raise InvalidInputError(f"rho must be positive and finite, got {self.rho}")

    def gram(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = as_points(A)
        B = as_points(B)
        if A.shape[1] != B.shape[1]:
            raise InvalidInputError(
                f"point sets have mismatched dimensions {A.shape[1]} and {B.shape[1]}"
            )
        sq = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)
        return np.exp(-self.rho * sq)


def dictionary_kernel(d: Dictionary, weight: np.ndarray | None = None) -> DictionaryKernel:
    """Kernel induced by the dictionary; identity weight reproduces plain feature products."""
    if weight is None:
        weight = np.eye(len(d))
    return DictionaryKernel(d, weight)


def rbf_kernel(rho: float) -> RBFKernel:
    return RBFKernel(float(rho))


def gram(k: Kernel, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Gram matrix of two point sets; entry (i, j) = k(A_i, B_j)."""
    A = as_points(A)
    B = as_points(B)
    if A.shape[1] != B.shape[1]:
        raise InvalidInputError(
            f"point sets have mismatched dimensions {A.shape[1]} and {B.shape[1]}"
        )
    if not (np.isfinite(A).all() and np.isfinite(B).all()):
        raise InvalidInputError("gram: points contain non-finite entries")
    return k.gram(A, B)


def validate_gram(G: np.ndarray, psd_tol: float = 1e-8, sym_tol: float = 1e-12) -> None:
    """Debug assertion that a self-Gram matrix is symmetric and PSD.

    O(M^3); intended for tests and diagnostics, not the estimation hot path.
    """
    G = np.asarray(G, dtype=float)
    scale = max(np.abs(G).max(), 1.0)
    if np.abs(G - G.T).max() > sym_tol * scale:
        raise InvalidInputError("Gram matrix is not symmetric")
    eigs = np.linalg.eigvalsh(0.5 * (G + G.T))
    trace = float(np.trace(G))
    if eigs.min() < -psd_tol * max(trace, 1.0):
        raise InvalidInputError(
            f"Gram matrix is not PSD: min eigenvalue {eigs.min():.3e} for trace {trace:.3e}"
        )
