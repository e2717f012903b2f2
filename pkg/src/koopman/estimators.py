"""Koopman operator estimators and predictors.

Five finite-dimensional estimates of the Koopman operator are implemented,
differing in the basis the operator matrix is expressed in:

* value basis over the training points: ``fit_dmd`` (least squares on
  stacked observable values) and ``fit_koopman_kernel_value`` (its kernel
  counterpart);
* function basis of a fixed dictionary: ``fit_edmd`` (least squares on
  coefficients) and ``fit_edmd_regularized`` (its Bayesian/ridge version);
* kernel sections centred at the training inputs:
  ``fit_koopman_kernel_function`` (the Gram-regularized estimate).

Prediction never needs the analytic form of an observable: the composed
function is reconstructed from observable *values* through the posterior
mean of a Gaussian process with the chosen kernel (``predict_composed``),
or, starting from values at the inputs, through the three-step
project/advance/reconstruct pipeline (``predict_value_based``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConditioningError, InvalidInputError
from .kernels import Kernel, gram
from .linalg import DEFAULT_RANK_TOL, pseudo_inverse, solve_regularized
from .observables import Dictionary, SnapshotSet, as_points

__all__ = [
    "NoiseModel",
    "FunctionBasis",
    "ValueBasis",
    "KernelSection",
    "KoopmanOperator",
    "fit_dmd",
    "fit_edmd",
    "fit_edmd_regularized",
    "fit_koopman_kernel_function",
    "fit_koopman_kernel_value",
    "project_observable",
    "predict_composed",
    "predict_value_based",
    "edmd_predict",
]


@dataclass(frozen=True)
class NoiseModel:
    """Observation-noise variance and the numerical jitter used in Gram solves."""

    sigma2: float = 0.0
    mu: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.sigma2) and self.sigma2 >= 0.0):
            raise InvalidInputError(f"sigma2 must be finite and >= 0, got {self.sigma2}")
        if not (np.isfinite(self.mu) and self.mu >= 0.0):
            raise InvalidInputError(f"mu must be finite and >= 0, got {self.mu}")


@dataclass(frozen=True)
class FunctionBasis:
    """Operator coordinates: coefficients in a fixed dictionary (N x N matrix)."""

    n: int
    dictionary: Dictionary | None = None

    def __post_init__(self):
        if self.dictionary is not None and len(self.dictionary) != self.n:
            raise InvalidInputError(
                f"basis size {self.n} does not match dictionary size {len(self.dictionary)}"
            )

    @property
    def size(self) -> int:
        return self.n


@dataclass(frozen=True)
class ValueBasis:
    """Operator coordinates: observable values at the M training points (M x M matrix)."""

    m: int

    @property
    def size(self) -> int:
        return self.m


@dataclass(frozen=True, eq=False)
class KernelSection:
    """Operator coordinates: kernel sections centred at the training inputs (M x M matrix)."""

    kernel: Kernel
    centers: np.ndarray

    @property
    def size(self) -> int:
        return self.centers.shape[0]


@dataclass(frozen=True, eq=False)
class KoopmanOperator:
    """A fitted finite-dimensional Koopman operator tagged with its basis.

    ``matrix @ coeffs`` advances coefficient vectors expressed in ``basis``
    one step along the learned dynamics.
    """

    matrix: np.ndarray
    basis: FunctionBasis | ValueBasis | KernelSection
    noise: NoiseModel | None = None

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        n = self.basis.size
        if M.shape != (n, n):
            raise InvalidInputError(
                f"operator matrix shape {M.shape} does not match basis size {n}"
            )
        if not np.isfinite(M).all():
            raise InvalidInputError("operator matrix contains non-finite entries")
        object.__setattr__(self, "matrix", M)


def _check_feature_pair(P_x: np.ndarray, P_y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    P_x = np.asarray(P_x, dtype=float)
    P_y = np.asarray(P_y, dtype=float)
    if P_x.ndim != 2 or P_x.shape != P_y.shape:
        raise InvalidInputError(
            f"feature matrices must share one 2-D shape, got {P_x.shape} vs {P_y.shape}"
        )
    if not (np.isfinite(P_x).all() and np.isfinite(P_y).all()):
        raise InvalidInputError("feature matrices contain non-finite entries")
    return P_x, P_y


def fit_dmd(P_x: np.ndarray, P_y: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> KoopmanOperator:
    """Least-squares operator on stacked observable values.

    Solves min ||P_y - U P_x||_F, giving ``U = P_y @ pinv(P_x)``; applied
    to the values of any observable at the training inputs it approximates
    the values at the mapped points.
    """
    P_x, P_y = _check_feature_pair(P_x, P_y)
    matrix = P_y @ pseudo_inverse(P_x, rank_tol)
    return KoopmanOperator(matrix, ValueBasis(P_x.shape[0]))


def fit_edmd(
    P_x: np.ndarray,
    P_y: np.ndarray,
    d: Dictionary | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> KoopmanOperator:
    """Least-squares operator on dictionary coefficients.

    Solves min ||P_x A - P_y||_F, giving ``A = pinv(P_x) @ P_y``: the map
    sending the coefficients of an observable to the coefficients of the
    best representation of its one-step composition. Passing the dictionary
    tags the operator so it can be used with ``edmd_predict``.
    """
    P_x, P_y = _check_feature_pair(P_x, P_y)
    matrix = pseudo_inverse(P_x, rank_tol) @ P_y
    return KoopmanOperator(matrix, FunctionBasis(P_x.shape[1], d))


def fit_edmd_regularized(
    P_x: np.ndarray,
    P_y: np.ndarray,
    weight: np.ndarray,
    sigma2: float,
    d: Dictionary | None = None,
    form: str = "auto",
) -> KoopmanOperator:
    """MAP estimate of the coefficient-space operator under a Gaussian prior.

    Computes ``(sigma2 * inv(weight) + P_x^T P_x)^-1 P_x^T P_y`` where
    ``weight`` is the prior covariance of the mapped coefficients. Two
    algebraically equal forms are available:

    * ``"primal"`` solves the N x N system above;
    * ``"dual"`` evaluates ``weight P_x^T (P_x weight P_x^T + sigma2 I)^-1 P_y``,
      preferable when there are fewer snapshots than basis functions.

    ``"auto"`` picks primal when M >= N or sigma2 == 0, dual otherwise.
    Setting sigma2 = 0 with full-column-rank features recovers the plain
    least-squares operator.
    """
    P_x, P_y = _check_feature_pair(P_x, P_y)
    m, n = P_x.shape
    W = np.asarray(weight, dtype=float)
    if W.shape != (n, n):
        raise InvalidInputError(f"weight must be {n}x{n}, got shape {W.shape}")
    if not (np.isfinite(sigma2) and sigma2 >= 0.0):
        raise InvalidInputError(f"sigma2 must be finite and >= 0, got {sigma2}")
    if form not in ("auto", "primal", "dual"):
        raise InvalidInputError(f"unknown form {form!r}")
    if form == "auto":
        form = "primal" if (m >= n or sigma2 == 0.0) else "dual"

    if form == "primal":
        if sigma2 == 0.0:
            G = P_x.T @ P_x
        else:
            try:
                w_inv = solve_regularized(W, 0.0, np.eye(n))
            except ConditioningError as exc:
                raise InvalidInputError("weight matrix is singular") from exc
            G = sigma2 * w_inv + P_x.T @ P_x
        matrix = solve_regularized(0.5 * (G + G.T), 0.0, P_x.T @ P_y)
    else:
        matrix = W @ P_x.T @ solve_regularized(P_x @ W @ P_x.T, sigma2, P_y)
    return KoopmanOperator(matrix, FunctionBasis(n, d), NoiseModel(sigma2=sigma2))


def fit_koopman_kernel_function(
    k: Kernel, s: SnapshotSet, noise: NoiseModel
) -> KoopmanOperator:
    """Gram-regularized Koopman estimate in the kernel-section basis.

    ``U = (K(X, X) + (sigma2 + mu) I)^-1 K(Y, X)``: maps the coefficients
    of an observable's projection onto the kernel sections to the
    coefficients of the posterior-mean estimate of its composition with
    the dynamics.
    """
    Kxx = gram(k, s.X, s.X)
    Kyx = gram(k, s.Y, s.X)
    matrix = solve_regularized(Kxx, noise.sigma2 + noise.mu, Kyx)
    return KoopmanOperator(matrix, KernelSection(k, s.X), noise)


def fit_koopman_kernel_value(
    k: Kernel, s: SnapshotSet, noise: NoiseModel
) -> KoopmanOperator:
    """Value-advancing Koopman estimate in the kernel framework.

    ``U = K(Y, X) (K(X, X) + mu I)^-1`` sends observable values at the
    training inputs to estimated values at the mapped points.
    """
    Kxx = gram(k, s.X, s.X)
    Kyx = gram(k, s.Y, s.X)
    matrix = solve_regularized(Kxx, noise.mu, Kyx.T).T
    return KoopmanOperator(matrix, ValueBasis(s.size), noise)


def _check_values(values: np.ndarray, m: int) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != (m,):
        raise InvalidInputError(f"expected a length-{m} value vector, got shape {values.shape}")
    if not np.isfinite(values).all():
        raise InvalidInputError("observable values contain non-finite entries")
    return values


def project_observable(
    k: Kernel, centers: np.ndarray, values: np.ndarray, mu: float = 0.0
) -> np.ndarray:
    """Coefficients of the projection onto the kernel sections at ``centers``.

    Returns alpha with projected function ``K(., centers) @ alpha``; with
    mu = 0 the projection interpolates ``values`` at the centers.
    """
    centers = as_points(centers)
    values = _check_values(values, centers.shape[0])
    Kcc = gram(k, centers, centers)
    return solve_regularized(Kcc, mu, values)


def predict_composed(
    k: Kernel,
    s: SnapshotSet,
    noise: NoiseModel,
    values_y: np.ndarray,
    query: np.ndarray,
) -> np.ndarray:
    """Posterior-mean reconstruction of an observable composed with the dynamics.

    ``values_y`` holds the observable evaluated at the snapshot outputs
    (noisy measurements of the composition at the inputs); the return value
    is ``K(query, X) (K(X, X) + (sigma2 + mu) I)^-1 values_y`` evaluated at
    each query point.
    """
    values_y = _check_values(values_y, s.size)
    query = as_points(query)
    Kxx = gram(k, s.X, s.X)
    coeffs = solve_regularized(Kxx, noise.sigma2 + noise.mu, values_y)
    return gram(k, query, s.X) @ coeffs


def predict_value_based(
    k: Kernel,
    s: SnapshotSet,
    noise: NoiseModel,
    values_x: np.ndarray,
    query: np.ndarray,
) -> np.ndarray:
    """Value-based reconstruction of an observable composed with the dynamics.

    Starts from the observable's values at the snapshot *inputs* and never
    needs its analytic form: (1) project onto the kernel sections, (2)
    evaluate the projection at the mapped points, (3) reconstruct the
    composition from those synthetic measurements as in
    ``predict_composed``.
    """
    values_x = _check_values(values_x, s.size)
    query = as_points(query)
    Kxx = gram(k, s.X, s.X)
    alpha = solve_regularized(Kxx, noise.mu, values_x)
    values_at_y = gram(k, s.Y, s.X) @ alpha
    coeffs = solve_regularized(Kxx, noise.sigma2 + noise.mu, values_at_y)
    return gram(k, query, s.X) @ coeffs


def edmd_predict(
    op: KoopmanOperator, d: Dictionary, coeffs: np.ndarray, query: np.ndarray
) -> np.ndarray:
    """Advance an observable in the dictionary basis and evaluate it.

    ``coeffs`` are the observable's dictionary coefficients; the result is
    ``Psi(query) @ op.matrix @ coeffs`` at each query point.
    """
    if not isinstance(op.basis, FunctionBasis):
        raise InvalidInputError(
            f"operator is expressed in {type(op.basis).__name__}, expected a function basis"
        )
    if len(d) != op.basis.size:
        raise InvalidInputError(
            f"dictionary size {len(d)} does not match operator basis size {op.basis.size}"
        )
    if op.basis.dictionary is not None and op.basis.dictionary.labels != d.labels:
        raise InvalidInputError("operator was fitted with a different dictionary")
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (len(d),):
        raise InvalidInputError(f"expected {len(d)} coefficients, got shape {coeffs.shape}")
    return d.feature_matrix(query) @ (op.matrix @ coeffs)
