"""Observables, dictionaries of basis functions, and snapshot data.

An observable maps a state vector to a scalar; a dictionary is an ordered
set of observables whose span is the finite-dimensional function space the
fixed-basis estimators work in. Feature matrices stack the dictionary
evaluations at the snapshot inputs and outputs row by row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import EvaluationError, InvalidInputError

__all__ = [
    "Observable",
    "Dictionary",
    "SnapshotSet",
    "constant",
    "monomial",
    "sine",
    "hill",
    "state_coordinate",
    "quadratic_cost",
    "linear_combination",
    "hill_dictionary",
    "benchmark_dictionary",
    "feature_row",
    "feature_matrices",
    "observable_values",
]


def as_points(pts: np.ndarray) -> np.ndarray:
    """Coerce points to a (M, n) float array; 1-D input is read as scalar states."""
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise InvalidInputError(f"points must be 1-D or 2-D, got shape {pts.shape}")
    return pts


def _scalar_states(pts: np.ndarray, label: str) -> np.ndarray:
    if pts.shape[1] != 1:
        raise InvalidInputError(
            f"observable '{label}' is defined for scalar states, got dimension {pts.shape[1]}"
        )
    return pts[:, 0]


@dataclass(frozen=True)
class Observable:
    """A scalar-valued function of the state, evaluated batch-wise.

    ``fn`` receives an (M, n) array of states and returns an (M,) array of
    values; evaluation must stay finite on finite inputs.
    """

    label: str
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        return observable_values(self, pts)


def constant(value: float = 1.0) -> Observable:
    label = "1" if value == 1.0 else f"{value:g}"
    return Observable(label, lambda pts: np.full(pts.shape[0], float(value)))


def monomial(degree: int) -> Observable:
    """x ** degree on scalar states."""
    if degree < 1:
        raise InvalidInputError(f"monomial degree must be >= 1, got {degree}")
    label = "x" if degree == 1 else f"x^{degree}"
    return Observable(label, lambda pts: _scalar_states(pts, label) ** degree)


def sine(freq: float) -> Observable:
    """sin(freq * x) on scalar states."""
    label = f"sin({freq:g}x)"
    return Observable(label, lambda pts: np.sin(freq * _scalar_states(pts, label)))


def hill(i: int) -> Observable:
    """The i-th even-power Hill function 1 / (1 + x^(2i)) on scalar states."""
    if i < 1:
        raise InvalidInputError(f"hill index must be >= 1, got {i}")
    label = f"1/(1+x^{2 * i})"
    return Observable(label, lambda pts: 1.0 / (1.0 + _scalar_states(pts, label) ** (2 * i)))


def state_coordinate(index: int = 0) -> Observable:
    """The observable returning one coordinate of the state."""
    label = "x" if index == 0 else f"x[{index}]"

    def fn(pts: np.ndarray) -> np.ndarray:
        if index >= pts.shape[1]:
            raise InvalidInputError(
                f"state coordinate {index} out of range for dimension {pts.shape[1]}"
            )
        return pts[:, index]

    return Observable(label, fn)


def quadratic_cost(target: float | Sequence[float] = 0.0) -> Observable:
    """Squared Euclidean distance to a target point, ||x - x0||^2."""
    target_arr = np.atleast_1d(np.asarray(target, dtype=float))
    label = f"|x-{np.squeeze(target_arr):g}|^2" if target_arr.size == 1 else "|x-x0|^2"

    def fn(pts: np.ndarray) -> np.ndarray:
        if target_arr.size not in (1, pts.shape[1]):
            raise InvalidInputError(
                f"quadratic cost target has size {target_arr.size}, states have dimension {pts.shape[1]}"
            )
        return ((pts - target_arr[None, :]) ** 2).sum(axis=1)

    return Observable(label, fn)


@dataclass(frozen=True)
class Dictionary:
    """Ordered, uniquely-labelled collection of basis observables."""

    members: tuple[Observable, ...]

    def __post_init__(self):
        if len(self.members) < 1:
            raise InvalidInputError("a dictionary needs at least one member")
        labels = [m.label for m in self.members]
        if len(set(labels)) != len(labels):
            raise InvalidInputError(f"dictionary labels must be unique, got {labels}")

    def __len__(self) -> int:
        return len(self.members)

    @property
    def labels(self) -> list[str]:
        return [m.label for m in self.members]

    def feature_matrix(self, pts: np.ndarray) -> np.ndarray:
        """Stack basis evaluations: entry (m, k) is member k at point m."""
        pts = as_points(pts)
        return np.stack([observable_values(m, pts) for m in self.members], axis=1)


def linear_combination(d: Dictionary, coeffs: Sequence[float], label: str = "combo") -> Observable:
    """Observable in span(d) with the given coefficient vector."""
    coeffs_arr = np.asarray(coeffs, dtype=float)
    if coeffs_arr.shape != (len(d),):
        raise InvalidInputError(
            f"expected {len(d)} coefficients, got shape {coeffs_arr.shape}"
        )
    return Observable(label, lambda pts: d.feature_matrix(pts) @ coeffs_arr)


def hill_dictionary(n: int) -> Dictionary:
    """The first n even-power Hill functions, in order of increasing power."""
    if n < 1:
        raise InvalidInputError(f"hill_dictionary needs n >= 1, got {n}")
    return Dictionary(tuple(hill(i) for i in range(1, n + 1)))


def benchmark_dictionary() -> Dictionary:
    """The 8-member scalar basis used by the benchmark: 1, x, x^2, sin(2x) and 4 Hill functions."""
    members = (constant(), monomial(1), monomial(2), sine(2.0)) + hill_dictionary(4).members
    return Dictionary(members)


@dataclass(frozen=True, eq=False)
class SnapshotSet:
    """Paired state samples (x, y) with y the (possibly noisy) successor of x.

    ``traj`` and ``step`` record which trajectory and step each pair came
    from; synthetic sets default to a single trajectory with consecutive
    steps.
    """

    X: np.ndarray
    Y: np.ndarray
    sigma_t: float = 0.0
    seed: int | None = None
    traj: np.ndarray | None = field(default=None, repr=False)
    step: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        X = as_points(self.X)
        Y = as_points(self.Y)
        if X.shape != Y.shape:
            raise InvalidInputError(f"X and Y must have identical shape, got {X.shape} vs {Y.shape}")
        if X.shape[0] < 1:
            raise InvalidInputError("a snapshot set needs at least one pair")
        if not (np.isfinite(X).all() and np.isfinite(Y).all()):
            raise InvalidInputError("snapshot entries must be finite")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        m = X.shape[0]
        traj = self.traj if self.traj is not None else np.zeros(m, dtype=int)
        step = self.step if self.step is not None else np.arange(m, dtype=int)
        traj = np.asarray(traj, dtype=int)
        step = np.asarray(step, dtype=int)
        if traj.shape != (m,) or step.shape != (m,):
            raise InvalidInputError("traj and step must be length-M integer vectors")
        object.__setattr__(self, "traj", traj)
        object.__setattr__(self, "step", step)

    @property
    def size(self) -> int:
        return self.X.shape[0]

    @property
    def dim(self) -> int:
        return self.X.shape[1]


def feature_row(d: Dictionary, x: np.ndarray) -> np.ndarray:
    """Evaluate every dictionary member at a single state; returns a length-N row."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.ndim != 1:
        raise InvalidInputError(f"state must be a vector, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise InvalidInputError("state contains non-finite entries")
    return d.feature_matrix(x[None, :])[0]


def feature_matrices(d: Dictionary, s: SnapshotSet) -> tuple[np.ndarray, np.ndarray]:
    """Feature matrices of the snapshot inputs and outputs.

    Row m of the first matrix is the dictionary evaluated at x^(m); row m of
    the second at y^(m). Shapes are (M, N).
    """
    return d.feature_matrix(s.X), d.feature_matrix(s.Y)


def observable_values(obs: Observable, pts: np.ndarray) -> np.ndarray:
    """Evaluate an observable at each row of ``pts``; returns a length-M vector."""
    pts = as_points(pts)
    if not np.isfinite(pts).all():
        raise InvalidInputError("points contain non-finite entries")
    values = np.asarray(obs.fn(pts), dtype=float)
    if values.shape != (pts.shape[0],):
        raise EvaluationError(
            f"observable '{obs.label}' returned shape {values.shape}, expected ({pts.shape[0]},)"
        )
    if not np.isfinite(values).all():
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise EvaluationError(
            f"observable '{obs.label}' produced a non-finite value at point index {bad}"
        )
    return values
