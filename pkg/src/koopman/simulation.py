"""Benchmark dynamics, noisy trajectory generation and snapshot I/O.

The random stream is documented so runs reproduce across machines: one
PCG64 generator seeded from the plan draws all trajectory initial points
first (one uniform block), then the process-noise increments trajectory by
trajectory in simulation order.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .exceptions import DivergenceError, InvalidInputError
from .observables import SnapshotSet

__all__ = [
    "DynamicalSystem",
    "SamplingPlan",
    "benchmark_system",
    "simulate_trajectory",
    "generate_snapshots",
    "save_snapshots",
    "load_snapshots",
]


@dataclass(frozen=True)
class DynamicalSystem:
    """Autonomous discrete-time system x_{t+1} = transition(x_t)."""

    transition: Callable[[np.ndarray], np.ndarray]
    dim: int
    label: str

    def map_points(self, pts: np.ndarray) -> np.ndarray:
        """Apply the transition to each row of an (M, dim) array."""
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[1] != self.dim:
            raise InvalidInputError(
                f"points have dimension {pts.shape[1]}, system '{self.label}' has {self.dim}"
            )
        return np.stack([np.atleast_1d(self.transition(p)) for p in pts])


def benchmark_system() -> DynamicalSystem:
    """The scalar oscillatory benchmark map -x + 3/(1+x^2) + 0.5 sin(2x)."""

    def transition(x: np.ndarray) -> np.ndarray:
        v = float(x[0])
        return np.array([-v + 3.0 / (1.0 + v * v) + 0.5 * np.sin(2.0 * v)])

    return DynamicalSystem(transition, dim=1, label="benchmark-1d")


@dataclass(frozen=True)
class SamplingPlan:
    """How to draw snapshot pairs: trajectory count/length, initial box, noise, seed."""

    n_traj: int
    traj_len: int
    init_low: float
    init_high: float
    sigma_t: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_traj < 1 or self.traj_len < 1:
            raise InvalidInputError("n_traj and traj_len must be >= 1")
        if not self.init_low < self.init_high:
            raise InvalidInputError(
                f"init_low must be < init_high, got [{self.init_low}, {self.init_high}]"
            )
        if not (np.isfinite(self.sigma_t) and self.sigma_t >= 0.0):
            raise InvalidInputError(f"sigma_t must be finite and >= 0, got {self.sigma_t}")

    @property
    def size(self) -> int:
        return self.n_traj * self.traj_len


def simulate_trajectory(
    sys: DynamicalSystem,
    x0: np.ndarray,
    steps: int,
    sigma_t: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Simulate ``steps`` noisy transitions; returns the (steps+1, dim) state history.

    Each step applies the transition and adds one zero-mean Gaussian draw of
    standard deviation ``sigma_t`` per state component; the noisy state is
    fed back into the recursion.
    """
    if steps < 1:
        raise InvalidInputError(f"steps must be >= 1, got {steps}")
    if not (np.isfinite(sigma_t) and sigma_t >= 0.0):
        raise InvalidInputError(f"sigma_t must be finite and >= 0, got {sigma_t}")
    x = np.atleast_1d(np.asarray(x0, dtype=float))
    if x.shape != (sys.dim,):
        raise InvalidInputError(f"x0 must have shape ({sys.dim},), got {x.shape}")
    states = np.empty((steps + 1, sys.dim))
    states[0] = x
    for t in range(steps):
        x = np.atleast_1d(sys.transition(x)) + rng.normal(0.0, sigma_t, size=sys.dim)
        if not np.isfinite(x).all():
            raise DivergenceError(
                f"trajectory of '{sys.label}' left the finite domain at step {t + 1}", t + 1
            )
        states[t + 1] = x
    return states


def generate_snapshots(sys: DynamicalSystem, plan: SamplingPlan) -> SnapshotSet:
    """Draw trajectories per the plan and stack the consecutive state pairs.

    Initial points are uniform on [init_low, init_high] per component; each
    trajectory contributes ``traj_len`` pairs (x_t, x_{t+1}), so the set has
    n_traj * traj_len pairs in trajectory order.
    """
    rng = np.random.default_rng(plan.seed)
    x0s = rng.uniform(plan.init_low, plan.init_high, size=(plan.n_traj, sys.dim))
    X = np.empty((plan.size, sys.dim))
    Y = np.empty((plan.size, sys.dim))
    traj = np.empty(plan.size, dtype=int)
    step = np.empty(plan.size, dtype=int)
    row = 0
    for t in range(plan.n_traj):
        states = simulate_trajectory(sys, x0s[t], plan.traj_len, plan.sigma_t, rng)
        for k in range(plan.traj_len):
            X[row] = states[k]
            Y[row] = states[k + 1]
            traj[row] = t
            step[row] = k
            row += 1
    return SnapshotSet(X, Y, sigma_t=plan.sigma_t, seed=plan.seed, traj=traj, step=step)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def save_snapshots(s: SnapshotSet, path: str | Path) -> None:
    """Write a snapshot set to disk; CSV for scalar states, JSON otherwise."""
    path = Path(path)
    if path.suffix == ".csv":
        if s.dim != 1:
            raise InvalidInputError("CSV snapshot format only supports scalar states; use .json")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["traj", "step", "x", "y"])
            for i in range(s.size):
                writer.writerow([s.traj[i], s.step[i], _fmt(s.X[i, 0]), _fmt(s.Y[i, 0])])
    elif path.suffix == ".json":
        payload = {
            "sigma_t": s.sigma_t,
            "seed": s.seed,
            "traj": s.traj.tolist(),
            "step": s.step.tolist(),
            "X": s.X.tolist(),
            "Y": s.Y.tolist(),
        }
        path.write_text(json.dumps(payload))
    else:
        raise InvalidInputError(f"unsupported snapshot format {path.suffix!r}; use .csv or .json")


def load_snapshots(path: str | Path, sigma_t: float = 0.0, seed: int | None = None) -> SnapshotSet:
    """Read a snapshot set written by :func:`save_snapshots`."""
    path = Path(path)
    if path.suffix == ".csv":
        traj, step, xs, ys = [], [], [], []
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                traj.append(int(rec["traj"]))
                step.append(int(rec["step"]))
                xs.append(float(rec["x"]))
                ys.append(float(rec["y"]))
        return SnapshotSet(
            np.array(xs)[:, None],
            np.array(ys)[:, None],
            sigma_t=sigma_t,
            seed=seed,
            traj=np.array(traj),
            step=np.array(step),
        )
    if path.suffix == ".json":
        payload = json.loads(path.read_text())
        return SnapshotSet(
            np.asarray(payload["X"], dtype=float),
            np.asarray(payload["Y"], dtype=float),
            sigma_t=float(payload.get("sigma_t", sigma_t)),
            seed=payload.get("seed", seed),
            traj=np.asarray(payload["traj"], dtype=int),
            step=np.asarray(payload["step"], dtype=int),
        )
    raise InvalidInputError(f"unsupported snapshot format {path.suffix!r}; use .csv or .json")
