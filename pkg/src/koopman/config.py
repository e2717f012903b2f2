"""Declarative experiment configuration.

Configs are JSON documents validated into pydantic models; every entry
that names a function (system, dictionary member, kernel) is a tagged
constructor resolved here into the corresponding domain object.
"""

from __future__ import annotations

from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .exceptions import ConfigurationError
from .kernels import Kernel, dictionary_kernel, rbf_kernel
from .observables import (
    Dictionary,
    Observable,
    constant,
    hill,
    monomial,
    quadratic_cost,
    sine,
    state_coordinate,
)
from .simulation import DynamicalSystem, benchmark_system

__all__ = [
    "SystemSpec",
    "SamplingSpec",
    "ObservableSpec",
    "DictionarySpec",
    "KernelSpec",
    "GridSpec",
    "ExperimentConfig",
]


class SystemSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["benchmark1d"] = "benchmark1d"

    def build(self) -> DynamicalSystem:
        return benchmark_system()


class SamplingSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_traj: int = Field(ge=1)
    traj_len: int = Field(ge=1)
    init_low: float
    init_high: float

    @model_validator(mode="after")
    def _check_interval(self):
        if not self.init_low < self.init_high:
            raise ValueError("init_low must be strictly below init_high")
        return self


class ObservableSpec(BaseModel):
    """Tagged constructor for one observable (or several, for 'hill')."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["constant", "monomial", "sin", "hill", "state", "quadratic-cost"]
    degree: int | None = None
    freq: float | None = None
    count: int | None = None
    target: float | None = None

    def build_members(self) -> list[Observable]:
        if self.kind == "constant":
            return [constant()]
        if self.kind == "monomial":
            if self.degree is None:
                raise ConfigurationError("monomial observable needs a 'degree'")
            return [monomial(self.degree)]
        if self.kind == "sin":
            if self.freq is None:
                raise ConfigurationError("sin observable needs a 'freq'")
            return [sine(self.freq)]
        if self.kind == "hill":
            if self.count is None:
                raise ConfigurationError("hill observable needs a 'count'")
            return [hill(i) for i in range(1, self.count + 1)]
        if self.kind == "state":
            return [state_coordinate(0)]
        if self.kind == "quadratic-cost":
            return [quadratic_cost(self.target if self.target is not None else 0.0)]
        raise ConfigurationError(f"unknown observable kind {self.kind!r}")

    def build_target(self) -> tuple[str, Observable]:
        """A single named observable for error reporting."""
        members = self.build_members()
        if len(members) != 1:
            raise ConfigurationError(
                f"observable kind {self.kind!r} expands to {len(members)} members; "
                "targets must be single observables"
            )
        return self.kind, members[0]


class DictionarySpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    members: list[ObservableSpec] = Field(min_length=1)

    def build(self) -> Dictionary:
        obs: list[Observable] = []
        for spec in self.members:
            obs.extend(spec.build_members())
        return Dictionary(tuple(obs))


class KernelSpec(BaseModel):
    """Kernel plus the noise model used when estimating with it.

    ``sigma2 = "true-noise"`` resolves to the scenario's injected noise
    variance (falling back to ``mu`` in the noiseless scenario);
    ``rho = "grid"`` requests a grid search over the config's ``rho_grid``.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    kind: Literal["dictionary", "rbf"]
    label: str | None = None
    dictionary: str = "default"
    weight: Literal["identity"] = Field("identity", alias="lambda")
    rho: Union[float, Literal["grid"], None] = None
    sigma2: Union[float, Literal["true-noise"]] = 0.0
    mu: float | None = Field(None, ge=0.0)

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "rbf":
            if self.rho is None:
                raise ValueError("rbf kernel needs 'rho' (a value or \"grid\")")
            if isinstance(self.rho, float) and self.rho <= 0.0:
                raise ValueError("rbf 'rho' must be positive")
        elif self.rho is not None:
            raise ValueError("'rho' only applies to rbf kernels")
        if self.dictionary != "default":
            raise ValueError("only the config's own dictionary (ref \"default\") is supported")
        if isinstance(self.sigma2, float) and self.sigma2 < 0.0:
            raise ValueError("sigma2 must be >= 0")
        return self

    @property
    def name(self) -> str:
        if self.label is not None:
            return self.label
        return "fixed-dictionary" if self.kind == "dictionary" else "gaussian-rbf"

    @property
    def jitter(self) -> float:
        if self.mu is not None:
            return self.mu
        return 1e-5 if self.kind == "dictionary" else 1e-3

    def resolve_sigma2(self, sigma_t: float) -> float:
        if self.sigma2 == "true-noise":
            return sigma_t**2 if sigma_t > 0.0 else self.jitter
        return float(self.sigma2)

    def build_kernel(self, d: Dictionary, rho: float | None = None) -> Kernel:
        if self.kind == "dictionary":
            return dictionary_kernel(d, np.eye(len(d)))
        value = rho if rho is not None else self.rho
        if not isinstance(value, (int, float)):
            raise ConfigurationError(
                f"kernel {self.name!r} needs a concrete rho; got {value!r}"
            )
        return rbf_kernel(float(value))

    @property
    def needs_rho_search(self) -> bool:
        return self.kind == "rbf" and self.rho == "grid"


class GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    low: float
    high: float
    points: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_interval(self):
        if not self.low < self.high:
            raise ValueError("grid low must be strictly below high")
        return self

    def build(self) -> np.ndarray:
        return np.linspace(self.low, self.high, self.points)


class ExperimentConfig(BaseModel):
    """Complete description of one benchmark experiment."""

    model_config = ConfigDict(extra="forbid")

    system: SystemSpec = SystemSpec()
    sampling: SamplingSpec
    dictionary: DictionarySpec
    kernels: list[KernelSpec] = Field(min_length=1)
    observables: list[ObservableSpec] = Field(min_length=1)
    grid: GridSpec
    rho_grid: list[float] = Field(default_factory=list)
    sigma_t_scenarios: list[float] = Field(min_length=1)
    monte_carlo_count: int = Field(1, ge=1)
    seed: int = 0
    out_dir: str | None = None

    @model_validator(mode="after")
    def _check(self):
        names = [k.name for k in self.kernels]
        if len(set(names)) != len(names):
            raise ValueError(f"kernel labels must be unique, got {names}")
        if any(s < 0 for s in self.sigma_t_scenarios):
            raise ValueError("sigma_t scenarios must be >= 0")
        if any(k.needs_rho_search for k in self.kernels) and not self.rho_grid:
            raise ValueError("rho_grid must be non-empty when a kernel requests a grid search")
        if any(r <= 0 for r in self.rho_grid):
            raise ValueError("rho_grid candidates must be positive")
        return self
