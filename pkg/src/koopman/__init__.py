"""Koopman operator estimation for nonlinear discrete-time systems.

The package fits finite-dimensional Koopman operators from snapshot data
four ways (value-based and function-based least squares, their regularized
versions, and kernel/RKHS estimators), simulates benchmark dynamics, and
ships a config-driven harness comparing fixed-dictionary and Gaussian-RBF
reconstruction under noise. A FastAPI service exposes the functionality
over HTTP; the ``koopman`` CLI is a thin client of that service.
"""

__version__ = "0.1.0"

from .estimators import (
    KoopmanOperator,
    NoiseModel,
    edmd_predict,
    fit_dmd,
    fit_edmd,
    fit_edmd_regularized,
    fit_koopman_kernel_function,
    fit_koopman_kernel_value,
    predict_composed,
    predict_value_based,
    project_observable,
)
from .exceptions import (
    ConditioningError,
    ConfigurationError,
    DivergenceError,
    EvaluationError,
    InvalidInputError,
    KoopmanError,
)
from .kernels import dictionary_kernel, gram, rbf_kernel
from .observables import (
    Dictionary,
    Observable,
    SnapshotSet,
    benchmark_dictionary,
    feature_matrices,
    feature_row,
    hill_dictionary,
    observable_values,
)
from .simulation import (
    DynamicalSystem,
    SamplingPlan,
    benchmark_system,
    generate_snapshots,
    simulate_trajectory,
)

__all__ = [
    "__version__",
    "KoopmanOperator",
    "NoiseModel",
    "edmd_predict",
    "fit_dmd",
    "fit_edmd",
    "fit_edmd_regularized",
    "fit_koopman_kernel_function",
    "fit_koopman_kernel_value",
    "predict_composed",
    "predict_value_based",
    "project_observable",
    "KoopmanError",
    "InvalidInputError",
    "EvaluationError",
    "ConditioningError",
    "DivergenceError",
    "ConfigurationError",
    "dictionary_kernel",
    "rbf_kernel",
    "gram",
    "Dictionary",
    "Observable",
    "SnapshotSet",
    "benchmark_dictionary",
    "hill_dictionary",
    "feature_row",
    "feature_matrices",
    "observable_values",
    "DynamicalSystem",
    "SamplingPlan",
    "benchmark_system",
    "simulate_trajectory",
    "generate_snapshots",
]
