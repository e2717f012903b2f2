"""Acceptance suite: one test (and one printed PASS line) per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
details; the criteria exercise the shipped ``paper.json`` configuration.
"""

import time
from pathlib import Path

import numpy as np
import pytest

from koopman.estimators import (
    NoiseModel,
    edmd_predict,
    fit_dmd,
    fit_edmd,
    fit_edmd_regularized,
    fit_koopman_kernel_function,
    predict_composed,
)
from koopman.harness import monte_carlo, run_scenario, derive_seed
from koopman.kernels import dictionary_kernel, gram, rbf_kernel
from koopman.linalg import pseudo_inverse, solve_regularized
from koopman.observables import SnapshotSet, benchmark_dictionary
from koopman.simulation import benchmark_system


@pytest.fixture(scope="module")
def sweep(benchmark_config):
    """The full Monte Carlo sweep of the shipped config, run once and timed."""
    t0 = time.perf_counter()
    result = monte_carlo(benchmark_config)
    elapsed = time.perf_counter() - t0
    return result, elapsed


def _median(result, sigma_t, method, observable):
    row = next(
        s for s in result.summary
        if s.sigma_t == sigma_t and s.method == method and s.observable == observable
    )
    return row.median


def _pooled_median(result, sigma_t, method):
    errors = [
        r.error for r in result.runs
        if r.sigma_t == sigma_t and r.method == method and r.status == "ok"
    ]
    return float(np.median(errors))


def test_criterion_1_noiseless_dictionary_reconstruction(benchmark_config):
    # sigma_t = 0, M = 50, dictionary kernel with sigma2 = mu = 1e-5:
    # normalized L2 error of the reconstructed state map < 1e-2, in under a second
    seed = derive_seed(benchmark_config.seed, 0, 0)
    t0 = time.perf_counter()
    results = run_scenario(benchmark_config, 0.0, seed)
    elapsed = time.perf_counter() - t0
    row = next(r for r in results if (r.method, r.observable) == ("fixed-dictionary", "state"))
    assert row.status == "ok"
    assert row.error < 1e-2
    assert elapsed < 1.0
    print(f"ACCEPTANCE 1 PASS: noiseless fixed-dictionary state error {row.error:.3e} < 1e-2 "
          f"({elapsed:.3f} s)")


def test_criterion_2_equilibrium_location():
    # independent bisection oracle on f(x) - x over [0.5, 1.5]
    sys = benchmark_system()
    g = lambda v: float(sys.transition(np.array([v]))[0]) - v
    a, b = 0.5, 1.5
    assert g(a) * g(b) < 0
    for _ in range(60):
        mid = 0.5 * (a + b)
        if g(a) * g(mid) <= 0:
            b = mid
        else:
            a = mid
    xstar = 0.5 * (a + b)
    assert abs(xstar - 0.988) <= 0.005
    print(f"ACCEPTANCE 2 PASS: equilibrium x* = {xstar:.6f} within 0.988 +/- 0.005")


def test_criterion_3_kernel_advantage_on_cost(benchmark_config, sweep):
    # over C = 100 runs per scenario, the RBF median error for the cost
    # observable is strictly below the fixed-dictionary median, every scenario
    result, elapsed = sweep
    lines = []
    for sigma_t in benchmark_config.sigma_t_scenarios:
        rbf = _median(result, sigma_t, "gaussian-rbf", "quadratic-cost")
        fixed = _median(result, sigma_t, "fixed-dictionary", "quadratic-cost")
        assert rbf is not None and fixed is not None
        assert rbf < fixed, f"sigma_t={sigma_t}: rbf {rbf} !< dictionary {fixed}"
        lines.append(f"sigma_t={sigma_t:g}: rbf {rbf:.4f} < dictionary {fixed:.4f}")
    assert elapsed < 300.0
    print(f"ACCEPTANCE 3 PASS: RBF cost advantage in every scenario ({'; '.join(lines)}; "
          f"sweep {elapsed:.1f} s < 300 s)")


def test_criterion_4_noise_degradation(benchmark_config, sweep):
    # each method's median error over all its runs grows from the noiseless
    # scenario to the sigma_t = 0.5 scenario
    result, _ = sweep
    lines = []
    for method in ("fixed-dictionary", "gaussian-rbf"):
        clean = _pooled_median(result, 0.0, method)
        noisy = _pooled_median(result, 0.5, method)
        assert noisy > clean, f"{method}: median at sigma_t=0.5 ({noisy}) !> sigma_t=0 ({clean})"
        lines.append(f"{method}: {clean:.4f} -> {noisy:.4f}")
    print(f"ACCEPTANCE 4 PASS: noise degrades both methods ({'; '.join(lines)})")


def test_criterion_5_estimator_identity_suite():
    d = benchmark_dictionary()
    checks = {k: 0 for k in "abcdef"}
    for i in range(100):
        rng = np.random.default_rng(10_000 + i)
        m = int(rng.integers(9, 20))
        n = int(rng.integers(2, 8))
        P_x = rng.standard_normal((m, n))
        P_y = rng.standard_normal((m, n))

        # (a) sigma2 = 0, identity prior == plain least squares
        plain = fit_edmd(P_x, P_y).matrix
        reg = fit_edmd_regularized(P_x, P_y, np.eye(n), 0.0).matrix
        assert np.linalg.norm(reg - plain) <= 1e-8 * np.linalg.norm(plain)
        checks["a"] += 1

        # (b) primal and dual ridge forms agree
        W = rng.standard_normal((n, n))
        W = W @ W.T + 0.5 * np.eye(n)
        sigma2 = float(rng.uniform(0.05, 2.0))
        primal = fit_edmd_regularized(P_x, P_y, W, sigma2, form="primal").matrix
        dual = fit_edmd_regularized(P_x, P_y, W, sigma2, form="dual").matrix
        assert np.linalg.norm(primal - dual) <= 1e-8 * np.linalg.norm(primal)
        checks["b"] += 1

        # (e) least-squares residual orthogonality for both operator flavours
        U_v = fit_dmd(P_x, P_y).matrix
        U_f = plain
        tol = 1e-8 * np.linalg.norm(P_y, "fro")
        assert np.linalg.norm((P_y - U_v @ P_x) @ P_x.T, "fro") <= tol
        assert np.linalg.norm((P_y - P_x @ U_f).T @ P_x, "fro") <= tol
        checks["e"] += 1

        # (c) dictionary-kernel posterior mean == ridge prediction in the basis
        X = rng.uniform(0, 7, size=(18, 1))
        Y = rng.uniform(0, 7, size=(18, 1))
        s = SnapshotSet(X, Y)
        F_x, F_y = d.feature_matrix(X), d.feature_matrix(Y)
        Wd = rng.standard_normal((8, 8))
        Wd = Wd @ Wd.T + np.eye(8)
        alpha = rng.standard_normal(8)
        query = rng.uniform(0, 7, size=(12, 1))
        sig = float(rng.uniform(0.01, 1.0))
        op = fit_edmd_regularized(F_x, F_y, Wd, sig, d=d)
        lhs = edmd_predict(op, d, alpha, query)
        rhs = predict_composed(dictionary_kernel(d, Wd), s, NoiseModel(sigma2=sig), F_y @ alpha, query)
        assert np.linalg.norm(lhs - rhs) <= 1e-8 * np.linalg.norm(rhs)
        checks["c"] += 1

        # (d) kernel-section operator advances projection coefficients
        k = rbf_kernel(float(rng.uniform(0.3, 1.5)))
        noise = NoiseModel(sigma2=float(rng.uniform(0.01, 0.5)))
        coeffs = rng.standard_normal(18)
        op_k = fit_koopman_kernel_function(k, s, noise)
        lhs = gram(k, query, X) @ (op_k.matrix @ coeffs)
        rhs = predict_composed(k, s, noise, gram(k, Y, X) @ coeffs, query)
        assert np.linalg.norm(lhs - rhs) <= 1e-10 * np.linalg.norm(rhs)
        checks["d"] += 1

        # (f) exact interpolation at zero noise and zero jitter; jittered-grid
        # points keep the Gram comfortably invertible
        Xi = (np.linspace(0.2, 6.8, 8) + rng.uniform(-0.3, 0.3, size=8))[:, None]
        si = SnapshotSet(Xi, Xi + 0.1)
        vals = rng.standard_normal(8)
        out = predict_composed(rbf_kernel(0.8), si, NoiseModel(), vals, Xi)
        assert np.linalg.norm(out - vals) <= 1e-8 * np.linalg.norm(vals)
        checks["f"] += 1
    assert all(count == 100 for count in checks.values())
    print("ACCEPTANCE 5 PASS: estimator identities over 100 random instances "
          f"(checks run: {checks})")


def test_criterion_6_cli_determinism(tmp_path):
    from koopman.cli import main

    config = str(Path(__file__).resolve().parent.parent / "paper.json")
    out1, out2 = tmp_path / "first", tmp_path / "second"
    assert main(["mc", "--config", config, "--seed", "42", "--out", str(out1)]) == 0
    assert main(["mc", "--config", config, "--seed", "42", "--out", str(out2)]) == 0
    runs_equal = (out1 / "runs.csv").read_bytes() == (out2 / "runs.csv").read_bytes()
    summary_equal = (out1 / "summary.csv").read_bytes() == (out2 / "summary.csv").read_bytes()
    assert runs_equal and summary_equal
    print("ACCEPTANCE 6 PASS: repeated `koopman mc --config paper.json --seed 42` "
          "produced byte-identical runs.csv and summary.csv")


def test_criterion_7_linalg_and_gram_suites():
    d = benchmark_dictionary()
    for i in range(100):
        rng = np.random.default_rng(20_000 + i)
        m = int(rng.integers(2, 12))
        n = int(rng.integers(1, m + 1))
        A = rng.standard_normal((m, n))
        P = pseudo_inverse(A)
        assert np.linalg.norm(A @ P @ A - A, "fro") <= 1e-10 * np.linalg.norm(A, "fro")
        assert np.abs(P @ A - (P @ A).T).max() <= 1e-10
        assert np.abs(A @ P - (A @ P).T).max() <= 1e-10

        G = A.T @ A + 0.1 * np.eye(n)
        c = float(rng.uniform(0.0, 1.0))
        B = rng.standard_normal((n, 2))
        X = solve_regularized(G, c, B)
        X_ref = pseudo_inverse(G + c * np.eye(n)) @ B
        assert np.linalg.norm(X - X_ref) <= 1e-8 * max(np.linalg.norm(X_ref), 1e-30)

        pts = rng.uniform(-2, 7, size=(10, 1))
        W = rng.standard_normal((8, 8))
        W = W @ W.T + np.eye(8)
        k1 = dictionary_kernel(d, W)
        G1 = gram(k1, pts, pts)
        F = d.feature_matrix(pts)
        ref = F @ W @ F.T
        assert np.abs(G1 - ref).max() <= 1e-12 * np.abs(ref).max()
        assert np.abs(G1 - G1.T).max() <= 1e-12 * np.abs(G1).max()
        assert np.linalg.eigvalsh(0.5 * (G1 + G1.T)).min() >= -1e-8 * np.trace(G1)

        k2 = rbf_kernel(float(rng.uniform(0.1, 3.0)))
        G2 = gram(k2, pts, pts)
        assert np.abs(G2 - G2.T).max() <= 1e-12
        assert np.linalg.eigvalsh(G2).min() >= -1e-8 * np.trace(G2)
    print("ACCEPTANCE 7 PASS: Moore-Penrose and Gram factorization suites "
          "(100 random instances at stated tolerances)")
