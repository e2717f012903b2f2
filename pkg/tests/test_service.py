import numpy as np
import pytest
from fastapi.testclient import TestClient

from koopman.estimators import NoiseModel, predict_composed, predict_value_based
from koopman.kernels import rbf_kernel
from koopman.observables import SnapshotSet
from koopman.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


class TestHealth:
    def test_ok(self, client):
        body = client.get("/health").json()
        assert body["status"] == "ok"
        assert body["version"]


class TestSnapshots:
    def test_generate_benchmark_set(self, client):
        req = {
            "system": {"kind": "benchmark1d"},
            "sampling": {"n_traj": 5, "traj_len": 10, "init_low": 0.0, "init_high": 7.0},
            "sigma_t": 0.0,
            "seed": 3,
        }
        body = client.post("/snapshots/generate", json=req).json()
        assert len(body["x"]) == 50 and len(body["y"]) == 50
        assert body["traj"][0] == 0 and body["traj"][-1] == 4

    def test_deterministic(self, client):
        req = {
            "sampling": {"n_traj": 2, "traj_len": 3, "init_low": 0.0, "init_high": 7.0},
            "sigma_t": 0.3,
            "seed": 11,
        }
        a = client.post("/snapshots/generate", json=req).json()
        b = client.post("/snapshots/generate", json=req).json()
        assert a == b

    def test_invalid_interval_rejected(self, client):
        req = {"sampling": {"n_traj": 1, "traj_len": 1, "init_low": 7.0, "init_high": 0.0}}
        assert client.post("/snapshots/generate", json=req).status_code == 422


class TestReconstruct:
    def _payload(self, mode="composed"):
        x = np.linspace(0.0, 5.0, 10)[:, None]
        y = x + 0.4
        values = np.sin(x[:, 0]) if mode == "value-based" else np.sin(y[:, 0])
        query = np.linspace(0.0, 5.0, 7)[:, None]
        return {
            "x": x.tolist(),
            "y": y.tolist(),
            "kernel": {"kind": "rbf", "rho": 0.8},
            "noise": {"sigma2": 0.01, "mu": 1e-6},
            "mode": mode,
            "values": values.tolist(),
            "query": query.tolist(),
        }, x, y, values, query

    def test_composed_matches_library(self, client):
        payload, x, y, values, query = self._payload("composed")
        body = client.post("/reconstruct", json=payload).json()
        ref = predict_composed(
            rbf_kernel(0.8), SnapshotSet(x, y), NoiseModel(sigma2=0.01, mu=1e-6), values, query
        )
        np.testing.assert_allclose(body["values"], ref, rtol=1e-12)

    def test_value_based_matches_library(self, client):
        payload, x, y, values, query = self._payload("value-based")
        body = client.post("/reconstruct", json=payload).json()
        ref = predict_value_based(
            rbf_kernel(0.8), SnapshotSet(x, y), NoiseModel(sigma2=0.01, mu=1e-6), values, query
        )
        np.testing.assert_allclose(body["values"], ref, rtol=1e-12)

    def test_dictionary_kernel_route(self, client):
        payload, *_ = self._payload("composed")
        payload["kernel"] = {
            "kind": "dictionary",
            "dictionary": {"members": [{"kind": "constant"}, {"kind": "monomial", "degree": 1}]},
        }
        resp = client.post("/reconstruct", json=payload)
        assert resp.status_code == 200
        assert len(resp.json()["values"]) == 7

    def test_value_length_mismatch_is_400(self, client):
        payload, *_ = self._payload("composed")
        payload["values"] = payload["values"][:-1]
        resp = client.post("/reconstruct", json=payload)
        assert resp.status_code == 400
        assert "value vector" in resp.json()["detail"]

    def test_missing_rho_is_400(self, client):
        payload, *_ = self._payload("composed")
        payload["kernel"] = {"kind": "rbf"}
        resp = client.post("/reconstruct", json=payload)
        assert resp.status_code == 400


class TestExperiments:
    def test_run_single_scenario(self, client, small_config_dict):
        resp = client.post(
            "/experiments/run",
            json={"config": small_config_dict, "seed": 5, "sigma_t": 0.0},
        )
        results = resp.json()["results"]
        assert len(results) == 4
        assert {r["method"] for r in results} == {"fixed-dictionary", "gaussian-rbf"}

    def test_run_all_scenarios(self, client, small_config_dict):
        resp = client.post("/experiments/run", json={"config": small_config_dict, "seed": 5})
        assert len(resp.json()["results"]) == 2 * 4

    def test_monte_carlo(self, client, small_config_dict):
        resp = client.post("/experiments/monte-carlo", json={"config": small_config_dict, "seed": 5})
        body = resp.json()
        assert len(body["runs"]) == 2 * 2 * 4
        assert len(body["summary"]) == 2 * 4
        assert all(s["count"] + s["failures"] == 2 for s in body["summary"])

    def test_curves(self, client, small_config_dict):
        resp = client.post("/experiments/curves", json={"config": small_config_dict, "seed": 5})
        body = resp.json()
        assert len(body["rows"]) == small_config_dict["grid"]["points"]
        assert body["columns"][0] == "x"

    def test_config_validation_is_422(self, client, small_config_dict):
        small_config_dict["kernels"] = []
        resp = client.post("/experiments/run", json={"config": small_config_dict, "seed": 1})
        assert resp.status_code == 422

    def test_missing_rho_grid_is_422(self, client, small_config_dict):
        small_config_dict["rho_grid"] = []
        resp = client.post("/experiments/run", json={"config": small_config_dict, "seed": 1})
        assert resp.status_code == 422
