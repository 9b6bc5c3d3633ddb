import numpy as np
import pytest
from fastapi.testclient import TestClient

from gosim.proteinsim import ScoreMatrix
from gosim.service import create_app

from conftest import DATA, T


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


@pytest.fixture(scope="module")
def ws_dir(client, tmp_path_factory):
    out = tmp_path_factory.mktemp("ws")
    response = client.post("/workspaces/build", json={
        "obo": str(DATA / "toy.obo"),
        "gaf": str(DATA / "toy.gaf"),
        "out_dir": str(out),
    })
    assert response.status_code == 200, response.text
    return out


def _save_matrix(path, genes, fn, namespace="biological_process"):
    n = len(genes)
    vals = np.empty(n * (n + 1) // 2)
    k = 0
    for i in range(n):
        for j in range(i, n):
            vals[k] = fn(genes[i], genes[j])
            k += 1
    ScoreMatrix(tuple(genes), vals, "lin", "maximum", namespace).save(path)
    return path


class TestBuildAndQuery:
    def test_healthz(self, client):
        data = client.get("/healthz").json()
        assert data["status"] == "ok"

    def test_build_reports_counts(self, client, ws_dir, tmp_path_factory):
        out = tmp_path_factory.mktemp("ws2")
        response = client.post("/workspaces/build", json={
            "obo": str(DATA / "toy.obo"),
            "gaf": str(DATA / "toy.gaf"),
            "out_dir": str(out),
        })
        data = response.json()
        assert data["namespaces"]["biological_process"]["genes"] == 8
        assert data["namespaces"]["biological_process"]["terms"] == 6
        assert len(data["fingerprint"]) == 64

    def test_termsim_single(self, client, ws_dir):
        response = client.post("/termsim", json={
            "workspace": str(ws_dir),
            "measure": "lin",
            "pairs": [{"term1": T["C"], "term2": T["D"]}],
        })
        assert response.status_code == 200
        row = response.json()["rows"][0]
        assert row["value"] == pytest.approx(0.452997284921517, abs=1e-12)
        assert row["namespace"] == "biological_process"

    def test_termsim_alias_and_cross_namespace(self, client, ws_dir):
        ok = client.post("/termsim", json={
            "workspace": str(ws_dir),
            "measure": "lin",
            "pairs": [{"term1": "TOY:0000016", "term2": T["C"]}],
        })
        assert ok.status_code == 200
        bad = client.post("/termsim", json={
            "workspace": str(ws_dir),
            "measure": "lin",
            "pairs": [{"term1": T["C"], "term2": "TOY:0000102"}],
        })
        assert bad.status_code == 400
        error = bad.json()["error"]
        assert error["kind"] == "data"
        assert error["type"] == "DifferentNamespace"

    def test_protsim(self, client, ws_dir):
        response = client.post("/protsim", json={
            "workspace": str(ws_dir),
            "namespace": "BP",
            "measure": "lin",
            "strategy": "bma",
            "pairs": [{"gene1": "g1", "gene2": "g3"}],
        })
        assert response.status_code == 200
        data = response.json()
        assert data["strategy"] == "best_match_average"
        assert data["rows"][0]["value"] == pytest.approx(0.452997284921517)

    def test_matrix_and_stats(self, client, ws_dir, tmp_path):
        out = tmp_path / "bp.mat"
        response = client.post("/matrix", json={
            "workspace": str(ws_dir),
            "namespace": "BP",
            "measure": "lin",
            "strategy": "bma",
            "out": str(out),
            "workers": 2,
        })
        assert response.status_code == 200
        data = response.json()
        assert data["genes"] == 8
        assert out.is_file()
        assert data["stats"]["memo_misses"] == 10

    def test_workspace_cache_reused(self, client, ws_dir):
        app = client.app
        before = len(app.state.workspaces)
        for _ in range(3):
            client.post("/termsim", json={
                "workspace": str(ws_dir),
                "measure": "lin",
                "pairs": [{"term1": T["C"], "term2": T["D"]}],
            })
        assert len(app.state.workspaces) == before


class TestErrorMapping:
    def test_validation_kind(self, client, ws_dir):
        response = client.post("/termsim", json={
            "workspace": str(ws_dir),
            "measure": "nonsense",
            "pairs": [{"term1": T["C"], "term2": T["D"]}],
        })
        assert response.status_code == 400
        assert response.json()["error"]["kind"] == "validation"

    def test_data_kind(self, client, ws_dir):
        response = client.post("/termsim", json={
            "workspace": str(ws_dir),
            "measure": "lin",
            "pairs": [{"term1": "TOY:9999999", "term2": T["D"]}],
        })
        assert response.status_code == 400
        assert response.json()["error"]["kind"] == "data"

    def test_missing_workspace(self, client, tmp_path):
        response = client.post("/termsim", json={
            "workspace": str(tmp_path / "nowhere"),
            "measure": "lin",
            "pairs": [{"term1": T["C"], "term2": T["D"]}],
        })
        assert response.status_code == 400
        assert response.json()["error"]["type"] == "MissingArtifact"

    def test_request_schema_violation(self, client):
        response = client.post("/termsim", json={"measure": "lin"})
        assert response.status_code == 422

    def test_empty_pair_list(self, client, ws_dir):
        response = client.post("/termsim", json={
            "workspace": str(ws_dir), "measure": "lin", "pairs": [],
        })
        assert response.status_code == 400
        assert response.json()["error"]["kind"] == "validation"


@pytest.fixture(scope="module")
def matrices(tmp_path_factory):
    root = tmp_path_factory.mktemp("mat")
    genes = tuple(f"g{i:02d}" for i in range(12))
    rng = np.random.default_rng(8)
    table = {}

    def fn(a, b):
        key = (a, b) if a <= b else (b, a)
        if key not in table:
            table[key] = 1.0 if a == b else float(rng.uniform(0.05, 1.0))
        return table[key]

    bp = _save_matrix(root / "bp.mat", genes, fn)
    cc = _save_matrix(root / "cc.mat", genes, fn,
                      namespace="cellular_component")
    pos = root / "pos.tsv"
    pos.write_text("g00\tg01\ng02\tg03\ng04\tg05\n")
    return {"bp": bp, "cc": cc, "pos": pos, "genes": genes}


class TestAnalysisEndpoints:
    def test_zscore_nan_becomes_null(self, client, matrices):
        response = client.post("/zscore", json={
            "positives": str(matrices["pos"]),
            "bp": str(matrices["bp"]),
            "cc": str(matrices["cc"]),
            "n_samples": 40,
        })
        assert response.status_code == 200
        data = response.json()
        assert data["sample_size"] == 3
        cells = [v for row in data["z"] for v in row]
        assert any(v is None for v in cells)
        assert all(v is None or isinstance(v, float) for v in cells)

    def test_roc(self, client, matrices):
        response = client.post("/roc", json={
            "positives": str(matrices["pos"]),
            "bp": str(matrices["bp"]),
            "cc": str(matrices["cc"]),
            "repeats": 5,
        })
        assert response.status_code == 200
        data = response.json()
        assert len(data["aucs"]) == 5
        assert 0.0 <= data["auc_mean"] <= 1.0

    def test_predict_and_hist(self, client, matrices, tmp_path):
        response = client.post("/predict", json={
            "bp": str(matrices["bp"]),
            "cc": str(matrices["cc"]),
            "bp_min": 0.5,
            "cc_min": 0.5,
        })
        assert response.status_code == 200
        assert response.json()["shared_genes"] == 12

        out = tmp_path / "h.tsv"
        response = client.post("/hist", json={
            "matrices": [str(matrices["bp"]), str(matrices["cc"])],
            "scheme": "bins10_unit",
            "out": str(out),
        })
        assert response.status_code == 200
        data = response.json()
        assert set(data["histograms"]) == {"biological_process",
                                           "cellular_component"}
        assert len(data["chi"]) == 1
        assert out.is_file()
        first = out.read_text().splitlines()[0]
        assert first.startswith("# ")
