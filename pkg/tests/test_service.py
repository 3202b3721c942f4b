import pytest
from fastapi.testclient import TestClient

from uwacomm import harness
from uwacomm.harness import SnrMapConfig, result_csv
from uwacomm.service.app import app

client = TestClient(app)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200
    body = r.json()
    assert body["status"] == "ok"
    assert body["version"]


def test_codec_table_get():
    r = client.get("/codec-table")
    assert r.status_code == 200
    body = r.json()
    assert body["kind"] == "codec_table"
    gens = [row[2] for row in body["rows"]]
    assert gens == ["23", "721", "2467", "77777"]


def test_snr_map_post_matches_in_process():
    r = client.post("/experiments/snr-map", json={"config": {}, "seed": 0})
    assert r.status_code == 200
    body = r.json()
    local = harness.run_snr_map(SnrMapConfig(), 0)
    assert body["csv"] == result_csv(local)
    assert body["config_hash"] == local.config_hash
    assert body["columns"] == ["distance_m", "frequency_khz", "snr_db"]


def test_ber_sweep_post_small():
    cfg = {"snr_db": [6.0], "codes": ["none"], "min_errors": 5,
           "min_bits": 1000, "max_bits": 3000}
    r = client.post("/experiments/ber-sweep", json={"config": cfg, "seed": 1})
    assert r.status_code == 200
    rows = r.json()["rows"]
    assert len(rows) == 1
    assert rows[0][2] == "none"


def test_mac_compare_post_returns_traces():
    cfg = {"protocols": ["fdma"], "n_nodes": [3],
           "offered_load_hz": [0.02], "duration_s": 120.0}
    r = client.post("/experiments/mac-compare", json={"config": cfg, "seed": 2})
    assert r.status_code == 200
    traces = r.json()["traces"]
    assert "fdma_n3" in traces
    assert traces["fdma_n3"]


def test_unknown_experiment_404():
    r = client.post("/experiments/warp-drive", json={"config": {}, "seed": 0})
    assert r.status_code == 404


def test_bad_config_422_with_prefix():
    r = client.post("/experiments/ber-sweep",
                    json={"config": {"snr_db": [999.0]}, "seed": 0})
    assert r.status_code == 422
    assert r.json()["detail"].startswith("config:")


def test_mismatched_kind_rejected():
    r = client.post("/experiments/snr-map",
                    json={"config": {"kind": "ber_sweep"}, "seed": 0})
    assert r.status_code == 422


def test_negative_seed_rejected():
    r = client.post("/experiments/snr-map", json={"config": {}, "seed": -1})
    assert r.status_code == 422


def test_plot_endpoint_round_trip():
    res = harness.run_snr_map(SnrMapConfig(), 0)
    spec = harness.DEFAULT_PLOTS["snr_map"]
    r = client.post("/plots", json={
        "csv": result_csv(res), "kind": spec.kind, "x": spec.x, "y": spec.y,
        "value": spec.value,
    })
    assert r.status_code == 200
    svg = r.json()["svg"]
    assert svg.count('class="cell"') == len(res.rows)


def test_plot_endpoint_schema_mismatch_422():
    r = client.post("/plots", json={
        "csv": "a,b\n", "kind": "line", "x": "a", "y": "b",
    })
    assert r.status_code == 422
    assert r.json()["detail"].startswith("plot:")
