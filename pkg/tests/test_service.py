"""Service endpoints, exercised in-process."""

import json
import time

import pytest
from fastapi.testclient import TestClient

from hwstrata.campaign import (
    CampaignConfig,
    report_csv,
    report_json_obj,
    run_campaign,
)
from hwstrata.service.app import _jobs, app

client = TestClient(app)


def _poll_done(job_id, deadline=120.0):
    t0 = time.monotonic()
    while time.monotonic() - t0 < deadline:
        st = client.get(f"/jobs/{job_id}").json()
        if st["status"] in ("done", "error"):
            return st
        time.sleep(0.05)
    raise AssertionError(f"job {job_id} did not finish within {deadline}s")


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


# ---------------------------------------------------------------------------
# synchronous endpoints

def test_enumerate_census():
    resp = client.post("/enumerate", json={"genus": 2, "p": 3})
    assert resp.status_code == 200
    assert resp.json() == {
        "genus": 2,
        "p": 3,
        "r": 1,
        "box_size": 18,
        "s_raw": 12,
        "distinct_curves": 11,
        "counts": [0, 2, 9],
    }


def test_enumerate_rejects_bad_configs():
    resp = client.post("/enumerate", json={"genus": 2, "p": 5})
    assert resp.status_code == 422
    assert resp.json()["detail"]["code"] == "invalid_config"
    assert client.post("/enumerate", json={"genus": 0, "p": 3}).status_code == 422
    assert client.post("/enumerate", json={"genus": 2, "p": 9}).status_code == 422


def test_prank_endpoint():
    resp = client.post("/prank", json={"p": 3, "coeffs": [1, 1, 0, 1]})
    assert resp.status_code == 200
    assert resp.json() == {"genus": 1, "p_rank": 0, "ordinary": False}
    resp = client.post("/prank", json={"p": 5, "coeffs": [1, 1, 0, 1]})
    assert resp.json() == {"genus": 1, "p_rank": 1, "ordinary": True}


def test_prank_rejects_bad_curves():
    resp = client.post("/prank", json={"p": 5, "coeffs": [0, 0, 0, 1]})
    assert resp.status_code == 422
    assert resp.json()["detail"]["code"] == "invalid_input"
    resp = client.post("/prank", json={"p": 5, "coeffs": [1, 0, 1]})
    assert resp.status_code == 422


def test_scan_endpoint():
    resp = client.post(
        "/scan-conj-1mod4", json={"genus": 3, "prime_min": 13, "prime_max": 13}
    )
    assert resp.status_code == 200
    assert resp.json() == {
        "genus": 3,
        "rows": [{"p": 13, "configs": 924, "p_rank_zero": 0, "examples": []}],
    }


def test_scan_nothing_to_do_is_404():
    resp = client.post(
        "/scan-conj-1mod4", json={"genus": 3, "prime_min": 3, "prime_max": 12}
    )
    assert resp.status_code == 404
    assert resp.json()["detail"]["code"] == "nothing_to_do"


def test_scan_invalid_range_is_422():
    resp = client.post(
        "/scan-conj-1mod4", json={"genus": 3, "prime_min": 12, "prime_max": 3}
    )
    assert resp.status_code == 422
    assert resp.json()["detail"]["code"] == "invalid_config"


# ---------------------------------------------------------------------------
# campaign jobs

CAMPAIGN = {
    "genus": 2,
    "prime_min": 3,
    "prime_max": 11,
    "sample_size": 500,
    "master_seed": 1,
}


def test_campaign_job_lifecycle():
    resp = client.post("/campaigns", json=CAMPAIGN)
    assert resp.status_code == 200
    body = resp.json()
    job_id = body["job_id"]
    assert body["status"] == "queued"

    st = _poll_done(job_id)
    assert st["status"] == "done"
    assert st["error_code"] is None
    assert st["seconds"] is not None
    # per-prime timings cover every prime in range, skipped ones included
    assert sorted(st["per_prime_seconds"]) == ["11", "3", "5", "7"]
    assert st["files"] == {}  # no out_dir requested

    reference = run_campaign(
        CampaignConfig(genus=2, prime_min=3, prime_max=11, sample_size=500, master_seed=1)
    )
    assert client.get(f"/jobs/{job_id}/report").json() == report_json_obj(reference)
    assert client.get(f"/jobs/{job_id}/report.csv").text == report_csv(reference)

    fig = client.get(f"/jobs/{job_id}/figure/nonordinary")
    assert fig.status_code == 200
    assert fig.json()["header"] == ["p", "M"]
    assert fig.json()["rows"][0] == ["3", "0.545454545"]


def test_campaign_job_writes_files_when_asked(tmp_path):
    out = str(tmp_path / "svc")
    resp = client.post("/campaigns", json=dict(CAMPAIGN, out_dir=out))
    job_id = resp.json()["job_id"]
    st = _poll_done(job_id)
    assert st["status"] == "done"
    assert set(st["files"]) == {"csv", "json", "log"}
    log = json.loads((tmp_path / "svc" / "run_log.json").read_text())
    assert set(log) == {"per_prime_seconds", "total_seconds"}
    assert (tmp_path / "svc" / "report.csv").exists()


def test_campaign_validation_is_synchronous():
    resp = client.post("/campaigns", json=dict(CAMPAIGN, genus=0))
    assert resp.status_code == 422
    assert resp.json()["detail"]["code"] == "invalid_config"
    resp = client.post("/campaigns", json=dict(CAMPAIGN, method="census"))
    assert resp.status_code == 422


def test_campaign_nothing_to_do_becomes_job_error():
    resp = client.post(
        "/campaigns", json={"genus": 3, "prime_min": 7, "prime_max": 7}
    )
    job_id = resp.json()["job_id"]
    st = _poll_done(job_id)
    assert st["status"] == "error"
    assert st["error_code"] == "nothing_to_do"
    # an errored job has no report to serve
    assert client.get(f"/jobs/{job_id}/report").status_code == 409


def test_unknown_job_is_404():
    assert client.get("/jobs/feedfacecafe").status_code == 404
    assert client.get("/jobs/feedfacecafe/report").status_code == 404
    assert client.get("/jobs/feedfacecafe/report.csv").status_code == 404


def test_report_before_done_is_409():
    # inject a running record directly so the check is race-free
    _jobs["testrunning0"] = {
        "status": "running",
        "error_code": None,
        "message": None,
        "seconds": None,
        "per_prime_seconds": {},
        "files": {},
        "report": None,
    }
    try:
        resp = client.get("/jobs/testrunning0/report")
        assert resp.status_code == 409
        assert client.get("/jobs/testrunning0/report.csv").status_code == 409
        assert client.get("/jobs/testrunning0/figure/prank0").status_code == 409
    finally:
        del _jobs["testrunning0"]


def test_figure_missing_data_is_422():
    resp = client.post("/campaigns", json=dict(CAMPAIGN, f_thresholds=[1]))
    job_id = resp.json()["job_id"]
    st = _poll_done(job_id)
    assert st["status"] == "done"
    fig = client.get(f"/jobs/{job_id}/figure/prank0")
    assert fig.status_code == 422
    assert fig.json()["detail"]["code"] == "missing_data"
    assert client.get(f"/jobs/{job_id}/figure/waterfall").status_code == 422
