"""HTTP face of the package: campaigns as jobs, small queries inline.

Campaign runs can take minutes, so POST /campaigns just registers a job and
a worker thread; everything else answers synchronously.  The registry is
in-memory — restarting the server forgets finished jobs, which is fine for
the single-user survey workflows this serves.
"""

import threading
import time
import uuid

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from .. import campaign as camp
from ..batch import FieldOps
from ..errors import HwstrataError, InvalidInput, InvalidRange, NothingToDo
from ..family import family_box_size
from ..fields import field_create
from ..hassewitt import CurveModel, p_rank
from ..polys import Poly
from .schemas import (
    CampaignRequest,
    EnumerateRequest,
    EnumerateResponse,
    FigureResponse,
    JobCreated,
    JobStatus,
    PrankRequest,
    PrankResponse,
    ScanRequest,
    ScanResponse,
    ScanRow,
)

app = FastAPI(title="hwstrata survey service")

_jobs: dict[str, dict] = {}
_jobs_lock = threading.Lock()


def _bad_request(code: str, message: str) -> HTTPException:
    return HTTPException(status_code=422, detail={"code": code, "message": message})


def _run_job(job_id: str, cfg: camp.CampaignConfig, out_dir: str | None):
    rec = _jobs[job_id]
    rec["status"] = "running"
    t0 = time.perf_counter()

    def log(p, secs):
        rec["per_prime_seconds"][str(p)] = round(secs, 3)

    try:
        report = camp.run_campaign(cfg, log=log)
        rec["report"] = report
        if out_dir:
            timings = {
                "per_prime_seconds": rec["per_prime_seconds"],
                "total_seconds": round(time.perf_counter() - t0, 3),
            }
            rec["files"] = camp.write_report_files(report, out_dir, timings)
        rec["status"] = "done"
    except NothingToDo as e:
        rec["status"] = "error"
        rec["error_code"] = "nothing_to_do"
        rec["message"] = str(e)
    except (InvalidInput, InvalidRange) as e:
        rec["status"] = "error"
        rec["error_code"] = "invalid_config"
        rec["message"] = str(e)
    except OSError as e:
        rec["status"] = "error"
        rec["error_code"] = "io_error"
        rec["message"] = str(e)
    except HwstrataError as e:
        rec["status"] = "error"
        rec["error_code"] = "failed"
        rec["message"] = str(e)
    finally:
        rec["seconds"] = round(time.perf_counter() - t0, 3)


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/campaigns", response_model=JobCreated)
def create_campaign(req: CampaignRequest):
    cfg = camp.CampaignConfig(
        genus=req.genus,
        prime_min=req.prime_min,
        prime_max=req.prime_max,
        r=req.r,
        method=req.method,
        sample_size=req.sample_size,
        f_thresholds=tuple(req.f_thresholds) if req.f_thresholds else None,
        master_seed=req.master_seed,
        batch_size=req.batch_size,
        worker_count=req.worker_count,
    )
    try:
        cfg.validate()
    except (InvalidInput, InvalidRange) as e:
        raise _bad_request("invalid_config", str(e))
    job_id = uuid.uuid4().hex[:12]
    rec = {
        "status": "queued",
        "error_code": None,
        "message": None,
        "seconds": None,
        "per_prime_seconds": {},
        "files": {},
        "report": None,
    }
    with _jobs_lock:
        _jobs[job_id] = rec
    t = threading.Thread(
        target=_run_job, args=(job_id, cfg, req.out_dir), daemon=True
    )
    t.start()
    return JobCreated(job_id=job_id, status="queued")


def _get_job(job_id: str) -> dict:
    rec = _jobs.get(job_id)
    if rec is None:
        raise HTTPException(status_code=404, detail="no such job")
    return rec


@app.get("/jobs/{job_id}", response_model=JobStatus)
def job_status(job_id: str):
    rec = _get_job(job_id)
    return JobStatus(
        job_id=job_id,
        status=rec["status"],
        error_code=rec["error_code"],
        message=rec["message"],
        seconds=rec["seconds"],
        per_prime_seconds=rec["per_prime_seconds"],
        files=rec["files"],
    )


def _finished_report(job_id: str) -> camp.CampaignReport:
    rec = _get_job(job_id)
    if rec["status"] != "done":
        raise HTTPException(
            status_code=409, detail=f"job is {rec['status']}, not done"
        )
    return rec["report"]


@app.get("/jobs/{job_id}/report")
def job_report(job_id: str):
    return camp.report_json_obj(_finished_report(job_id))


@app.get("/jobs/{job_id}/report.csv", response_class=PlainTextResponse)
def job_report_csv(job_id: str):
    return camp.report_csv(_finished_report(job_id))


@app.get("/jobs/{job_id}/figure/{kind}", response_model=FigureResponse)
def job_figure(job_id: str, kind: str):
    obj = camp.report_json_obj(_finished_report(job_id))
    try:
        header, rows = camp.emit_figure_data(obj, kind)
    except HwstrataError as e:
        raise _bad_request("missing_data", str(e))
    return FigureResponse(kind=kind, header=header, rows=rows)


@app.post("/enumerate", response_model=EnumerateResponse)
def enumerate_family_census(req: EnumerateRequest):
    g = req.genus
    try:
        if g < 1:
            raise InvalidInput(f"genus {g} < 1")
        if (2 * g + 1) % req.p == 0:
            raise InvalidInput(
                f"p = {req.p} divides 2g+1 = {2 * g + 1}: family unavailable"
            )
        ctx = field_create(req.p, req.r)
    except HwstrataError as e:
        raise _bad_request("invalid_config", str(e))
    ops = FieldOps(ctx)
    s_raw = 0
    blocks = []
    for block in ops.family_box_blocks(g):
        good = block[ops.squarefree_mask(block)]
        s_raw += good.shape[0]
        if good.shape[0]:
            blocks.append(ops.canonical_keys(good, g))
    keys = ops.dedup_rows(np.concatenate(blocks, axis=0))
    ranks = ops.p_rank_batch(ops.decode(keys), g)
    counts = np.bincount(ranks, minlength=g + 1)
    return EnumerateResponse(
        genus=g,
        p=req.p,
        r=req.r,
        box_size=family_box_size(g, ctx.q),
        s_raw=s_raw,
        distinct_curves=int(keys.shape[0]),
        counts=[int(c) for c in counts],
    )


@app.post("/prank", response_model=PrankResponse)
def prank(req: PrankRequest):
    try:
        ctx = field_create(req.p, req.r)
        f = Poly.from_encodings(req.coeffs, ctx)
        curve = CurveModel.make(f)
        pr = p_rank(curve)
    except HwstrataError as e:
        raise _bad_request("invalid_input", str(e))
    return PrankResponse(
        genus=curve.genus, p_rank=pr.value, ordinary=pr.ordinary
    )


@app.post("/scan-conj-1mod4", response_model=ScanResponse)
def scan(req: ScanRequest):
    try:
        rows = camp.scan_conj_1mod4(req.genus, req.prime_min, req.prime_max)
    except NothingToDo as e:
        raise HTTPException(
            status_code=404, detail={"code": "nothing_to_do", "message": str(e)}
        )
    except (InvalidInput, InvalidRange) as e:
        raise _bad_request("invalid_config", str(e))
    return ScanResponse(genus=req.genus, rows=[ScanRow(**row) for row in rows])
