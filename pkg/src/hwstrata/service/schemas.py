from typing import Optional

from pydantic import BaseModel

# Request/response bodies for the survey service.  Field names follow the
# CLI flags one-to-one so the thin client can pass parsed args straight in.


class CampaignRequest(BaseModel):
    genus: int
    prime_min: int
    prime_max: int
    r: int = 1
    method: str = "family"
    sample_size: int = 100_000
    f_thresholds: Optional[list[int]] = None
    master_seed: int = 0
    batch_size: int = 1 << 16
    worker_count: int = 1
    out_dir: Optional[str] = None  # server-side; leave unset to fetch instead


class JobCreated(BaseModel):
    job_id: str
    status: str


class JobStatus(BaseModel):
    job_id: str
    status: str  # queued | running | done | error
    error_code: Optional[str] = None
    message: Optional[str] = None
    seconds: Optional[float] = None
    per_prime_seconds: dict[str, float] = {}
    files: dict[str, str] = {}


class EnumerateRequest(BaseModel):
    genus: int
    p: int
    r: int = 1


class EnumerateResponse(BaseModel):
    genus: int
    p: int
    r: int
    box_size: int
    s_raw: int  # squarefree vectors inspected
    distinct_curves: int
    counts: list[int]  # by p-rank, ascending


class PrankRequest(BaseModel):
    p: int
    r: int = 1
    coeffs: list[int]  # encodings, constant term first


class PrankResponse(BaseModel):
    genus: int
    p_rank: int
    ordinary: bool


class ScanRequest(BaseModel):
    genus: int
    prime_min: int
    prime_max: int


class ScanRow(BaseModel):
    p: int
    configs: int
    p_rank_zero: int
    examples: list[list[int]]


class ScanResponse(BaseModel):
    genus: int
    rows: list[ScanRow]


class FigureResponse(BaseModel):
    kind: str
    header: list[str]
    rows: list[list[str]]
