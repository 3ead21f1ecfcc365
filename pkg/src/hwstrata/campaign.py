"""Campaign driver: stratum surveys over prime ranges, with file reports.

A campaign fixes (genus, r, method, sample size) and walks a prime range.
Primes the method cannot serve are skipped with a machine-readable reason
rather than failing the run.  Reports are written twice: a flat CSV for
plotting and a JSON document carrying the same numbers plus exact
fractions.  Both are byte-deterministic functions of (config, seed) — wall
clock and thread scheduling never leak into them; timings go to a separate
run_log.json sidecar.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .batch import FieldOps
from .errors import (
    FieldTooSmall,
    InvalidInput,
    InvalidRange,
    MissingData,
    NothingToDo,
)
from .family import family_box_size
from .fields import field_create
from .galois import enumerate_split
from .stats import StratumTally, m_value, render_decimal, summarize

__all__ = [
    "CampaignConfig",
    "PrimeOutcome",
    "CampaignReport",
    "primes_in_range",
    "default_thresholds",
    "run_campaign",
    "write_report_files",
    "emit_figure_data",
    "scan_split_prank0",
    "scan_conj_1mod4",
    "FIGURE_KINDS",
]

SCHEMA_VERSION = 1

SKIP_DIVIDES = "p_divides_2g_plus_1"
SKIP_SMALL_FIELD = "field_too_small_for_split_configs"

FIGURE_KINDS = ("nonordinary", "codim2", "prank0")


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Odd primes in [lo, hi]; requires 3 ≤ lo ≤ hi (an empty hit is fine)."""
    if lo > hi:
        raise InvalidRange(f"empty range: {lo} > {hi}")
    if lo < 3:
        raise InvalidRange(f"odd primes only: lower bound {lo} < 3")
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for n in range(2, int(hi**0.5) + 1):
        if sieve[n]:
            sieve[n * n :: n] = b"\x00" * len(sieve[n * n :: n])
    return [n for n in range(lo, hi + 1) if sieve[n]]


def default_thresholds(g: int) -> tuple[int, ...]:
    """Corank thresholds reported by default: g−1, g−2 and 0, where valid."""
    seen = []
    for f in (g - 1, g - 2, 0):
        if 0 <= f <= g and f not in seen:
            seen.append(f)
    return tuple(seen)


@dataclass(frozen=True)
class CampaignConfig:
    """Everything a campaign run depends on (output paths aside)."""

    genus: int
    prime_min: int
    prime_max: int
    r: int = 1
    method: str = "family"
    sample_size: int = 100_000
    f_thresholds: tuple[int, ...] | None = None
    master_seed: int = 0
    batch_size: int = 1 << 16
    worker_count: int = 1

    def thresholds(self) -> tuple[int, ...]:
        if self.f_thresholds is None:
            return default_thresholds(self.genus)
        return self.f_thresholds

    def validate(self) -> None:
        if self.genus < 1:
            raise InvalidInput(f"genus {self.genus} < 1")
        if self.method not in ("family", "galois"):
            raise InvalidInput(f"unknown method {self.method!r}")
        if self.method == "galois" and self.genus < 2:
            raise InvalidInput("the split-configuration method needs genus ≥ 2")
        if self.r < 1:
            raise InvalidInput(f"extension degree {self.r} < 1")
        if self.sample_size < 1:
            raise InvalidInput(f"sample size {self.sample_size} < 1")
        if self.batch_size < 1:
            raise InvalidInput(f"batch size {self.batch_size} < 1")
        if self.worker_count < 1:
            raise InvalidInput(f"worker count {self.worker_count} < 1")
        for f in self.thresholds():
            if not 0 <= f <= self.genus:
                raise InvalidInput(
                    f"threshold {f} outside [0, {self.genus}]"
                )
        primes_in_range(self.prime_min, self.prime_max)  # range sanity


@dataclass(frozen=True)
class PrimeOutcome:
    """One prime's worth of campaign output (or its skip reason)."""

    p: int
    skipped: str | None = None
    s_raw: int = 0
    tally: StratumTally | None = None
    m_values: dict = field(default_factory=dict)  # f -> Fraction
    anomalous_r1: bool = False
    exhaustive: bool = False


@dataclass(frozen=True)
class CampaignReport:
    config: CampaignConfig
    outcomes: tuple  # PrimeOutcome, ascending p
    summaries: dict  # f -> SummaryStats over primes with data


def _sample_stream(cfg: CampaignConfig, ops: FieldOps, p: int) -> np.ndarray:
    """Exactly sample_size squarefree family draws, in canonical order.

    Batch b uses its own generator seeded by (master_seed, p, b); within a
    batch, alpha encodings are drawn first, then the low-coefficient block.
    The accepted prefix is a pure function of the seed, so thread scheduling
    can never reorder it.
    """
    g = cfg.genus
    accepted = []
    have = 0
    for b in itertools.count():
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([cfg.master_seed, p, b]))
        )
        alphas = rng.integers(1, ops.q, size=cfg.batch_size, dtype=np.int64)
        lows = rng.integers(
            0, ops.q, size=(cfg.batch_size, 2 * g - 2), dtype=np.int64
        )
        fs = ops.assemble_family(alphas, lows, g)
        good = fs[ops.squarefree_mask(fs)]
        accepted.append(good)
        have += good.shape[0]
        if have >= cfg.sample_size:
            break
    return np.concatenate(accepted, axis=0)[: cfg.sample_size]


def _family_outcome(cfg: CampaignConfig, p: int) -> PrimeOutcome:
    g = cfg.genus
    if (2 * g + 1) % p == 0:
        return PrimeOutcome(p=p, skipped=SKIP_DIVIDES)
    ctx = field_create(p, cfg.r)
    ops = FieldOps(ctx)
    box = family_box_size(g, ctx.q)
    exhaustive = box <= cfg.sample_size
    if exhaustive:
        s_raw = 0
        keyblocks = []
        for block in ops.family_box_blocks(g):
            good = block[ops.squarefree_mask(block)]
            s_raw += good.shape[0]
            if good.shape[0]:
                keyblocks.append(ops.canonical_keys(good, g))
        keys = np.concatenate(keyblocks, axis=0)
    else:
        fs = _sample_stream(cfg, ops, p)
        s_raw = fs.shape[0]
        keys = ops.canonical_keys(fs, g)
    distinct = ops.dedup_rows(keys)
    ranks = ops.p_rank_batch(ops.decode(distinct), g)
    counts = np.bincount(ranks, minlength=g + 1)
    t = StratumTally(
        g, p, cfg.r, "family", int(counts.sum()), tuple(int(c) for c in counts)
    )
    m_values = {f: m_value(t, f).M for f in cfg.thresholds()}
    return PrimeOutcome(
        p=p,
        s_raw=s_raw,
        tally=t,
        m_values=m_values,
        exhaustive=exhaustive,
    )


def _galois_outcome(cfg: CampaignConfig, p: int) -> PrimeOutcome:
    g = cfg.genus
    ctx = field_create(p, cfg.r)
    anomalous = cfg.r == 1
    if ctx.q <= 2 * g + 1:
        return PrimeOutcome(
            p=p, skipped=SKIP_SMALL_FIELD, anomalous_r1=anomalous
        )
    try:
        models = enumerate_split(g, ctx, s=cfg.sample_size)
    except FieldTooSmall:
        return PrimeOutcome(
            p=p, skipped=SKIP_SMALL_FIELD, anomalous_r1=anomalous
        )
    ops = FieldOps(ctx)
    if models:
        encs = np.zeros((len(models), 2 * g + 2), dtype=np.int64)
        for i, f in enumerate(models):
            row = f.encodings()
            encs[i, : len(row)] = row
        ranks = ops.p_rank_batch(ops.decode(encs), g)
        counts = np.bincount(ranks, minlength=g + 1)
    else:
        counts = np.zeros(g + 1, dtype=np.int64)
    t = StratumTally(
        g, p, cfg.r, "galois", int(counts.sum()), tuple(int(c) for c in counts)
    )
    m_values = (
        {f: m_value(t, f).M for f in cfg.thresholds()} if t.s else {}
    )
    return PrimeOutcome(
        p=p,
        s_raw=t.s,
        tally=t,
        m_values=m_values,
        anomalous_r1=anomalous,
    )


def run_campaign(cfg: CampaignConfig, log=None) -> CampaignReport:
    """Survey every admissible prime in range; raise NothingToDo if none.

    `log`, when given, is called with (p, seconds) after each prime — it
    feeds the sidecar log and never touches the deterministic report.
    """
    cfg.validate()
    primes = primes_in_range(cfg.prime_min, cfg.prime_max)
    if not primes:
        raise NothingToDo(
            f"no odd primes in [{cfg.prime_min}, {cfg.prime_max}]"
        )
    worker = _family_outcome if cfg.method == "family" else _galois_outcome

    def timed(p: int) -> PrimeOutcome:
        t0 = time.perf_counter()
        out = worker(cfg, p)
        if log is not None:
            log(p, time.perf_counter() - t0)
        return out

    if cfg.worker_count > 1 and len(primes) > 1:
        with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
            outcomes = list(pool.map(timed, primes))
    else:
        outcomes = [timed(p) for p in primes]
    outcomes.sort(key=lambda o: o.p)
    if all(o.skipped for o in outcomes):
        raise NothingToDo("every prime in range was skipped")
    summaries = {}
    for f in cfg.thresholds():
        rows = [o.m_values[f] for o in outcomes if f in o.m_values]
        if rows:
            summaries[f] = summarize(rows)
    return CampaignReport(cfg, tuple(outcomes), summaries)


# ---------------------------------------------------------------------------
# report serialization

def _csv_header(g: int) -> str:
    cs = ",".join(f"c{k}" for k in range(g + 1))
    return f"method,g,p,r,s_raw,s_distinct,{cs},M_f_gm1,M_f_gm2,M_f_0"


def _m_cell(o: PrimeOutcome, f: int, g: int) -> str:
    if not 0 <= f <= g or f not in o.m_values:
        return ""
    return render_decimal(o.m_values[f])


def report_csv(report: CampaignReport) -> str:
    """The flat table; skipped primes appear only in the JSON report."""
    cfg = report.config
    g = cfg.genus
    lines = [_csv_header(g)]
    for o in report.outcomes:
        if o.skipped:
            continue
        t = o.tally
        cells = [
            cfg.method,
            str(g),
            str(o.p),
            str(cfg.r),
            str(o.s_raw),
            str(t.s),
        ]
        cells += [str(c) for c in t.counts]
        cells += [_m_cell(o, g - 1, g), _m_cell(o, g - 2, g), _m_cell(o, 0, g)]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _frac_obj(x: Fraction) -> dict:
    return {"decimal": render_decimal(x), "fraction": f"{x.numerator}/{x.denominator}"}


def report_json_obj(report: CampaignReport) -> dict:
    cfg = report.config
    primes = []
    skipped = []
    for o in report.outcomes:
        if o.skipped:
            skipped.append({"p": o.p, "reason": o.skipped})
            continue
        entry = {
            "method": cfg.method,
            "g": cfg.genus,
            "p": o.p,
            "r": cfg.r,
            "s_raw": o.s_raw,
            "s_distinct": o.tally.s,
            "counts": list(o.tally.counts),
            "m_values": {
                str(f): _frac_obj(v) for f, v in sorted(o.m_values.items())
            },
            "exhaustive": o.exhaustive,
        }
        if cfg.method == "galois":
            entry["anomalous_r1"] = o.anomalous_r1
        primes.append(entry)
    summaries = {}
    for f, s in sorted(report.summaries.items()):
        summaries[str(f)] = {
            "median": _frac_obj(s.median),
            "mean": _frac_obj(s.mean),
            "min": _frac_obj(s.min),
            "max": _frac_obj(s.max),
            "std_dev": s.std_dev,
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "genus": cfg.genus,
            "prime_min": cfg.prime_min,
            "prime_max": cfg.prime_max,
            "r": cfg.r,
            "method": cfg.method,
            "sample_size": cfg.sample_size,
            "f_thresholds": list(cfg.thresholds()),
            "master_seed": cfg.master_seed,
            "batch_size": cfg.batch_size,
        },
        "primes": primes,
        "skipped": skipped,
        "summary": summaries,
    }


def write_report_files(report: CampaignReport, out_dir, timings=None) -> dict:
    """Write report.csv / report.json (+ run_log.json); return file paths.

    Everything except run_log.json is a pure function of (config, seed).
    OS-level failures surface as OSError for the caller to map.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "report.csv"
    json_path = out / "report.json"
    csv_path.write_text(report_csv(report), encoding="utf-8")
    json_path.write_text(
        json.dumps(report_json_obj(report), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    paths = {"csv": str(csv_path), "json": str(json_path)}
    if timings is not None:
        log_path = out / "run_log.json"
        log_path.write_text(
            json.dumps(timings, indent=2) + "\n", encoding="utf-8"
        )
        paths["log"] = str(log_path)
    return paths


# ---------------------------------------------------------------------------
# figure extraction

def emit_figure_data(report_obj: dict, kind: str) -> tuple[list[str], list[list[str]]]:
    """Rows for one figure family, from a parsed report.json object.

    nonordinary → (p, M) at f = g−1;  codim2 → (p, M) at f = g−2;
    prank0 → (method, p, M) at f = 0.
    """
    if kind not in FIGURE_KINDS:
        raise InvalidInput(f"unknown figure kind {kind!r}")
    g = report_obj["config"]["genus"]
    f = {"nonordinary": g - 1, "codim2": g - 2, "prank0": 0}[kind]
    if f not in report_obj["config"]["f_thresholds"] or f < 0:
        raise MissingData(
            f"threshold f={f} was not recorded by this campaign"
        )
    rows = []
    for entry in report_obj["primes"]:
        m = entry["m_values"].get(str(f))
        if m is None:
            continue
        if kind == "prank0":
            rows.append([entry["method"], str(entry["p"]), m["decimal"]])
        else:
            rows.append([str(entry["p"]), m["decimal"]])
    if not rows:
        raise MissingData(f"no primes carry data at threshold f={f}")
    header = ["method", "p", "M"] if kind == "prank0" else ["p", "M"]
    return header, rows


# ---------------------------------------------------------------------------
# fully-split p-rank scan (conjecture mode)

def scan_split_prank0(
    g: int, p: int, chunk: int = 1 << 17
) -> tuple[int, int, list[tuple[int, ...]]]:
    """Exhaust all {∞,0,a₃..a_(2g+2)} configurations over GF(p).

    Returns (configs_scanned, p_rank_zero_count, example_root_sets) — the
    examples list holds at most 16 offending root sets, which the scanned
    conjecture says should never appear for p ≡ 1 mod 4.
    """
    if p <= 2 * g + 1:
        raise FieldTooSmall(f"p = {p} ≤ 2g+1 = {2 * g + 1}")
    ctx = field_create(p, 1)
    ops = FieldOps(ctx)
    combos = itertools.combinations(range(1, p), 2 * g)
    scanned = 0
    zeros = 0
    examples: list[tuple[int, ...]] = []
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        roots = np.array(block, dtype=np.int64)
        fs = ops.split_poly_rows(roots)
        ranks = ops.p_rank_batch(fs, g)
        hits = np.nonzero(ranks == 0)[0]
        zeros += hits.size
        for i in hits[: max(0, 16 - len(examples))]:
            examples.append(tuple(int(x) for x in roots[i]))
        scanned += roots.shape[0]
    return scanned, zeros, examples


def scan_conj_1mod4(g: int, prime_min: int, prime_max: int) -> list[dict]:
    """Run the p-rank-0 scan at every usable prime ≡ 1 (mod 4) in range."""
    rows = []
    for p in primes_in_range(prime_min, prime_max):
        if p % 4 != 1 or p <= 2 * g + 1:
            continue
        scanned, zeros, examples = scan_split_prank0(g, p)
        rows.append(
            {
                "p": p,
                "configs": scanned,
                "p_rank_zero": zeros,
                "examples": [list(e) for e in examples],
            }
        )
    if not rows:
        raise NothingToDo(
            f"no primes ≡ 1 (mod 4) above 2g+1 in [{prime_min}, {prime_max}]"
        )
    return rows
