"""Command-line client for the survey service.

Every subcommand speaks to the HTTP service: a remote one when --url is
given, otherwise an in-process instance of the same app, so single-machine
use needs no running server.  Campaign settings may come from a key=value
config file (--config); explicit flags always win.

Exit codes: 0 success, 2 nothing to do, 3 I/O or connection failure,
4 invalid configuration.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_NOTHING = 2
EXIT_IO = 3
EXIT_CONFIG = 4


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _client(url: str | None):
    if url:
        return httpx.Client(base_url=url, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*httpx2.*")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _detail_code(resp) -> str:
    try:
        detail = resp.json().get("detail")
    except ValueError:
        return ""
    if isinstance(detail, dict):
        return detail.get("code", "")
    return ""


def _detail_message(resp) -> str:
    try:
        detail = resp.json().get("detail")
    except ValueError:
        return resp.text
    if isinstance(detail, dict):
        return detail.get("message", str(detail))
    return str(detail)


_CODE_EXITS = {
    "invalid_config": EXIT_CONFIG,
    "invalid_input": EXIT_CONFIG,
    "missing_data": EXIT_CONFIG,
    "nothing_to_do": EXIT_NOTHING,
    "io_error": EXIT_IO,
}


def _raise_for_error(resp):
    if resp.status_code < 400:
        return
    code = _detail_code(resp)
    raise CliFailure(
        _CODE_EXITS.get(code, 1),
        f"service error ({resp.status_code}): {_detail_message(resp)}",
    )


def parse_primes(text: str) -> tuple[int, int]:
    """'5:1000' → (5, 1000); a single number means a one-prime range."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            v = int(parts[0])
            return v, v
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise CliFailure(EXIT_CONFIG, f"bad --primes value {text!r}; use LO:HI")


def load_config_file(path: str) -> dict:
    """key = value lines; '#' starts a comment; unknown keys are an error."""
    known = {
        "genus", "primes", "ext", "method", "samples", "seed", "out",
        "thresholds", "batch_size", "workers", "url",
    }
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise CliFailure(EXIT_IO, f"cannot read config file: {e}")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliFailure(
                EXIT_CONFIG, f"{path}:{lineno}: expected key = value"
            )
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise CliFailure(EXIT_CONFIG, f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def _merged(args, filecfg: dict, key: str, default, cast):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in filecfg:
        try:
            return cast(filecfg[key])
        except (ValueError, CliFailure):
            raise CliFailure(
                EXIT_CONFIG, f"config file: bad value for {key}: {filecfg[key]!r}"
            )
    return default


def _poll_job(client, job_id: str, interval: float) -> dict:
    while True:
        resp = client.get(f"/jobs/{job_id}")
        _raise_for_error(resp)
        status = resp.json()
        if status["status"] in ("done", "error"):
            return status
        time.sleep(interval)


def cmd_campaign(args) -> int:
    filecfg = load_config_file(args.config) if args.config else {}
    primes = _merged(args, filecfg, "primes", None, parse_primes)
    if primes is None:
        raise CliFailure(EXIT_CONFIG, "--primes LO:HI is required")
    if isinstance(primes, str):
        primes = parse_primes(primes)
    out_dir = _merged(args, filecfg, "out", None, str)
    if out_dir is None:
        raise CliFailure(EXIT_CONFIG, "--out DIR is required")
    thresholds = _merged(args, filecfg, "thresholds", None, str)
    if isinstance(thresholds, str):
        try:
            thresholds = [int(t) for t in thresholds.split(",") if t.strip()]
        except ValueError:
            raise CliFailure(EXIT_CONFIG, f"bad thresholds {thresholds!r}")
    body = {
        "genus": _merged(args, filecfg, "genus", None, int),
        "prime_min": primes[0],
        "prime_max": primes[1],
        "r": _merged(args, filecfg, "ext", 1, int),
        "method": _merged(args, filecfg, "method", "family", str),
        "sample_size": _merged(args, filecfg, "samples", 100_000, int),
        "master_seed": _merged(args, filecfg, "seed", 0, int),
        "batch_size": _merged(args, filecfg, "batch_size", 1 << 16, int),
        "worker_count": _merged(args, filecfg, "workers", 1, int),
    }
    if body["genus"] is None:
        raise CliFailure(EXIT_CONFIG, "--genus is required")
    if thresholds:
        body["f_thresholds"] = thresholds
    url = _merged(args, filecfg, "url", None, str)
    with _client(url) as client:
        resp = client.post("/campaigns", json=body)
        _raise_for_error(resp)
        job_id = resp.json()["job_id"]
        print(f"job {job_id} started", file=sys.stderr)
        status = _poll_job(client, job_id, args.poll)
        if status["status"] == "error":
            raise CliFailure(
                _CODE_EXITS.get(status["error_code"], 1),
                f"campaign failed: {status['message']}",
            )
        report = client.get(f"/jobs/{job_id}/report")
        _raise_for_error(report)
        csv_text = client.get(f"/jobs/{job_id}/report.csv")
        _raise_for_error(csv_text)
    try:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(
            json.dumps(report.json(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        (out / "report.csv").write_text(csv_text.text, encoding="utf-8")
        (out / "run_log.json").write_text(
            json.dumps(
                {
                    "per_prime_seconds": status["per_prime_seconds"],
                    "total_seconds": status["seconds"],
                },
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
    except OSError as e:
        raise CliFailure(EXIT_IO, f"cannot write report files: {e}")
    print(f"report written to {out_dir}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    body = {"genus": args.genus, "p": args.p, "r": args.ext}
    with _client(args.url) as client:
        resp = client.post("/enumerate", json=body)
        _raise_for_error(resp)
        print(json.dumps(resp.json(), indent=2))
    return EXIT_OK


def cmd_prank(args) -> int:
    try:
        coeffs = [int(c) for c in args.coeffs.split(",")]
    except ValueError:
        raise CliFailure(EXIT_CONFIG, f"bad --coeffs {args.coeffs!r}")
    body = {"p": args.p, "r": args.ext, "coeffs": coeffs}
    with _client(args.url) as client:
        resp = client.post("/prank", json=body)
        _raise_for_error(resp)
        print(json.dumps(resp.json(), indent=2))
    return EXIT_OK


def cmd_figure(args) -> int:
    report_path = Path(args.report) / "report.json"
    try:
        obj = json.loads(report_path.read_text(encoding="utf-8"))
    except OSError as e:
        raise CliFailure(EXIT_IO, f"cannot read {report_path}: {e}")
    except ValueError as e:
        raise CliFailure(EXIT_CONFIG, f"{report_path} is not valid JSON: {e}")
    from .campaign import emit_figure_data
    from .errors import HwstrataError

    try:
        header, rows = emit_figure_data(obj, args.kind)
    except HwstrataError as e:
        raise CliFailure(EXIT_CONFIG, str(e))
    lines = [",".join(header)] + [",".join(row) for row in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as e:
            raise CliFailure(EXIT_IO, f"cannot write {args.out}: {e}")
        print(f"figure data written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_scan(args) -> int:
    primes = parse_primes(args.primes)
    body = {"genus": args.genus, "prime_min": primes[0], "prime_max": primes[1]}
    with _client(args.url) as client:
        resp = client.post("/scan-conj-1mod4", json=body)
        if resp.status_code == 404 and _detail_code(resp) == "nothing_to_do":
            raise CliFailure(EXIT_NOTHING, _detail_message(resp))
        _raise_for_error(resp)
        data = resp.json()
    for row in data["rows"]:
        print(
            f"p={row['p']} configs={row['configs']} "
            f"p_rank_zero={row['p_rank_zero']}"
        )
    if args.out:
        try:
            Path(args.out).write_text(
                json.dumps(data, indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
        except OSError as e:
            raise CliFailure(EXIT_IO, f"cannot write {args.out}: {e}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; our contract reserves 2 for empty work."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hwstrata",
        description="p-rank stratum surveys for hyperelliptic curves over GF(p^r)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("campaign", help="run a sampling campaign over a prime range")
    c.add_argument("--genus", type=int)
    c.add_argument("--primes", help="LO:HI (odd primes, inclusive)")
    c.add_argument("--ext", type=int, help="extension degree r (default 1)")
    c.add_argument("--method", choices=["family", "galois"])
    c.add_argument("--samples", type=int, help="target sample size per prime")
    c.add_argument("--seed", type=int, help="master seed (default 0)")
    c.add_argument("--out", help="directory for report.csv / report.json")
    c.add_argument("--thresholds", help="comma-separated f values to report")
    c.add_argument("--batch-size", dest="batch_size", type=int)
    c.add_argument("--workers", type=int)
    c.add_argument("--config", help="key = value file; flags win over it")
    c.add_argument("--url", help="remote service URL (default: in-process)")
    c.add_argument("--poll", type=float, default=0.5, help="job poll interval")
    c.set_defaults(func=cmd_campaign)

    e = sub.add_parser("enumerate", help="exhaust the family box at one prime")
    e.add_argument("--genus", type=int, required=True)
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--ext", type=int, default=1)
    e.add_argument("--url")
    e.set_defaults(func=cmd_enumerate)

    k = sub.add_parser("prank", help="p-rank of one curve y² = f(x)")
    k.add_argument("--p", type=int, required=True)
    k.add_argument("--ext", type=int, default=1)
    k.add_argument("--coeffs", required=True, help="encodings, constant first")
    k.add_argument("--url")
    k.set_defaults(func=cmd_prank)

    f = sub.add_parser("figure", help="extract plot data from a report directory")
    f.add_argument("--report", required=True, help="campaign output directory")
    f.add_argument(
        "--kind", required=True, choices=["nonordinary", "codim2", "prank0"]
    )
    f.add_argument("--out", help="write CSV here instead of stdout")
    f.set_defaults(func=cmd_figure)

    s = sub.add_parser(
        "scan-conj-1mod4",
        help="exhaustive p-rank-0 scan of fully split configs, p ≡ 1 (mod 4)",
    )
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--primes", required=True, help="LO:HI")
    s.add_argument("--out", help="also write the scan rows as JSON")
    s.add_argument("--url")
    s.set_defaults(func=cmd_scan)

    v = sub.add_parser("serve", help="run the HTTP service")
    v.add_argument("--host", default="127.0.0.1")
    v.add_argument("--port", type=int, default=8000)
    v.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except httpx.HTTPError as e:
        print(f"error: cannot reach service: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
