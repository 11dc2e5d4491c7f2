"""``nief-spectra run <config.json>``: run a scenario, write CSV + JSON.

Exit codes:

* 0 -- success
* 1 -- selftest ran but at least one invariant failed
* 2 -- validation error (unreadable or malformed config, bad parameters)
* 3 -- numerical error raised by a core module

Every failure also writes a machine-readable JSON record to the summary path
(and to stderr).  The CSV is only written after the computation succeeded,
so a failed run never leaves a partial table behind.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .errors import NumericalError, ValidationError, Violation
from .scenario import run_task

SCHEMA_VERSION = 1
EXIT_OK, EXIT_SELFTEST_FAILED, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3
THREADS_ENV = "NIEF_SPECTRA_THREADS"


def format_value(x, precision=17) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), f".{precision}g")


def render_csv(columns, rows, precision=17) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(format_value(v, precision) for v in row) + "\n")
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _resolve_threads(arg):
    if arg is not None:
        return arg
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError([Violation("BadThreads", f"{THREADS_ENV}={env!r} is not an integer")])
    return 1


def _output_paths(cfg, config_path: Path, out_dir: Path):
    stem = config_path.stem
    block = cfg.get("output", {}) if isinstance(cfg, dict) else {}
    if not isinstance(block, dict):
        raise ValidationError([Violation("BadType", "output must be an object")])
    csv_name = block.get("csv", f"{stem}.csv")
    json_name = block.get("json", f"{stem}.json")
    precision = block.get("precision", 17)
    if not isinstance(csv_name, str) or not isinstance(json_name, str):
        raise ValidationError([Violation("BadType", "output.csv and output.json must be strings")])
    if isinstance(precision, bool) or not isinstance(precision, int) or not 1 <= precision <= 17:
        raise ValidationError([Violation("BadValue", "output.precision must be an integer in 1..17")])
    return out_dir / csv_name, out_dir / json_name, precision


def _error_record(kind, exc, code):
    rec = {"schema": SCHEMA_VERSION, "status": "error", "exit_code": code,
           "error": {"kind": kind, "name": getattr(exc, "name", type(exc).__name__),
                     "message": str(exc)}}
    if isinstance(exc, ValidationError):
        rec["error"]["violations"] = [{"name": v.name, "detail": v.detail} for v in exc.violations]
    return rec


def run(config: str, out_dir: str | None = None, threads: int | None = None,
        seed: int | None = None) -> int:
    config_path = Path(config)
    out = Path(out_dir) if out_dir is not None else Path.cwd()
    json_path = out / f"{config_path.stem}.json"

    def fail(kind, exc, code):
        rec = render_json(_error_record(kind, exc, code))
        _write(json_path, rec)
        sys.stderr.write(rec)
        return code

    try:
        try:
            text = config_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError([Violation("Unreadable", f"{config_path.name}: {exc.strerror}")])
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError([Violation("MalformedJSON", f"line {exc.lineno} col {exc.colno}: {exc.msg}")])
        csv_path, json_path, precision = _output_paths(cfg, config_path, out)
        if seed is None:
            seed = cfg.get("seed", 0)
            if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
                raise ValidationError([Violation("BadValue", "seed must be a nonnegative integer")])
        n_threads = _resolve_threads(threads)
        result = run_task(cfg, threads=n_threads, seed=seed)
    except ValidationError as exc:
        return fail("validation", exc, EXIT_VALIDATION)
    except NumericalError as exc:
        return fail("numerical", exc, EXIT_NUMERICAL)

    code = EXIT_OK
    summary = {"schema": SCHEMA_VERSION, "status": "ok", "task": cfg["task"],
               "columns": list(result.columns), "rows": len(result.rows),
               "csv": csv_path.name, "result": result.summary}
    if cfg["task"] == "selftest" and not result.summary.get("all_passed", False):
        summary["status"] = "selftest_failed"
        code = EXIT_SELFTEST_FAILED
    _write(csv_path, render_csv(result.columns, result.rows, precision))
    _write(json_path, render_json(summary))
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nief-spectra",
        description="Dressed-atom probe spectra, mixing and interference calculations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run a JSON scenario file")
    p.add_argument("config", help="path to the scenario JSON")
    p.add_argument("--out-dir", default=None, help="directory for the CSV and JSON outputs (default: cwd)")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads for sweeps and the selftest (fallback: ${THREADS_ENV})")
    p.add_argument("--seed", type=int, default=None, help="seed for the selftest parameter draws")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1:
        build_parser().error("--threads must be >= 1")
    if args.seed is not None and args.seed < 0:
        build_parser().error("--seed must be >= 0")
    return run(args.config, args.out_dir, args.threads, args.seed)


if __name__ == "__main__":
    sys.exit(main())
