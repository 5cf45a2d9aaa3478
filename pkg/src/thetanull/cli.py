"""Command line: classify a Siegel point, run the self-test, or serve HTTP.

The CLI is an in-process client of the service handlers: `--input` parses an
InputDocument, calls `classify`, and writes the canonical report JSON either
to stdout or to `--out`.  Reports are deterministic, so rerunning the same
input produces a byte-identical file.  Diagnostics (timings, tracebacks) go
to stderr only.

Exit codes: 0 success (and all criteria passed under --selftest), 1 criterion
failure, 2 invalid input or options, 3 numerical failure (certified target
unreachable or iteration lost).
"""

from __future__ import annotations

import argparse
import sys
import time

from pydantic import ValidationError

from . import __version__
from .errors import DomainError, NumericalError

__all__ = ["main", "build_parser", "run_classify", "run_selftest"]

EXIT_OK = 0
EXIT_CRITERIA = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetanull",
        description="Certified theta-constant classification of principally "
        "polarized points on the Siegel upper half-space.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--input", metavar="PATH", help="input document (JSON); '-' for stdin")
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--target-eps", type=float, metavar="E", help="evaluation target (override)")
    parser.add_argument("--vanish-tol", type=float, metavar="V", help="vanishing threshold (override)")
    parser.add_argument("--rank-tol", type=float, metavar="R", help="relative rank threshold (override)")
    parser.add_argument("--selftest", action="store_true", help="run the acceptance criteria")
    parser.add_argument("--filter", metavar="NAME", help="run only criteria whose name contains NAME")
    parser.add_argument("--seed", type=int, default=0, metavar="N", help="self-test seed (default 0)")
    parser.add_argument("--threads", type=int, default=1, metavar="N", help="worker threads (default 1)")
    parser.add_argument("--serve", action="store_true", help="start the HTTP service")
    parser.add_argument("--host", default="127.0.0.1", help="bind address for --serve")
    parser.add_argument("--port", type=int, default=8000, help="port for --serve")
    return parser


def _read_document(path: str):
    from .service import InputDocument

    raw = sys.stdin.read() if path == "-" else open(path, "r", encoding="utf-8").read()
    return InputDocument.model_validate_json(raw)


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_classify(input_path: str, flags) -> int:
    """Classify the document at ``input_path`` under parsed ``flags``."""
    from .service import classify, render_report

    doc = _read_document(input_path)
    overrides = {}
    if flags.target_eps is not None:
        overrides["target_eps"] = flags.target_eps
    if flags.vanish_tol is not None:
        overrides["vanish_tol"] = flags.vanish_tol
    if flags.rank_tol is not None:
        overrides["rank_tol"] = flags.rank_tol
    if overrides:
        doc = doc.model_copy(update={"options": doc.options.model_copy(update=overrides)})
    report = classify(doc, threads=flags.threads)
    _write(render_report(report), flags.out)
    return EXIT_OK


def run_selftest(flags) -> int:
    """Run the (optionally filtered) acceptance criteria under ``flags``."""
    from .service import render_selftest, selftest

    started = time.perf_counter()
    report = selftest(name_filter=flags.filter, seed=flags.seed, threads=flags.threads)
    elapsed = time.perf_counter() - started
    _write(render_selftest(report), flags.out)
    for outcome in report.criteria:
        status = "PASS" if outcome.passed else "FAIL"
        print(f"{status} {outcome.name}: {outcome.detail}", file=sys.stderr)
    print(f"self-test {'passed' if report.passed else 'FAILED'} in {elapsed:.1f} s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_CRITERIA


def _run_serve(args) -> int:
    import uvicorn

    from .api import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    modes = sum(bool(m) for m in (args.input, args.selftest, args.serve))
    if modes != 1:
        print("error: exactly one of --input, --selftest, --serve is required", file=sys.stderr)
        return EXIT_INVALID
    try:
        if args.selftest:
            return run_selftest(args)
        if args.serve:
            return _run_serve(args)
        return run_classify(args.input, args)
    except (ValidationError, DomainError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
