"""Command-line front end.

Subcommands::

    hlskit decide     --dims 1,1 --p 2,3 --q inf,3 --lambda 3/2
    hlskit decide-hls --dims 1 --p 3/2 --q 3/2 [--via-gamma]
    hlskit scan       --dims 1,1 --grid 0,1/2,1 [--fix q1=inf] [--lambda 3/2]
    hlskit verify     --suite duality [--out report.json] [--no-timestamp]
    hlskit kfun       --input f.txt --u 1 --v inf [--t-min 1e-3 --t-max 1e3 --points 25]

Exit codes: 0 computed (a non-member verdict is still a success), 1 input
error, 2 internal failure or a verification suite with failures.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import sys
import time
from typing import Optional, Sequence

import numpy as np

from .consistency import DEFAULT_GRID, parse_fix, scan_rows
from .errors import HLSError, InputError
from .exponents import IndexSpec, format_rational, homogeneity_defect, parse_rational
from .gamma import gamma_member
from .kfunctional import Couple, k_functional, parse_simple_function
from .omega import omega_member, omega_via_gamma
from .suites import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; that code is reserved here
    def error(self, message):
        raise InputError(message)


def _spec(args, with_lambda: bool) -> IndexSpec:
    return IndexSpec.parse(args.dims, args.p, args.q, args.lam if with_lambda else None)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def cmd_decide(args, out) -> int:
    spec = _spec(args, True)
    report = gamma_member(spec)
    record = report.to_dict()
    record["homogeneity_defect"] = format_rational(homogeneity_defect(spec))
    out.write(_dump(record))
    return EXIT_OK


def cmd_decide_hls(args, out) -> int:
    spec = _spec(args, False)
    report = omega_via_gamma(spec) if args.via_gamma else omega_member(spec)
    out.write(_dump(report.to_dict()))
    return EXIT_OK


def cmd_scan(args, out) -> int:
    try:
        dims = tuple(int(t) for t in _split(args.dims, "--dims"))
    except ValueError:
        raise InputError(f"malformed --dims {args.dims!r}") from None
    if args.grid is None:
        grid = DEFAULT_GRID
    elif not args.grid.strip():
        raise InputError("empty --grid")
    else:
        grid = tuple(parse_rational(t) for t in _split(args.grid, "--grid"))
    fix = parse_fix(args.fix or [], len(dims))
    lam = None if args.lam is None else parse_rational(args.lam)
    rows = list(scan_rows(dims, grid, fix, lam))
    if args.format == "json":
        text = _dump(rows)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = list(rows[0]) if rows else []
        w.writerow(cols)
        for r in rows:
            w.writerow(["true" if v is True else "false" if v is False else v for v in r.values()])
        text = buf.getvalue()
    _emit(text, args.out, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results, timings = [], []
    names = list(SUITES) if args.suite == "all" else [args.suite]
    for name in names:
        t0 = time.perf_counter()
        results += run_suite(name)
        timings.append(time.perf_counter() - t0)
    for res in results:
        out.write(f"== {res.summary()}\n")
        out.write(res.table() + "\n")
        for note in res.notes:
            out.write(f"# {note}\n")
    ok = all(r.passed for r in results)
    out.write(f"overall: {'PASS' if ok else 'FAIL'}\n")
    if args.out:
        record = {"suite": args.suite, "passed": ok, "results": [r.to_dict() for r in results]}
        if not args.no_timestamp:
            record["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
            record["elapsed_s"] = {n: round(t, 3) for n, t in zip(names, timings)}
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dump(_plain(record)))
    return EXIT_OK if ok else EXIT_INTERNAL


def cmd_kfun(args, out) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
    f = parse_simple_function(text)
    couple = Couple(args.u, args.v)
    if not (0 < args.t_min < args.t_max) or args.points < 2:
        raise InputError("need 0 < --t-min < --t-max and --points >= 2")
    ts = np.geomspace(args.t_min, args.t_max, args.points)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "K"])
    for t in ts:
        w.writerow([f"{t:.12g}", f"{k_functional(f, t, couple):.12g}"])
    _emit(buf.getvalue(), args.out, out)
    return EXIT_OK


def _split(text: str, flag: str) -> list[str]:
    parts = [t.strip() for t in text.split(",")]
    if any(not t for t in parts):
        raise InputError(f"empty token in {flag} {text!r}")
    return parts


def _emit(text: str, path: Optional[str], out) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def _plain(obj):
    """Make numpy scalars JSON-serializable."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hlskit", description="Riesz potential index sets and numerical checks.")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def spec_flags(p, lam: bool):
        p.add_argument("--dims", required=True, help="block dimensions, e.g. 1,1")
        p.add_argument("--p", required=True, help="exponents p_i, e.g. 2,inf,3/2")
        p.add_argument("--q", required=True, help="exponents q_i")
        if lam:
            p.add_argument("--lambda", dest="lam", required=True, help="kernel order, e.g. 3/2")

    p = sub.add_parser("decide", help="decide (p, q) in Gamma_{lambda,m}")
    spec_flags(p, True)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("decide-hls", help="decide (p, q) in Omega_m")
    spec_flags(p, False)
    p.add_argument("--via-gamma", action="store_true", help="use the reduction to Gamma")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_decide_hls)

    p = sub.add_parser("scan", help="Gamma verdicts over a reciprocal lattice")
    p.add_argument("--dims", required=True)
    p.add_argument("--grid", default=None, help="reciprocal values in [0, 1] (default 9 points)")
    p.add_argument("--fix", action="append", help="pin coordinates, e.g. q1=inf (repeatable)")
    p.add_argument("--lambda", dest="lam", default=None, help="fixed order instead of solving")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=list(SUITES) + ["all"])
    p.add_argument("--out", default=None, help="also write a JSON report here")
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kfun", help="K(t) of a simple function on a log-spaced t grid")
    p.add_argument("--input", required=True, help="file of 'value,measure' lines, or - for stdin")
    p.add_argument("--u", default="1")
    p.add_argument("--v", default="inf")
    p.add_argument("--t-min", type=float, default=1e-3)
    p.add_argument("--t-max", type=float, default=1e3)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_kfun)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, out)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except HLSError as exc:
        err.write(f"hlskit: error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        err.write(f"hlskit: error: {exc}\n")
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - last resort
        err.write(f"hlskit: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
