"""Command-line front door.

Subcommands: gw3, w3, gw-quadric, w-quadric, table, verify, diagrams.
Values are printed as decimal strings (never floats); exit codes are
0 success, 1 verification failure, 2 usage or input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import invariants, verify
from .bidegree import Bidegree
from .diagrams import dump_record, enumerate_diagrams
from .errors import InputError, PencilcountError, ResourceCapError, VerificationError
from .invariants import ResultCache, resolve_convention
from .markings import complex_multiplicity, real_contribution
from .scan import state_space_report

DEFAULT_CACHE = "pencilcount-cache.jsonl"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "csv", "json"), default="text")
    parser.add_argument("--jobs", type=str, default=None,
                        help="worker count, or 'auto' (default: PENCILCOUNT_JOBS "
                             "or machine parallelism)")
    parser.add_argument("--cache", dest="cache_path", default=DEFAULT_CACHE,
                        help=f"result cache file (default {DEFAULT_CACHE})")
    parser.add_argument("--no-cache", action="store_true",
                        help="do not read or write the result cache")
    parser.add_argument("--convention", default=None,
                        help="sign convention override, e.g. ALT/INCIDENT/BAL/BAL")
    parser.add_argument("--timings", action="store_true",
                        help="append wall-clock timings (not reproducible output)")
    parser.add_argument("--max-states", type=int, default=None,
                        help="scan state cap; exceeding it exits with code 3")


def _resolve_jobs(args) -> int:
    raw = args.jobs if args.jobs is not None else os.environ.get("PENCILCOUNT_JOBS")
    if raw is None or raw == "auto":
        return os.cpu_count() or 1
    try:
        jobs = int(raw)
    except ValueError:
        raise InputError(f"--jobs expects an integer or 'auto', got {raw!r}") from None
    if jobs < 1:
        raise InputError("--jobs must be at least 1")
    return jobs


def _cache(args) -> ResultCache:
    return ResultCache(None if args.no_cache else args.cache_path)


def _print_value(args, value: int, fields: dict) -> None:
    if args.format == "text":
        print(value)
    elif args.format == "csv":
        keys = [k for k in ("d", "a", "b", "l") if fields.get(k) is not None]
        print(",".join(keys + ["value"]))
        print(",".join([str(fields[k]) for k in keys] + [str(value)]))
    else:
        payload = {k: v for k, v in fields.items() if v is not None}
        payload["value"] = str(value)
        print(json.dumps(payload))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pencilcount",
        description="Exact curve counts on the quadric surface and their "
                    "reductions to projective 3-space.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gw3", help="complex count for 3-space, degree d")
    p.add_argument("--d", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("w3", help="signed real count for 3-space")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--force-compute", action="store_true",
                   help="evaluate the even-degree sum instead of short-circuiting")
    _add_common(p)

    p = sub.add_parser("gw-quadric", help="complex count for the quadric")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("w-quadric", help="signed real count for the quadric")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("table", help="triangle of 3-space values for odd d <= dmax")
    p.add_argument("--dmax", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", default="all",
                   choices=("paper", "oracle", "conventions", "properties", "all"))
    p.add_argument("--extended", action="store_true",
                   help="include the d = 11 table column in the paper suite")
    _add_common(p)

    p = sub.add_parser("diagrams", help="dump the floor diagrams of one bidegree")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--dump", choices=("json",), default="json")
    _add_common(p)

    p = sub.add_parser("scan-report", help="state-space statistics for one bidegree")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    _add_common(p)
    return parser


def _cmd_gw3(args) -> int:
    value = invariants.gw_cp3(args.d, jobs=_resolve_jobs(args), cache=_cache(args),
                              max_states=args.max_states)
    _print_value(args, value, {"d": args.d})
    return 0


def _cmd_w3(args) -> int:
    conv, _ = resolve_convention(args.convention)
    value = invariants.w_rp3(args.d, args.l, convention=conv,
                             force_compute=args.force_compute,
                             jobs=_resolve_jobs(args), cache=_cache(args),
                             max_states=args.max_states)
    if args.d % 2 == 0 and not args.force_compute:
        print("note: even degree vanishes identically; "
              "--force-compute evaluates the sum anyway", file=sys.stderr)
    _print_value(args, value, {"d": args.d, "l": args.l})
    return 0


def _cmd_gw_quadric(args) -> int:
    value = invariants.gw_quadric(args.a, args.b, jobs=_resolve_jobs(args),
                                  cache=_cache(args), max_states=args.max_states)
    _print_value(args, value, {"a": args.a, "b": args.b})
    return 0


def _cmd_w_quadric(args) -> int:
    conv, _ = resolve_convention(args.convention)
    value = invariants.w_quadric(args.a, args.b, args.l, convention=conv,
                                 jobs=_resolve_jobs(args), cache=_cache(args),
                                 max_states=args.max_states)
    _print_value(args, value, {"a": args.a, "b": args.b, "l": args.l})
    return 0


def _cmd_table(args) -> int:
    conv, _ = resolve_convention(args.convention)
    jobs = _resolve_jobs(args)
    cache = _cache(args)
    degrees = [d for d in range(1, args.dmax + 1) if d % 2 == 1]
    columns = {d: [invariants.w_rp3(d, l, convention=conv, jobs=jobs, cache=cache)
                   for l in range(d)] for d in degrees}
    if args.format == "csv":
        print("d,l,value")
        for d in degrees:
            for l, v in enumerate(columns[d]):
                print(f"{d},{l},{v}")
    elif args.format == "json":
        print(json.dumps([{"d": d, "l": l, "value": str(v)}
                          for d in degrees for l, v in enumerate(columns[d])]))
    else:
        width = {d: max([len(str(v)) for v in columns[d]] + [len(str(d))])
                 for d in degrees}
        header = "l\\d " + " ".join(str(d).rjust(width[d]) for d in degrees)
        print(header)
        for l in range(max(degrees)):
            cells = []
            for d in degrees:
                cells.append((str(columns[d][l]) if l < d else "").rjust(width[d]))
            print(f"{l:>3} " + " ".join(cells))
    return 0


def _cmd_verify(args) -> int:
    report = verify.run_suite(args.suite, extended=args.extended,
                              jobs=_resolve_jobs(args))
    if args.suite in ("conventions", "all"):
        selected, _ = verify.fit_sign_convention(9)
        invariants.save_fitted_convention(selected, max_d=9)
        print(f"fitted convention persisted: {selected.ident}", file=sys.stderr)
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.render_text())
    return report.exit_status


def _cmd_diagrams(args) -> int:
    diagrams = enumerate_diagrams(Bidegree(args.a, args.b))
    n = 2 * (args.a + args.b) - 1
    conv, _ = resolve_convention(args.convention)
    for diagram in diagrams:
        record = dump_record(diagram)
        record["mu_complex"] = str(complex_multiplicity(diagram))
        for s in range((n + 1) // 2):
            if n - 2 * s < 1:
                break
            record[f"contrib_s{s}"] = str(real_contribution(diagram, s, convention=conv))
        print(json.dumps(record))
    return 0


def _cmd_scan_report(args) -> int:
    stats = state_space_report(Bidegree(args.a, args.b),
                               max_states=args.max_states)
    payload = {
        "a": stats.a, "b": stats.b, "mode": stats.mode,
        "positions": stats.positions,
        "states_per_position": list(stats.states_per_position),
        "peak_states": stats.peak_states,
        "transitions": stats.transitions,
        "peak_state_bytes": stats.peak_state_bytes,
    }
    print(json.dumps(payload))
    return 0


_COMMANDS = {
    "gw3": _cmd_gw3,
    "w3": _cmd_w3,
    "gw-quadric": _cmd_gw_quadric,
    "w-quadric": _cmd_w_quadric,
    "table": _cmd_table,
    "verify": _cmd_verify,
    "diagrams": _cmd_diagrams,
    "scan-report": _cmd_scan_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    start = time.monotonic()
    try:
        status = _COMMANDS[args.command](args)
    except ResourceCapError as exc:
        print(f"ERROR 3: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"ERROR 1: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"ERROR 2: {exc}", file=sys.stderr)
        return 2
    except PencilcountError as exc:
        print(f"ERROR {exc.exit_code}: {exc}", file=sys.stderr)
        return exc.exit_code
    if getattr(args, "timings", False):
        print(f"# wall time: {time.monotonic() - start:.3f}s")
    return status


if __name__ == "__main__":
    sys.exit(main())
