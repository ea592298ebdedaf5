"""Command-line front end: ``circmagic <command> ...``.

Every command prints self-describing JSON records (one per line) or, with
``--format table``, aligned ``key: value`` text.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .circulant import ConnectionSet, canonical_form, enumerate_sets, parse_set
from .families import (
    Status,
    decide,
    enumerate_families,
    family_connection_set,
    parse_family,
    recognize_all,
)
from .fixtures import run_fixtures
from .labelings import (
    LabelingNotFound,
    label_family,
    label_set,
    labeling_to_csv,
    labeling_to_json,
    load_labeling,
    verify,
)
from .modular import DomainError
from .oracle import SearchBudget, SearchStatus, exhaustive_scan, scan_summary, search_labeling
from .spectra import admissible_set, candidate_filter

SCHEMA_VERSION = 1

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3


class _Emitter:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def __call__(self, kind: str, inp: Any, result: Any, seconds: float) -> None:
        rec = {"kind": kind, "schema": SCHEMA_VERSION, "version": __version__,
               "input": inp, "result": result, "seconds": round(seconds, 4)}
        if self.fmt == "json":
            print(json.dumps(rec), file=self.stream)
            return
        print(f"[{kind}] {inp}", file=self.stream)
        rows = result.items() if isinstance(result, dict) else [("result", result)]
        for k, v in rows:
            if isinstance(v, (list, dict)):
                v = json.dumps(v)
            print(f"  {k}: {v}", file=self.stream)
        print(f"  seconds: {seconds:.3f}", file=self.stream)


def _budget(args) -> SearchBudget:
    nodes = None if args.budget_nodes == 0 else args.budget_nodes
    return SearchBudget(nodes, args.budget_seconds)


def _set_echo(S: ConnectionSet) -> dict:
    return {"set": str(S), "canonical": str(canonical_form(S))}


def cmd_admissible(args, emit) -> int:
    S = parse_set(args.set)
    t0 = time.perf_counter()
    chars = admissible_set(S)
    result = {
        **_set_echo(S),
        "admissible": [
            {"j": c.j, "tags": sorted(str(t) for t in c.types),
             "witnesses": [{"tag": str(w.tag), "assignment": list(w.assignment), "ks": list(w.ks),
                            "variant": w.variant, "j0": w.j0} for w in c.witnesses]}
            for c in chars
        ],
        "filter": _filter_json(candidate_filter(S, chars)),
    }
    emit("admissible", args.set, result, time.perf_counter() - t0)
    return EXIT_OK


def _filter_json(f) -> dict:
    return {"passed": f.passed, "reason": f.reason, "divisor": f.divisor}


def cmd_decide(args, emit) -> int:
    S = parse_set(args.set)
    t0 = time.perf_counter()
    v = decide(S, _budget(args))
    result = {**_set_echo(S), "status": v.status.value, "reason": v.reason,
              "family": str(v.family) if v.family else None, "multiplier": v.multiplier,
              "profile": list(v.profile), "search": v.search}
    if v.labeling is not None:
        result["labeling"] = list(v.labeling)
    emit("classify", args.set, result, time.perf_counter() - t0)
    return {Status.YES: EXIT_OK, Status.NO: EXIT_NO, Status.UNKNOWN: EXIT_UNKNOWN}[v.status]


def cmd_recognize(args, emit) -> int:
    S = parse_set(args.set)
    t0 = time.perf_counter()
    hits = recognize_all(S)
    result = {**_set_echo(S), "families": [{"family": str(F), "multiplier": q} for F, q in hits]}
    emit("recognize", args.set, result, time.perf_counter() - t0)
    return EXIT_OK if hits else EXIT_NO


def cmd_label(args, emit) -> int:
    t0 = time.perf_counter()
    spec = args.target
    try:
        if ":" in spec:
            S = parse_set(spec)
            L, how = label_set(S, _budget(args))
        else:
            F = parse_family(spec)
            S = family_connection_set(F)
            L, how = label_family(F, _budget(args), method=args.method), str(F)
    except LabelingNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    kappa = verify(S, L)
    if kappa is None:  # pragma: no cover - every path verifies already
        print("error: produced labeling failed verification", file=sys.stderr)
        return EXIT_NO
    if args.out:
        text = labeling_to_csv(L) if args.out.endswith(".csv") else labeling_to_json(L) + "\n"
        Path(args.out).write_text(text)
    result = {**_set_echo(S), "via": how, "kappa": kappa, "labeling": list(L.values)}
    emit("label", spec, result, time.perf_counter() - t0)
    return EXIT_OK


def cmd_verify(args, emit) -> int:
    S = parse_set(args.set)
    t0 = time.perf_counter()
    L = load_labeling(args.labeling)
    kappa = verify(S, L)
    emit("verify", {"set": args.set, "labeling": args.labeling},
         {**_set_echo(S), "magic": kappa is not None, "kappa": kappa}, time.perf_counter() - t0)
    return EXIT_OK if kappa is not None else EXIT_NO


def cmd_search(args, emit) -> int:
    S = parse_set(args.set)
    t0 = time.perf_counter()
    out = search_labeling(S, _budget(args), prefilter=not args.no_prefilter, engine=args.engine)
    result = {**_set_echo(S), "status": out.status.value, **out.stats()}
    if out.found:
        result["labeling"] = list(out.values)
    emit("search", args.set, result, time.perf_counter() - t0)
    return {SearchStatus.FOUND: EXIT_OK, SearchStatus.EXHAUSTED: EXIT_NO,
            SearchStatus.BUDGET: EXIT_UNKNOWN}[out.status]


def cmd_enumerate(args, emit) -> int:
    t0 = time.perf_counter()
    rows = []
    for S in enumerate_sets(args.n):
        f = candidate_filter(S)
        if args.candidates and not f:
            continue
        rows.append({"set": str(S), "filter": _filter_json(f),
                     "families": [str(F) for F, _ in recognize_all(S)]})
    fams = [str(F) for F in enumerate_families(args.n)] if args.n >= 7 else []
    emit("enumerate", {"n": args.n, "candidates_only": args.candidates},
         {"classes": rows, "count": len(rows), "family_instances": fams}, time.perf_counter() - t0)
    return EXIT_OK


def cmd_scan(args, emit) -> int:
    t0 = time.perf_counter()
    records = exhaustive_scan(args.nmax, _budget(args), jobs=args.jobs)
    for r in records:
        emit("scan", {"n": r["n"], "set": r["set"]}, r, r["seconds"])
    summary = scan_summary(records)
    emit("scan-summary", {"nmax": args.nmax}, summary, time.perf_counter() - t0)
    return EXIT_OK if not summary["disagree"] else EXIT_NO


def cmd_selftest(args, emit) -> int:
    t0 = time.perf_counter()
    passed, failed = run_fixtures()
    emit("selftest", None, {"passed": passed, "failed": failed,
                            "status": "passed" if not failed else "failed"},
         time.perf_counter() - t0)
    return EXIT_OK if not failed else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circmagic",
                                description="Distance magic labelings of 6-valent circulants.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--budget-nodes", type=int, default=2_000_000,
                        help="search node cap, 0 for none (default %(default)s)")
    common.add_argument("--budget-seconds", type=float, default=0.0,
                        help="search wall-clock cap, 0 for none")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    set_help = 'connection set as "n:a,b,c"'
    add("admissible", cmd_admissible, "admissible characters with type tags").add_argument("set", help=set_help)
    add("decide", cmd_decide, "decide distance magicness").add_argument("set", help=set_help)
    add("recognize", cmd_recognize, "match against the known families").add_argument("set", help=set_help)
    sp = add("label", cmd_label, "produce a verified labeling")
    sp.add_argument("target", help='family such as "T1b[5,7,11]" or a set "n:a,b,c"')
    sp.add_argument("--method", choices=("auto", "product", "search"), default="auto",
                    help="construction of the tetravalent sub-labeling for T1a families")
    sp.add_argument("--out", help="also write the labeling (.csv for CSV, otherwise JSON)")
    sp = add("verify", cmd_verify, "check a labeling file")
    sp.add_argument("set", help=set_help)
    sp.add_argument("labeling", help="JSON array or vertex,label CSV")
    sp = add("search", cmd_search, "backtracking search")
    sp.add_argument("set", help=set_help)
    sp.add_argument("--no-prefilter", action="store_true", help="skip the kernel filter")
    sp.add_argument("--engine", choices=("linear", "plain"), default="linear")
    sp = add("enumerate", cmd_enumerate, "list classes of one order")
    sp.add_argument("n", type=int)
    sp.add_argument("--candidates", action="store_true", help="only classes passing the kernel filter")
    sp = add("scan", cmd_scan, "compare decide with exhaustive search")
    sp.add_argument("--nmax", type=int, default=16)
    sp.add_argument("--jobs", type=int, default=1)
    add("selftest", cmd_selftest, "run the reference fixtures")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    emit = _Emitter(args.format)
    try:
        return args.func(args, emit)
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
