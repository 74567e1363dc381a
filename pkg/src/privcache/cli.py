"""Command-line front end: ``privcache build|verify|search|tradeoff|compare-subpack``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import constructions as cons
from .pda import PdaFormatError, build_from_pda, parse_pda
from .scheme import (
    EnumerationCapError,
    Scheme,
    SchemeFormatError,
    deserialize_scheme,
    privacy_report,
    rate_and_memory,
    serialize_scheme,
    verify_correctness,
    weak_privacy_check,
)
from .search import search_sub2, search_sub3_uncoded

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_scheme(path: str) -> Scheme:
    try:
        return deserialize_scheme(_read(path))
    except SchemeFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows: Sequence[Sequence[object]]) -> str:
    cells = [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def _csv(rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# -- build -------------------------------------------------------------------------


def cmd_build(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind == "mn":
        s = cons.build_mn(args.users, args.files, args.t)
    elif kind == "pda":
        try:
            pda = parse_pda(_read(args.file))
        except PdaFormatError as exc:
            raise UsageError(f"{args.file}: {exc}") from None
        s = build_from_pda(pda, args.files)
    elif kind == "table1":
        s = cons.build_table1()
    elif kind == "trivial":
        s = cons.build_trivial(args.files, args.users, args.mode)
    elif kind == "private":
        s = cons.privatize(_load_scheme(args.source))
    elif kind == "partial":
        s = cons.build_partial_private(_load_scheme(args.source), args.level)
    elif kind == "dual":
        s = cons.dualize(_load_scheme(args.source))
    elif kind == "timeshare":
        if args.a == args.b == "-":
            raise UsageError("only one of --a and --b may read stdin")
        s = cons.time_share(_load_scheme(args.a), _load_scheme(args.b), args.alpha)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown scheme kind {kind}")
    _emit(serialize_scheme(s), args.out)
    return EXIT_OK


# -- verify ------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    s = _load_scheme(args.scheme)
    violations = verify_correctness(s)
    M, R = rate_and_memory(s)
    doc: dict = {
        "provenance": s.provenance,
        "users": s.params.users,
        "files": s.params.files,
        "subpack": s.params.subpack,
        "M": str(M),
        "R": str(R),
        "correct": not violations,
        "violations": [v.to_dict() for v in violations],
        "privacyMode": args.privacy,
    }
    shape_broken = any(v.kind == "shape-error" for v in violations)
    private = True
    if shape_broken:
        private = False
        doc["privacy"] = {"skipped": "shape errors"}
    elif args.privacy == "weak":
        leaks = weak_privacy_check(s)
        private = not leaks
        doc["privacy"] = {"weakViolations": [v.to_dict() for v in leaks]}
    else:
        try:
            rep = privacy_report(s, cap=args.cap)
        except EnumerationCapError as exc:
            raise UsageError(str(exc)) from None
        doc["privacy"] = rep.to_dict()
        if args.privacy == "exact":
            private = rep.exact_private
        else:
            private = rep.min_ambiguity >= args.min_ambiguity
            doc["privacy"]["requiredAmbiguity"] = args.min_ambiguity
    doc["private"] = private
    doc["ok"] = not violations and private

    if args.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        rows = [
            ["field", "value"],
            ["scheme", s.provenance or "-"],
            ["K, N, f", f"{s.params.users}, {s.params.files}, {s.params.subpack}"],
            ["M", f"{M} (~{float(M):.4f})"],
            ["R", f"{R} (~{float(R):.4f})"],
            ["correct", doc["correct"]],
            [f"private ({args.privacy})", private],
        ]
        p = doc["privacy"]
        if "maxMutualInfoBits" in p:
            rows.append(["max I(view; D_j) bits", p["maxMutualInfoBits"]])
            rows.append(["min ambiguity", p["minAmbiguity"]])
        text = _table(rows)
        for v in violations:
            text += f"violation: {json.dumps(v.to_dict())}\n"
    sys.stdout.write(text)
    return EXIT_OK if doc["ok"] else EXIT_FAIL


# -- search / tradeoff / compare ---------------------------------------------------


def cmd_search(args: argparse.Namespace) -> int:
    progress = None
    if args.progress:
        def progress(n: int) -> None:
            print(f"progress: {n} candidates", file=sys.stderr, flush=True)

    if args.which == "sub2":
        rep = search_sub2(privacy_condition=not args.no_privacy_condition, progress=progress)
    else:
        rep = search_sub3_uncoded(
            restricted=args.restricted,
            privacy_condition=not args.no_privacy_condition,
            progress=progress,
            threads=args.threads,
        )
    if args.format == "json":
        text = rep.to_json(timing=args.timing)
    else:
        rows = [["field", "value"], ["search", rep.name], ["candidatesExamined", rep.candidates_examined], ["feasibleFound", rep.feasible_found]]
        rows += [[f"check {k}", v] for k, v in rep.sub_lemma_checks.items()]
        if args.timing:
            rows.append(["elapsedSeconds", f"{rep.elapsed:.3f}"])
        text = _table(rows) if args.format == "table" else _csv(rows)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_tradeoff(args: argparse.Namespace) -> int:
    if (args.files, args.users) != (2, 2):
        raise UsageError("trade-off vertices are only constructed for --files 2 --users 2")
    points = cons.tradeoff_curve()
    if args.format == "json":
        text = json.dumps([{"M": str(p.M), "R": str(p.R), "label": p.label} for p in points], indent=2) + "\n"
    elif args.format == "csv":
        text = _csv([["M", "R", "label"]] + [[str(p.M), str(p.R), p.label] for p in points])
    else:
        text = _table(
            [["M", "R", "M~", "R~", "label"]]
            + [[str(p.M), str(p.R), f"{float(p.M):.4f}", f"{float(p.R):.4f}", p.label] for p in points]
        )
    sys.stdout.write(text)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        full, partial = cons.subpack_comparison(args.files, args.users, args.memory, args.level)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        text = json.dumps({"fullPrivacy": full, "partialPrivacy": partial}) + "\n"
    elif args.format == "csv":
        text = _csv([["fullPrivacy", "partialPrivacy"], [full, partial]])
    else:
        text = _table([["privacy", "subpacketization"], ["full", full], [f"level {args.level}", partial]])
    sys.stdout.write(text)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="privcache", description="Demand-private coded caching toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a scheme and print its JSON")
    bk = b.add_subparsers(dest="kind", required=True)
    out_opt = argparse.ArgumentParser(add_help=False)
    out_opt.add_argument("--out", help="write to this file instead of stdout")

    p = bk.add_parser("mn", parents=[out_opt])
    p.add_argument("--users", type=int, required=True)
    p.add_argument("--files", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p = bk.add_parser("pda", parents=[out_opt])
    p.add_argument("--file", required=True)
    p.add_argument("--files", type=int, required=True)
    bk.add_parser("table1", parents=[out_opt])
    p = bk.add_parser("trivial", parents=[out_opt])
    p.add_argument("--mode", choices=["empty", "full"], required=True)
    p.add_argument("--files", type=int, required=True)
    p.add_argument("--users", type=int, required=True)
    p = bk.add_parser("private", parents=[out_opt])
    p.add_argument("--from", dest="source", required=True)
    p = bk.add_parser("partial", parents=[out_opt])
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--level", type=int, required=True)
    p = bk.add_parser("dual", parents=[out_opt])
    p.add_argument("--from", dest="source", required=True)
    p = bk.add_parser("timeshare", parents=[out_opt])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--alpha", type=_fraction, required=True)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check correctness and privacy of a scheme")
    v.add_argument("--scheme", required=True, help="scheme JSON path, or - for stdin")
    v.add_argument("--privacy", choices=["exact", "ambiguity", "weak"], default="exact")
    v.add_argument("--min-ambiguity", type=int, default=2)
    v.add_argument("--cap", type=int, default=10**7, help="enumeration cap for exact privacy")
    v.add_argument("--format", choices=["json", "table"], default="json")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="run an exhaustive impossibility search")
    s.add_argument("which", choices=["sub2", "sub3-uncoded"])
    s.add_argument("--no-privacy-condition", action="store_true")
    s.add_argument("--restricted", action="store_true", help="sub3-uncoded: only 2+1 caches")
    s.add_argument("--progress", action="store_true")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="include elapsed time in the report")
    s.add_argument("--format", choices=["json", "csv", "table"], default="json")
    s.set_defaults(func=cmd_search)

    t = sub.add_parser("tradeoff", help="print the (2,2) private trade-off vertices")
    t.add_argument("--files", type=int, default=2)
    t.add_argument("--users", type=int, default=2)
    t.add_argument("--format", choices=["json", "csv", "table"], default="csv")
    t.set_defaults(func=cmd_tradeoff)

    c = sub.add_parser("compare-subpack", help="full vs partial privacy subpacketization")
    c.add_argument("--files", type=int, required=True)
    c.add_argument("--users", type=int, required=True)
    c.add_argument("--memory", type=_fraction, required=True)
    c.add_argument("--level", type=int, required=True)
    c.add_argument("--format", choices=["json", "csv", "table"], default="table")
    c.set_defaults(func=cmd_compare)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"privcache: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"privcache: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
