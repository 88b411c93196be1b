"""Command-line front end: ``prolong {model,tanaka,oracle,verify,cross-check}``.

Exit status is 0 when every check passes, 1 when a check fails (or a
prolongation hits the degree cap) and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from .contact import OracleError, bidegree_table, oracle_full
from .lie_core import AlgebraError, GradedAlgebra
from .models import make_gprime, make_heisenberg, make_m, make_s
from .polynomials import polys_to_json
from .prolongation import ProlongationError, tanaka
from .verify import Report, cross_check, oracle_report, tanaka_report

# k values above this need --large in ``verify``
LARGE_K = 6

FAMILIES = {
    "m": make_m,
    "gprime": make_gprime,
    "heisenberg": lambda k: make_heisenberg(k)[0],
    "s": lambda k: make_s(k).algebra,
}


class UsageError(Exception):
    pass


def parse_k_range(text: str) -> list[int]:
    """'4' -> [4]; '3..6' -> [3, 4, 5, 6]."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad k range {text!r}; expected N or A..B") from None
    if lo > hi:
        raise UsageError(f"empty k range {text!r}")
    return list(range(lo, hi + 1))


def _dims_table(dims: dict[int, int], fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        out = {"dims": {str(d): n for d, n in dims.items()}, "total_dim": sum(dims.values())}
        out.update(extra or {})
        return json.dumps(out, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "dim"])
        for d, n in dims.items():
            w.writerow([d, n])
        return buf.getvalue().rstrip("\n")
    lines = [f"{'degree':>6}  {'dim':>5}"]
    lines += [f"{d:>6}  {n:>5}" for d, n in dims.items()]
    lines.append(f"{'total':>6}  {sum(dims.values()):>5}")
    return "\n".join(lines)


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_model(args) -> int:
    make = FAMILIES[args.family]
    try:
        alg = make(args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(alg.to_json(), args.emit)
    return 0


def _load_algebra(path: str) -> GradedAlgebra:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return GradedAlgebra.from_json(text)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"{path} is not a valid algebra file: {exc}") from None


def cmd_tanaka(args) -> int:
    alg = _load_algebra(args.input)
    res = tanaka(alg, max_degree=args.max_degree)
    if args.format == "json":
        print(json.dumps(res.to_dict(), indent=2))
    else:
        print(_dims_table(res.dims(), args.format))
        if args.format == "table":
            print(f"nu = {res.nu} ({res.terminated})")
    return 0 if res.terminated == "vanished" else 1


def cmd_oracle(args) -> int:
    res = oracle_full(args.k)
    if args.format == "poly":
        for comp in res.components:
            print(f"# component {comp.index} (dim {comp.dim})")
            for p in comp.polynomials():
                print(p.to_text())
        return 0
    if args.format == "json" and args.polynomials:
        comps = {str(c.index): json.loads(polys_to_json(c.polynomials())) for c in res.components}
        print(json.dumps({"k": args.k, "components": comps}, indent=2))
        return 0
    table = bidegree_table(args.k, res)
    extra = {"bidegree": [[a, b, n] for (a, b), n in table.items()]}
    print(_dims_table(res.dims(), args.format, extra))
    return 0


def _run_reports(fn: Callable[[int], Report], ks: list[int], jobs: int) -> list[Report]:
    if jobs <= 1 or len(ks) <= 1:
        return [fn(k) for k in ks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, ks))  # map keeps k order


def _emit_reports(reports: list[Report], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps([r.to_dict() for r in reports], indent=2))
        return
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "method", "check", "expected", "computed", "pass"])
        for r in reports:
            for c in r.checks:
                w.writerow([r.k, r.method, c.name, c.expected, c.computed, c.passed])
        print(buf.getvalue().rstrip("\n"))
        return
    for r in reports:
        print(r.summary())


def cmd_verify(args) -> int:
    ks = parse_k_range(args.k)
    if min(ks) < 3:
        raise UsageError("verify needs k >= 3")
    if max(ks) > LARGE_K:
        if not args.large:
            raise UsageError(f"k > {LARGE_K} is opt-in: pass --large")
        print(f"warning: k > {LARGE_K} requested; coefficients and run time grow quickly", file=sys.stderr)
    fn = oracle_report if args.method == "oracle" else tanaka_report
    reports = _run_reports(fn, ks, args.jobs)
    _emit_reports(reports, args.format)
    return 0 if all(r.passed for r in reports) else 1


def cmd_cross_check(args) -> int:
    ks = parse_k_range(args.k)
    if min(ks) < 3:
        raise UsageError("cross-check needs k >= 3")
    reports = _run_reports(cross_check, ks, args.jobs)
    _emit_reports(reports, args.format)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        if args.format == "table":
            print(f"k={r.k} engine:  {r.dims}")
            print(f"k={r.k} oracle:  {r.oracle_dims}")
    return 0 if not failed else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="prolong", description="Exact Tanaka prolongation toolkit.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("model", help="emit one of the built-in algebras as JSON")
    m.add_argument("--family", choices=sorted(FAMILIES), required=True)
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--emit", metavar="PATH", help="output file (default: stdout)")
    m.set_defaults(func=cmd_model)

    t = sub.add_parser("tanaka", help="prolong an algebra read from JSON")
    t.add_argument("--input", required=True, help="algebra JSON file, or - for stdin")
    t.add_argument("--max-degree", type=int, default=None)
    t.add_argument("--format", choices=["table", "json", "csv"], default="table")
    t.set_defaults(func=cmd_tanaka)

    o = sub.add_parser("oracle", help="polynomial model of n(k) + s(k)")
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--format", choices=["table", "json", "csv", "poly"], default="table")
    o.add_argument("--polynomials", action="store_true", help="with --format json, dump bases")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="check the dimension and depth formulas")
    v.add_argument("--k", default="3..6", help="k or range A..B (default 3..6)")
    v.add_argument("--method", choices=["tanaka", "oracle"], default="tanaka")
    v.add_argument("--large", action="store_true", help=f"allow k > {LARGE_K}")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=["table", "json", "csv"], default="table")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("cross-check", help="engine against oracle")
    c.add_argument("--k", default="3..5")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--format", choices=["table", "json", "csv"], default="table")
    c.set_defaults(func=cmd_cross_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"prolong: error: {exc}", file=sys.stderr)
        return 2
    except (AlgebraError, ValueError) as exc:
        print(f"prolong: error: {exc}", file=sys.stderr)
        return 2
    except (OracleError, ProlongationError) as exc:
        print(f"prolong: check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
