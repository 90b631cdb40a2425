"""Command-line interface.

Exit codes: 0 all checks pass, 1 a comparison failed, 2 usage or parse
error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import __version__
from .algebra import ContractViolation, ResourceError, enumerate_basis
from .bokstedt import bokstedt_run, default_max_degree, ep_spec
from .ext import adams_e2_oracle, compare_tables, ext_minimal_resolution
from .grammar import ParseError, parse_element, parse_spec
from .plotting import ext_chart, page_chart, series_chart
from .reports import Report, pretty_json
from .sseq import page_records
from .tate import TateWindow, default_tate_window, tate_full

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(out: Path | None, name: str, text: str) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def _emit_report(report: Report, fmt: str) -> str:
    return pretty_json(report.to_json()) if fmt == "json" else report.text() + "\n"


# subcommands -----------------------------------------------------------------


def cmd_basis(args) -> int:
    spec = parse_spec(args.spec, args.prime)
    hi = args.max_degree
    lo = args.min_degree
    basis = enumerate_basis(spec, lo, hi)
    rows = [(d, len(basis[d]), " ".join(m.label() for m in basis[d])) for d in range(lo, hi + 1)]
    if args.format == "json":
        doc = {"schema": "redshift/basis/1", "spec": spec.label(), "prime": spec.p,
               "degrees": [{"degree": d, "dim": k, "basis": ms.split() if ms else []}
                           for d, k, ms in rows]}
        text = pretty_json(doc)
    elif args.format == "csv":
        text = _csv(["degree", "dim", "basis"], rows)
    else:
        text = "".join(f"degree {d}: {k}" + (f"  [{ms}]" if args.list and ms else "") + "\n"
                       for d, k, ms in rows)
    sys.stdout.write(text)
    _write(args.out, "basis.csv", _csv(["degree", "dim", "basis"], rows))
    _write(args.out, "series.svg", series_chart([(d, k, k) for d, k, _ in rows], spec.label()))
    return EXIT_OK


def cmd_bokstedt(args) -> int:
    D = default_max_degree(args.prime, args.height) if args.max_degree is None else args.max_degree
    res = bokstedt_run(args.prime, args.height, max_degree=D, r_max=args.r_max)
    sys.stdout.write(_emit_report(res.report, args.format))
    if args.out is not None:
        from .algebra import bigraded_profile
        want = bigraded_profile(ep_spec(args.prime, args.height), res.window)
        want = want.restrict(res.ep.is_interior).as_dict()
        got = res.ep.profile().as_dict()
        keys = sorted(set(want) | set(got))
        _write(args.out, "report.json", pretty_json(res.report.to_json()))
        _write(args.out, "ep_profile.csv", _csv(
            ["s", "t", "computed", "expected"],
            [(s, t, got.get((s, t), 0), want.get((s, t), 0)) for s, t in keys]))
        _write(args.out, "ep_page.json", pretty_json(page_records(res.ep)))
        arrows = [(bd, res.e2.target(*bd)) for bd, m in sorted(res.e2.diff.items()) if m.any()]
        _write(args.out, "e2_page.svg", page_chart(res.e2.profile(False).as_dict(),
                                                   f"E^{args.prime - 1}, BP<{args.height}>", arrows))
        _write(args.out, "ep_page.svg", page_chart(got, f"E^{args.prime}, BP<{args.height}>"))
    return EXIT_OK if res.report.passed else EXIT_FAIL


def cmd_tate(args) -> int:
    default = default_tate_window(args.prime, args.height)
    tw = TateWindow(default.c if args.cols is None else args.cols,
                    default.T if args.max_degree is None else args.max_degree)
    res = tate_full(args.prime, args.height, tw, r_max=args.r_max)
    sys.stdout.write(_emit_report(res.report, args.format))
    if args.out is not None:
        _write(args.out, "report.json", pretty_json(res.report.to_json()))
        if res.e3 is not None:
            col = res.e3.column
            _write(args.out, "e3_column0.csv", _csv(
                ["t", "dim", "classes"],
                [(t, len(col[t]), " ".join(c.label for c in col[t])) for t in sorted(col)]))
            _write(args.out, "e3_page.svg", page_chart(res.e3.profile().as_dict(),
                                                       f"Tate E^3, THH(BP<{args.height}>)"))
            table = next((c.data.get("table") for c in res.report.checks if "table" in c.data), None)
            if table:
                _write(args.out, "redshift.csv", _csv(["degree", "computed", "expected"], table))
                _write(args.out, "redshift.svg", series_chart(
                    [tuple(r) for r in table], f"H_*(BP<{args.height + 1}>) (x) E(nu)"))
        if res.e2 is not None:
            _write(args.out, "e2_strip.json", pretty_json(page_records(res.e2)))
    return EXIT_OK if res.report.passed else EXIT_FAIL


def cmd_ext(args) -> int:
    table = ext_minimal_resolution(args.prime, args.height, args.s_max, args.t_max)
    oracle = adams_e2_oracle(args.prime, args.height, args.s_max, args.t_max)
    bad = compare_tables(table.dims, oracle)
    title = f"Ext over E(Q_0..Q_{args.height}), p={args.prime}"
    if args.format == "svg" or args.command == "chart":
        text = ext_chart(table.dims, title)
    elif args.format == "json":
        doc = table.to_json(args.height)
        doc["matches_polynomial_oracle"] = bad is None
        text = pretty_json(doc)
    elif args.format == "csv":
        text = _csv(["s", "t", "stem", "dim"], [(r["s"], r["t"], r["stem"], r["dim"])
                                                 for r in table.records()])
    else:
        lines = [f"{title}: s <= {args.s_max}, t <= {args.t_max}"]
        lines += [f"  (s={r['s']}, t={r['t']}, stem={r['stem']}): {r['dim']}" for r in table.records()]
        lines.append("P(v_0..v_n) monomial counts: " + ("PASS" if bad is None else f"FAIL at {bad}"))
        text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    _write(args.out, "ext.csv", _csv(["s", "t", "stem", "dim"],
                                     [(r["s"], r["t"], r["stem"], r["dim"]) for r in table.records()]))
    _write(args.out, "ext.json", pretty_json(table.to_json(args.height)))
    _write(args.out, "ext.svg", ext_chart(table.dims, title))
    return EXIT_OK if bad is None else EXIT_FAIL


def cmd_eval(args) -> int:
    spec = parse_spec(args.spec, args.prime)
    x = parse_element(args.expr, spec)
    sys.stdout.write(f"{x}\n")
    return EXIT_OK


# parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="redshift", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"redshift {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "json")):
        p.add_argument("-p", "--prime", type=int, default=3)
        p.add_argument("--format", choices=formats, default="text")
        p.add_argument("--out", type=Path, default=None,
                       help="directory for CSV tables, JSON dumps and SVG figures")

    b = sub.add_parser("basis", help="monomial basis of a spec expression")
    b.add_argument("spec")
    b.add_argument("--max-degree", type=int, default=20)
    b.add_argument("--min-degree", type=int, default=0)
    b.add_argument("--list", action="store_true", help="print the monomials")
    common(b, ("text", "json", "csv"))
    b.set_defaults(func=cmd_basis)

    for name, func in (("bokstedt", cmd_bokstedt), ("tate", cmd_tate)):
        s = sub.add_parser(name, help=f"run the {name} pipeline")
        s.add_argument("-n", "--height", type=int, default=1)
        s.add_argument("--max-degree", type=int, default=None,
                       help="total degree bound (bokstedt) or row bound (tate); default 2p^(n+2)")
        s.add_argument("--r-max", type=int, default=None)
        if name == "tate":
            s.add_argument("--cols", type=int, default=None,
                           help="columns s in [-2c, 2c]; default p^(n+1) + 2")
        common(s)
        s.set_defaults(func=func)

    for name in ("ext", "chart"):
        e = sub.add_parser(name, help="Ext over E(Q_0..Q_n)" if name == "ext" else "Ext chart as SVG")
        e.add_argument("-n", "--height", type=int, default=1)
        e.add_argument("--s-max", type=int, default=6)
        e.add_argument("--t-max", type=int, default=40)
        common(e, ("text", "json", "svg", "csv"))
        e.set_defaults(func=cmd_ext)

    v = sub.add_parser("eval", help="evaluate an element expression in a spec")
    v.add_argument("spec")
    v.add_argument("expr")
    v.add_argument("-p", "--prime", type=int, default=3)
    v.set_defaults(func=cmd_eval)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_USAGE
    except ResourceError as exc:
        sys.stderr.write(f"resource limit: {exc}\n")
        return EXIT_RESOURCE
    except ContractViolation as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
