"""Command-line front end.

Every engine capability is exposed as a subcommand; Q is given as a
comma-separated list of positive integers ('' or '0' for the empty set),
e.g. ``rcl count 1,2,4 --n 20``.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report as report_mod
from .bijections import perm_count_1m, perm_count_jm, verify_subword_theorem
from .core import (
    DifferenceSet,
    LimitError,
    comb_from_differences,
    is_well_based,
    parse_differences,
)
from .digraph import (
    analysis_to_json,
    analyze_cycles,
    build_digraph,
    count_via_transfer,
    enumerate_metatiles,
    is_finite_family,
    to_dot,
)
from .oracles import (
    format_table,
    format_totals,
    shift_to_subsets,
    subset_count_oracle,
    tiling_count_oracle,
)
from .recurrences import (
    classify,
    evaluate_recurrence,
    evaluate_totals,
    format_recurrence,
    gf_from_recurrence,
    gf_to_json,
    gf_well_based,
    recurrence_for,
    recurrence_to_json,
)

DEFAULT_N = 32  # matches the word-width limit of the reference subset program


def subset_table(diffs: DifferenceSet, n_max: int, want_triangle: bool = True):
    """S table for 0..n_max via the digraph transfer DP and the index shift."""
    dg = build_digraph(comb_from_differences(diffs))
    b = count_via_transfer(dg, n_max + diffs.q, want_triangle)
    return shift_to_subsets(b, diffs.q)


def cmd_count(args) -> int:
    diffs = parse_differences(args.q)
    table = subset_table(diffs, args.n, want_triangle=False)
    print(format_totals(table))
    return 0


def cmd_table(args) -> int:
    diffs = parse_differences(args.q)
    table = subset_table(diffs, args.n)
    if args.json:
        print(json.dumps({"rows": [list(table.row(n)) for n in range(args.n + 1)]}))
    else:
        print(format_table(table))
    return 0


def cmd_oracle(args) -> int:
    diffs = parse_differences(args.q)
    table = subset_count_oracle(diffs, args.n)
    print(format_table(table) if args.triangle else format_totals(table))
    return 0


def cmd_comb(args) -> int:
    comb = comb_from_differences(parse_differences(args.q))
    suffix = f" ({comb.length}-omino)" if comb.gapless else ""
    print(f"{comb}, length {comb.length}{suffix}")
    return 0


def cmd_digraph(args) -> int:
    dg = build_digraph(comb_from_differences(parse_differences(args.q)))
    print(to_dot(dg))
    return 0


def cmd_metatiles(args) -> int:
    comb = comb_from_differences(parse_differences(args.q))
    dg = build_digraph(comb)
    enum = enumerate_metatiles(dg, args.max_len)
    print(f"finite family: {'yes' if is_finite_family(comb) else 'no'}")
    print(f"complete up to length {args.max_len}: {'yes' if enum.complete else 'no'}")
    print("length combs multiplicity")
    for ln, k, mult in enum.items:
        print(f"{ln:>6} {k:>5} {mult:>12}")
    return 0


def cmd_cycles(args) -> int:
    dg = build_digraph(comb_from_differences(parse_differences(args.q)))
    analysis = analyze_cycles(dg)
    data = analysis_to_json(analysis)
    if args.json:
        print(json.dumps(data, indent=2))
        return 0
    print(f"cycles: {len(analysis.cycles)}")
    for key in ("inner", "outer"):
        print(f"{key}:")
        for c in data[key]:
            print(f"  {c['symbol']}  length={c['length']} combs={c['combs']}")
    print(f"common node: {data['common_node']}")
    for c in data["common_circuits"]:
        print(f"  circuit {c['symbol']}  length={c['length']} combs={c['combs']}")
    return 0


def cmd_recurrence(args) -> int:
    diffs = parse_differences(args.q)
    tag, rec = recurrence_for(diffs)
    if rec is None:
        print(
            "no finite recurrence synthesized (inner cycles without a common "
            "node); the transfer DP path still counts exactly"
        )
        return 0
    if args.json:
        data = recurrence_to_json(rec)
        data["method"] = tag
        print(json.dumps(data, indent=2))
    else:
        print(f"method: {tag}")
        print(format_recurrence(rec))
        print(format_recurrence(rec, triangle=False))
    return 0


def cmd_gf(args) -> int:
    diffs = parse_differences(args.q)
    tag, rec = recurrence_for(diffs)
    if rec is None:
        print("no rational generating function available (no finite recurrence)", file=sys.stderr)
        return 1
    gf = gf_from_recurrence(rec, diffs.q)
    if args.json:
        data = gf_to_json(gf)
        data["method"] = tag
        data["series"] = list(gf.series(args.n))
        print(json.dumps(data, indent=2))
    else:
        print(f"G(x) = {gf}")
        print("series:", " ".join(str(v) for v in gf.series(args.n)))
    return 0


def run_verify(diffs: DifferenceSet, n_max: int) -> list[tuple[str, bool, str]]:
    """All cross-checks for one Q; returns (name, passed, detail) rows."""
    results: list[tuple[str, bool, str]] = []
    n_oracle = min(n_max, 18)
    oracle = subset_count_oracle(diffs, n_oracle)
    engine = subset_table(diffs, n_oracle)
    ok = oracle == engine
    results.append(("transfer DP vs subset oracle", ok, f"n <= {n_oracle}"))

    n_tiling = min(n_max, 10)
    b_oracle = tiling_count_oracle(diffs, n_tiling + diffs.q)
    bridge = shift_to_subsets(b_oracle, diffs.q)
    ok = all(
        bridge.by(n, k) == oracle.by(n, k)
        for n in range(n_tiling + 1)
        for k in range(n + 1)
    )
    results.append(("tiling oracle bridge S_{n,k} = B_{n+q,k}", ok, f"n <= {n_tiling}"))

    tag, rec = recurrence_for(diffs)
    if rec is not None:
        dg = build_digraph(comb_from_differences(diffs))
        dp = count_via_transfer(dg, 40)
        ok = evaluate_recurrence(rec, 40) == dp
        results.append((f"recurrence ({tag}) vs transfer DP", ok, "n <= 40"))
        ok = evaluate_totals(rec, 40) == dp.totals
        results.append(("totals recurrence vs triangle row sums", ok, "n <= 40"))
        gf = gf_from_recurrence(rec, diffs.q)
        ok = gf.series(n_oracle) == oracle.totals
        results.append(("generating-function series vs oracle", ok, f"n <= {n_oracle}"))
    else:
        results.append(
            (f"recurrence ({tag})", True, "skipped: no common node, DP-only Q")
        )
    if diffs.elements and is_well_based(diffs):
        gf = gf_well_based(diffs)
        ok = gf.series(n_oracle) == oracle.totals
        results.append(("well-based closed-form GF vs oracle", ok, f"n <= {n_oracle}"))
    return results


def cmd_verify(args) -> int:
    diffs = parse_differences(args.q)
    results = run_verify(diffs, args.n)
    width = max(len(name) for name, _, _ in results)
    failed = False
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  ({detail})")
        failed |= not ok
    return 1 if failed else 0


def cmd_bijection(args) -> int:
    if args.kind == "perm-jm":
        counts = perm_count_jm(args.n, args.m, args.j)
        q = DifferenceSet(tuple(args.m * i for i in range(1, args.j + 1)))
    elif args.kind == "perm-1m":
        counts = perm_count_1m(args.n, args.m)
        q = DifferenceSet((1, args.m))
    else:  # subword
        report = verify_subword_theorem(args.omega, args.n)
        if args.json:
            print(json.dumps(report.to_json(), indent=2))
        else:
            print(report.to_text())
        return 0 if report.all_match else 1
    oracle = subset_count_oracle(q, args.n)
    rows = [
        (k, counts.k(k), oracle.by(args.n, k))
        for k in range(args.n + 1)
        if counts.k(k) or oracle.by(args.n, k)
    ]
    if args.json:
        print(
            json.dumps(
                {
                    "q": list(q.elements),
                    "total": counts.total,
                    "oracle_total": oracle.total(args.n),
                    "by_k": [
                        {"k": k, "permutations": p, "subsets": s} for k, p, s in rows
                    ],
                }
            )
        )
    else:
        print(f"Q={q}  permutations={counts.total}  subsets={oracle.total(args.n)}")
        print(f"{'k':>3} {'perms':>8} {'subsets':>8}  match")
        for k, p, s in rows:
            print(f"{k:>3} {p:>8} {s:>8}  {'yes' if p == s else 'NO'}")
    ok = counts.total == oracle.total(args.n) and all(p == s for _, p, s in rows)
    return 0 if ok else 1


def cmd_report(args) -> int:
    diffs = parse_differences(args.q)
    paths = report_mod.write_report(diffs, args.n, args.out)
    for path in paths:
        print(path)
    return 0


def cmd_classify(args) -> int:
    diffs = parse_differences(args.q)
    print(classify(diffs))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcl",
        description="count subsets of {1..n} avoiding prescribed pairwise differences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, n_default=DEFAULT_N):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("q", help="comma-separated differences, e.g. 1,2,4 ('' or 0 for empty)")
        p.add_argument("--n", type=int, default=n_default, help="largest n")
        p.set_defaults(fn=fn)
        return p

    add("count", cmd_count, "S_n totals row")
    add("table", cmd_table, "S_{n,k} triangle").add_argument(
        "--json", action="store_true"
    )
    p = add("oracle", cmd_oracle, "brute-force subset oracle", n_default=16)
    p.add_argument("--triangle", action="store_true")
    p = sub.add_parser("comb", help="tooth/gap profile of the comb for Q")
    p.add_argument("q")
    p.set_defaults(fn=cmd_comb)
    p = sub.add_parser("digraph", help="metatile digraph in DOT form")
    p.add_argument("q")
    p.add_argument("--dot", action="store_true", help="accepted for symmetry; DOT is the output")
    p.set_defaults(fn=cmd_digraph)
    p = sub.add_parser("metatiles", help="first-return walks up to a length bound")
    p.add_argument("q")
    p.add_argument("--max-len", type=int, default=64)
    p.set_defaults(fn=cmd_metatiles)
    p = sub.add_parser("cycles", help="cycle analysis of the digraph")
    p.add_argument("q")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_cycles)
    p = sub.add_parser("recurrence", help="best available recursion relation")
    p.add_argument("q")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_recurrence)
    p = add("gf", cmd_gf, "rational generating function for S_n", n_default=20)
    p.add_argument("--json", action="store_true")
    add("verify", cmd_verify, "run every cross-check for one Q", n_default=14)
    p = sub.add_parser("classify", help="closed-form family tag for Q")
    p.add_argument("q")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("bijection", help="permutation / subword bijection checks")
    p.add_argument("kind", choices=["perm-jm", "perm-1m", "subword"])
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--omega", default="10110")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_bijection)

    p = add("report", cmd_report, "write delimited tables and figures", n_default=20)
    p.add_argument("--out", default="rcl-report")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (LimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
