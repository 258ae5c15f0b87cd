"""Command-line front end: ``lcnindex <verb> [options]``."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from typing import Callable

import mpmath

from .algnum import AlgReal, parse_value
from .classify import (
    CEILING,
    ClassifyError,
    admissible_index_values,
    kl_table,
    section4_verdict,
)
from .double import DoubleError, a_odd_double, product_double
from .embed import (
    TABLE1_COLUMNS,
    TABLE1_EXPECTED,
    EmbeddingError,
    braiding_report,
    double_for,
    table1_diagrams,
)
from .fusion import FusionError, d2n_even_ring, verify_axioms
from .graph import (
    BipartiteGraph,
    GraphError,
    a_infinity,
    dynkin,
    graph_verdict,
    haagerup_candidate,
    haagerup_corpus,
    parse_diagram_name,
    parse_graphs,
)

EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 1, 2, 3
FORMATS = ("pretty", "json", "tsv")


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False)


def _tsv(rows) -> str:
    return "\n".join("\t".join(str(c) for c in row) for row in rows)


# ---------------------------------------------------------------------------
# verbs


def table1_result(data=None, limit: int = 25) -> dict:
    per: dict[str, int] = {}
    counts: dict[str, int | None] = {}
    for col, diagrams in table1_diagrams(limit).items():
        vals = []
        for d in diagrams:
            per[d] = braiding_report(d, data, limit).count
            vals.append(per[d])
        counts[col] = vals[0] if len(set(vals)) == 1 else None
    mismatches = [c for c in TABLE1_COLUMNS if counts[c] != TABLE1_EXPECTED[c]]
    return {
        "columns": list(TABLE1_COLUMNS),
        "counts": counts,
        "expected": dict(TABLE1_EXPECTED),
        "per_diagram": per,
        "ok": not mismatches,
        "mismatches": mismatches,
    }


def cmd_table1(args) -> int:
    res = table1_result(args.data_dir, args.limit)
    shown = ["?" if res["counts"][c] is None else res["counts"][c] for c in TABLE1_COLUMNS]
    if args.format == "json":
        print(_dump(res))
    elif args.format == "tsv":
        print(_tsv([TABLE1_COLUMNS, shown]))
    else:
        width = max(len(c) for c in TABLE1_COLUMNS) + 2
        print("".join(c.rjust(width) for c in TABLE1_COLUMNS))
        print("".join(str(v).rjust(width) for v in shown))
        if res["mismatches"]:
            print("mismatch in: " + ", ".join(res["mismatches"]))
    return 0 if res["ok"] else EXIT_FAIL


def cmd_index_values(args) -> int:
    ceiling = parse_value(args.max) if args.max else CEILING
    if ceiling > CEILING:
        print("lcnindex: list is complete only up to 3+sqrt(3); showing values up to there", file=sys.stderr)
        ceiling = CEILING
    vals = admissible_index_values(ceiling)
    if args.format == "json":
        print(_dump([v.to_json() for v in vals]))
    elif args.format == "tsv":
        print(_tsv([(v.label, v.decimal(), v.realization) for v in vals]))
    else:
        for v in vals:
            print(f"{v.label} ≈ {v.decimal()}    {v.realization}")
    return 0


def builtin_graph(name: str, depth: int, data=None) -> BipartiteGraph:
    if name.lower() in ("ainf", "a-infinity", "a_inf"):
        return a_infinity(depth)
    if name.lower().startswith("haagerup:"):
        return haagerup_candidate(name.split(":", 1)[1], depth, data)
    family, n = parse_diagram_name(name)
    return dynkin(family, n)


def cmd_graph_check(args) -> int:
    src = args.graph
    try:
        graphs = [builtin_graph(src, args.depth, args.data_dir)]
    except (GraphError, KeyError):
        try:
            with open(src, encoding="utf-8") as fh:
                graphs = parse_graphs(fh.read())
        except FileNotFoundError:
            raise FileNotFoundError(src) from None
    rows = []
    for G in graphs:
        v = graph_verdict(G)
        rows.append({"graph": G.name, **v.to_json(), "excluded": v.excluded})
    if args.format == "json":
        print(_dump(rows if len(rows) > 1 else rows[0]))
    elif args.format == "tsv":
        keys = ["graph", "pendant_ok", "triple_point_distance", "corollary_excluded", "excluded"]
        print(_tsv([keys] + [[r[k] for k in keys] for r in rows]))
    else:
        for r in rows:
            print(f"graph {r['graph']}")
            print(f"  pendant_ok: {r['pendant_ok']}")
            if r["pendant_witness"]:
                print("  pendant_witness: " + ", ".join(f"{b}->{w}" for b, w in sorted(r["pendant_witness"].items())))
            print(f"  triple_point_distance: {r['triple_point_distance']}")
            print(f"  corollary_excluded: {r['corollary_excluded']}")
    return 0


def cmd_braidings(args) -> int:
    rep = braiding_report(args.diagram, args.data_dir, args.limit)
    if args.format == "json":
        print(rep.dumps())
    elif args.format == "tsv":
        objs = list(rep.embeddings[0]) if rep.embeddings else []
        print(_tsv([objs] + [[e[o] for o in objs] for e in rep.embeddings]) if objs else "")
    else:
        print(f"{rep.diagram}: {rep.count} embedding(s)")
        for e in rep.embeddings:
            print("  " + ", ".join(f"{k}->{v}" for k, v in e.items()))
        for entry in rep.pruning_log:
            print(f"  {entry['object']}: candidates {', '.join(entry['candidates']) or '-'}")
            for item in entry.get("search", []):
                line = f"    {item['image']}: {item['embeddings']} embedding(s)"
                if "eliminated_by" in item:
                    line += f"; {item['eliminated_by']}"
                print(line)
    return 0


def cmd_double_show(args) -> int:
    D = double_for(args.diagram, args.data_dir, args.limit)
    R, B = D.ring, D.base
    if args.format == "json":
        print(_dump(D.to_json()))
        return 0
    rows = []
    for b in range(R.rank):
        res = " + ".join(
            (B.objects[l] if c == 1 else f"{c}*{B.objects[l]}") for l, c in sorted(D.restriction(b).items())
        )
        rows.append((R.objects[b], R.dims[b].decimal(12), res))
    if args.format == "tsv":
        print(_tsv([("object", "dim", "restriction")] + rows))
    else:
        print(f"{D.name}: {R.rank} objects over {B.name} ({D.source})")
        w = max(len(r[0]) for r in rows) + 2
        for name, dim, res in rows:
            print(f"  {name.ljust(w)}{dim}   {res}")
    return 0


def cmd_classify(args) -> int:
    v = section4_verdict(args.diagram, args.data_dir)
    if args.format == "json":
        print(_dump(v.to_json()))
    elif args.format == "tsv":
        print(_tsv([(v.diagram, "admissible" if v.admissible else "excluded", v.index.decimal(12), v.headline())]))
    else:
        print(v.headline())
        print(f"  index: {v.index.decimal(12)}")
        for claim, anchor in v.reasons:
            print(f"  - {claim}  [{anchor}]")
    return 0


# ---------------------------------------------------------------------------
# verify


def _check_algnum() -> str | None:
    rng = random.Random(7)

    def rand(n):
        return AlgReal(n, [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)])

    def real(a, n):
        beta = 2 * mpmath.cos(mpmath.pi / n)
        return sum(mpmath.mpf(c.numerator) / c.denominator * beta**i for i, c in enumerate(a.coeffs))

    with mpmath.workdps(50):
        for _ in range(40):
            n = rng.choice([5, 7, 8, 10, 12, 15])
            a, b = rand(n), rand(n)
            if (a + b) - b != a:
                return f"additive law fails at conductor {n}"
            if not b.is_zero() and (a * b) * b.inverse() != a:
                return f"multiplicative law fails at conductor {n}"
            diff = real(a, n) - real(b, n)
            approx = 0 if abs(diff) < mpmath.mpf(10) ** -40 else (1 if diff > 0 else -1)
            if (a > b) - (a < b) != approx:
                return f"ordering disagrees with 50-digit evaluation at conductor {n}"
    return None


def _check_graphs(data=None) -> str | None:
    corpus = [("A", n) for n in range(2, 31)] + [("D", n) for n in range(4, 31, 2)] + [("E", 6), ("E", 7), ("E", 8)]
    passing = {f"{f}{n}" for f, n in corpus if graph_verdict(dynkin(f, n)).pendant_ok}
    if passing != {"A2", "A3", "A5", "D4", "D6"}:
        return f"pendant criterion passes {sorted(passing)}"
    for G in list(haagerup_corpus(data).values()) + [a_infinity(d) for d in range(5, 51)]:
        if not graph_verdict(G).excluded:
            return f"{G.name} survives the screen"
    return None


def _check_rings(limit: int) -> str | None:
    from .fusion import su2_ring

    for k in range(1, 13):
        if not verify_axioms(su2_ring(k)).ok:
            return f"SU(2)_{k} fails the axioms"
    for n in range(2, min(limit, 8) + 1):
        if not verify_axioms(d2n_even_ring(n)).ok:
            return f"D_{2 * n} even ring fails the axioms"
    return None


def _check_doubles(limit: int) -> str | None:
    for n in range(1, limit + 1):
        D = a_odd_double(n)
        if not D.ok():
            return f"A_{2 * n + 1} double: {D.check()}"
    for n in range(2, limit + 1):
        D = product_double(d2n_even_ring(n))
        if not D.ok():
            return f"D_{2 * n} double: {D.check()}"
    return None


def _check_classify(data=None) -> str | None:
    bad = kl_table(data).bad_records()
    if bad:
        return f"classification table records fail: {bad}"
    names = [f"A{n}" for n in range(2, 31)] + [f"D{n}" for n in range(4, 31, 2)] + ["E6", "E8"]
    adm = {d for d in names if section4_verdict(d, data).admissible}
    if adm != {"A2", "A3", "A5", "D4", "D6"}:
        return f"admissible set is {sorted(adm)}"
    return None


def _check_table1(data=None) -> str | None:
    res = table1_result(data)
    return None if res["ok"] else f"mismatch in {res['mismatches']}"


def invariant_suite(data=None, limit: int = 12) -> list[tuple[str, Callable[[], str | None]]]:
    return [
        ("algnum: field laws and certified order", _check_algnum),
        ("graph: pendant and distance screens", lambda: _check_graphs(data)),
        ("fusion: ring axioms", lambda: _check_rings(limit)),
        ("double: exact double-system identities", lambda: _check_doubles(limit)),
        ("classify: table records and verdicts", lambda: _check_classify(data)),
        ("embed: braiding counts", lambda: _check_table1(data)),
    ]


def cmd_verify(args) -> int:
    results = []
    for name, fn in invariant_suite(args.data_dir, args.limit if args.limit != 25 else 12):
        t0 = time.perf_counter()
        err = fn()
        results.append({"check": name, "ok": err is None, "detail": err or "", "seconds": round(time.perf_counter() - t0, 2)})
    if args.format == "json":
        print(_dump(results))
    elif args.format == "tsv":
        print(_tsv([(r["check"], "PASS" if r["ok"] else "FAIL", r["detail"]) for r in results]))
    else:
        for r in results:
            line = f"{'PASS' if r['ok'] else 'FAIL'}  {r['check']}  ({r['seconds']} s)"
            if r["detail"]:
                line += f": {r['detail']}"
            print(line)
    return 0 if all(r["ok"] for r in results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="pretty")
    common.add_argument("--data-dir", default=None, help="directory overriding the bundled data files")
    common.add_argument("--limit", type=int, default=25, help="largest diagram subscript for A/D searches")
    ap = argparse.ArgumentParser(prog="lcnindex", description="Index values and braidings of A-D-E fusion systems.")
    sub = ap.add_subparsers(dest="verb", required=True, metavar="verb")
    p = sub.add_parser("table1", parents=[common], help="braiding counts per diagram class")
    p.set_defaults(func=cmd_table1)
    p = sub.add_parser("index-values", parents=[common], help="admissible index values")
    p.add_argument("--max", default=None, help="ceiling, rational or e.g. 3+sqrt3")
    p.set_defaults(func=cmd_index_values)
    p = sub.add_parser("graph-check", parents=[common], help="pendant and distance screens")
    p.add_argument("graph", help="graph file or builtin (A5, D6, E6, Ainf, haagerup:H)")
    p.add_argument("--depth", type=int, default=9, help="window depth for Ainf")
    p.set_defaults(func=cmd_graph_check)
    for verb, fn, text in (
        ("braidings", cmd_braidings, "embeddings into the double"),
        ("double-show", cmd_double_show, "objects, dimensions and edges of the double"),
        ("classify", cmd_classify, "admissibility verdict"),
    ):
        p = sub.add_parser(verb, parents=[common], help=text)
        p.add_argument("diagram")
        p.set_defaults(func=fn)
    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "depth", 9) is not None and getattr(args, "depth", 9) < 5:
        ap.error("--depth must be at least 5")
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"lcnindex: missing data file: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, KeyError, GraphError, FusionError, DoubleError, EmbeddingError, ClassifyError) as exc:
        print(f"lcnindex: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
