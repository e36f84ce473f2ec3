"""Command line front end: ``splicecheck classify | check | sweep``.

Exit codes: 0 success, 2 usage error, 3 invalid pair system, 4 inconclusive
check, 5 cross-validation mismatch in a sweep.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from .builder import build_cover_graph
from .closedform import main_theorem_classify
from .curve import KINDS, TOPOLOGICAL, PairValidationError, classify_link, parse_pairs, to_topological
from .graph import diagram_to_text, graph_to_text
from .nw import PASS, VERDICT_INCONCLUSIVE, check_all, emit_splice_equations
from .sweep import CSV_COLUMNS, CSV_SCHEMA, sweep_domain, validate_instance

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_INCONCLUSIVE = 4
EXIT_MISMATCH = 5


def _int_list(text: str) -> List[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _n_value(text: str) -> int:
    value = _positive(text)
    if value < 2:
        raise argparse.ArgumentTypeError("--n must be at least 2")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splicecheck",
        description="Semigroup and congruence conditions for z^n = f(x,y) with f an irreducible plane curve germ.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p):
        p.add_argument("--pairs", required=True, help="pair system 'p1:x1,p2:x2,...'")
        p.add_argument("--kind", choices=KINDS, default=TOPOLOGICAL, help="how to read --pairs (default topological)")
        p.add_argument("--n", required=True, type=_n_value, help="exponent of z")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p_cls = sub.add_parser("classify", help="closed-form classification only")
    instance_args(p_cls)

    p_chk = sub.add_parser("check", help="build the resolution graph and check the conditions directly")
    instance_args(p_chk)
    p_chk.add_argument("--cap", type=_positive, default=None, help="search cap per edge (default $SPLICECHECK_CAP or 10^6)")
    p_chk.add_argument("--emit-equations", action="store_true", help="print splice diagram equations on PASS")
    p_chk.add_argument("--graph-dump", metavar="DIR", help="write canonical.graph, minimal.graph and splice.txt to DIR")

    p_sw = sub.add_parser("sweep", help="cross-validate the checker against the classification over a domain")
    p_sw.add_argument("--s", type=_int_list, default=[2, 3], help="numbers of pairs (default 2,3)")
    p_sw.add_argument("--p", type=_int_list, default=[2, 3], help="values for each p_k (default 2,3)")
    p_sw.add_argument("--a-count", type=_positive, default=3, help="smallest admissible a_k values per slot (default 3)")
    p_sw.add_argument("--n-min", type=_n_value, default=2)
    p_sw.add_argument("--n-max", type=_n_value, default=20)
    p_sw.add_argument("--p-last", type=_int_list, default=None, help="restrict p_s to these values")
    p_sw.add_argument("--include-non-qhs", action="store_true", help="keep instances whose link is not a QHS")
    p_sw.add_argument("--zhs-only", action="store_true", help="keep only integral homology sphere links")
    p_sw.add_argument("--no-oracles", action="store_true", help="skip closed-form determinant and pairing checks")
    p_sw.add_argument("--cap", type=_positive, default=None)
    p_sw.add_argument("--workers", type=_positive, default=1, help="worker processes (default 1)")
    p_sw.add_argument("--timing", action="store_true", help="fill the seconds column (output is then not reproducible)")
    p_sw.add_argument("--output", metavar="CSV", help="write rows here instead of stdout")
    return parser


def _emit(obj, as_json: bool, lines: Sequence[str]):
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def cmd_classify(args) -> int:
    ps = parse_pairs(args.pairs, args.kind)
    link = classify_link(ps, args.n)
    verdict = main_theorem_classify(ps, args.n)
    obj = {
        "schema": "splicecheck.classify/1",
        "pairs": ps.text(),
        "kind": ps.kind,
        "topological": to_topological(ps).text(),
        "n": args.n,
        "link_class": link.kind,
        "pathological": link.pathological,
        "verdict": verdict.kind,
        "witness": [list(x) for x in verdict.witness] if verdict.witness else None,
        "detail": verdict.detail,
    }
    lines = [verdict.kind, f"link: {link.kind}" + (" (pathological)" if link.pathological else "")]
    if verdict.detail:
        lines.append(f"reason: {verdict.detail}")
    if verdict.witness:
        lines.append("witness: " + " + ".join(f"{c}*{g}" for g, c in verdict.witness if c))
    _emit(obj, args.json, lines)
    return EXIT_OK


def cmd_check(args) -> int:
    ps = parse_pairs(args.pairs, args.kind)
    bundle = build_cover_graph(ps, args.n)
    report = check_all(bundle, args.cap)
    link = classify_link(ps, args.n)
    obj = report.to_dict()
    obj.update({"pairs": bundle.pairs.text(), "n": args.n, "link_class": link.kind})
    lines = [report.verdict, f"link: {link.kind}"]
    if report.det is not None:
        lines.append(f"det = {report.det}" + (" (integral homology sphere)" if report.det == 1 else ""))
    for e in report.edges:
        if e.semigroup == "trivial":
            continue
        lines.append(
            f"node {e.node} toward {e.target}: weight {e.weight}, generators {list(e.generators)}, "
            f"semigroup {e.semigroup}, congruence {e.congruence}"
        )
    for e in report.failures():
        which = "semigroup" if e.semigroup == "fails" else "congruence"
        lines.append(f"FAILED {which} condition at node {e.node} toward {e.target}")
    if args.emit_equations:
        if report.verdict != PASS:
            lines.append("no equations: the conditions do not hold")
            obj["equations"] = None
        else:
            eqs = emit_splice_equations(bundle.diagram, report)
            rendered = eqs.render()
            obj["equations"] = rendered
            obj["variables"] = [eqs.variables[w] for w in bundle.diagram.leaves]
            obj["homogeneous"] = all(eqs.homogeneous.values())
            lines.append(f"{len(rendered)} equations in {len(eqs.variables)} variables")
            lines.extend(rendered)
    if args.graph_dump:
        os.makedirs(args.graph_dump, exist_ok=True)
        with open(os.path.join(args.graph_dump, "canonical.graph"), "w") as fh:
            fh.write(graph_to_text(bundle.graph))
        with open(os.path.join(args.graph_dump, "minimal.graph"), "w") as fh:
            fh.write(graph_to_text(bundle.minimal))
        if bundle.diagram is not None:
            with open(os.path.join(args.graph_dump, "splice.txt"), "w") as fh:
                fh.write(diagram_to_text(bundle.diagram))
    _emit(obj, args.json, lines)
    return EXIT_INCONCLUSIVE if report.verdict == VERDICT_INCONCLUSIVE else EXIT_OK


def _sweep_one(job):
    ps, n, cap, oracles = job
    return validate_instance(ps, n, cap, oracles)


def cmd_sweep(args) -> int:
    if args.n_max < args.n_min:
        print("splicecheck sweep: --n-max is below --n-min", file=sys.stderr)
        return EXIT_USAGE
    domain = sweep_domain(tuple(args.s), tuple(args.p), args.a_count, range(args.n_min, args.n_max + 1),
                          qhs_only=not args.include_non_qhs)
    if args.p_last:
        domain = [(ps, n) for ps, n in domain if ps.p[ps.s] in args.p_last]
    if args.zhs_only:
        domain = [(ps, n) for ps, n in domain if classify_link(ps, n).kind == "ZHS"]
    jobs = [(ps, n, args.cap, not args.no_oracles) for ps, n in domain]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_sweep_one, jobs, chunksize=8))
    else:
        results = [_sweep_one(j) for j in jobs]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        out.write(f"# {CSV_SCHEMA}\n")
        writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in results:
            writer.writerow(r.row(args.timing))
    finally:
        if args.output:
            out.close()
    disagree = sum(1 for r in results if r.agree is False)
    inconclusive = sum(1 for r in results if r.checker_verdict == VERDICT_INCONCLUSIVE)
    mismatched = sum(1 for r in results if r.problems)
    print(
        f"{len(results)} instances, {disagree} disagreements, {mismatched} with oracle mismatches, "
        f"{inconclusive} inconclusive",
        file=sys.stderr,
    )
    return EXIT_MISMATCH if disagree or mismatched else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "classify":
            return cmd_classify(args)
        if args.command == "check":
            return cmd_check(args)
        return cmd_sweep(args)
    except PairValidationError as exc:
        print(f"splicecheck: --pairs: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
