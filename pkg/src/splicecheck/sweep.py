"""Batch cross-validation: built graphs against closed forms, checker against theorem.

``validate_instance`` compares every subgraph determinant of the canonical
cover graph with its closed form, every leaf self-pairing of the splice
diagram with the closed-form residue, and the general checker's verdict with
the classification.  The sweep helpers enumerate the standard test domain.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product as cartesian
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .builder import ARROW, CoverGraphBundle, build_cover_graph, build_plane_graph
from .closedform import edote_closed_form, main_theorem_classify, weights_closed_form
from .curve import TOPOLOGICAL, PairSystem, classify_link, validate
from .graph import determinant, leaf_self_pairing
from .nw import PASS, VERDICT_INCONCLUSIVE, check_all
from .numeric import prod

__all__ = [
    "CSV_COLUMNS",
    "CSV_SCHEMA",
    "admissible_a_values",
    "pair_systems",
    "sweep_domain",
    "leaf_type",
    "plane_graph_problems",
    "cover_graph_problems",
    "pairing_problems",
    "InstanceResult",
    "validate_instance",
]

CSV_SCHEMA = "splicecheck.sweep/1"
CSV_COLUMNS = (
    "pairs",
    "n",
    "link_class",
    "closed_form_verdict",
    "checker_verdict",
    "agree",
    "oracle_mismatches",
    "seconds",
)


def admissible_a_values(p: Sequence[int], count: int = 3) -> List[Tuple[int, ...]]:
    """All ``(a_1, ..., a_s)`` taking the ``count`` smallest admissible values per slot."""
    out: List[Tuple[int, ...]] = []

    def rec(prefix):
        k = len(prefix)
        if k == len(p):
            out.append(tuple(prefix))
            return
        floor = p[0] if k == 0 else prefix[-1] * p[k - 1] * p[k]
        found = 0
        a = floor + 1
        while found < count:
            if gcd(a, p[k]) == 1:
                rec(prefix + [a])
                found += 1
            a += 1

    rec([])
    return out


def pair_systems(s_values=(2, 3), p_values=(2, 3), count: int = 3) -> Iterator[PairSystem]:
    for s in s_values:
        for p in cartesian(p_values, repeat=s):
            for a in admissible_a_values(p, count):
                yield validate(PairSystem(TOPOLOGICAL, tuple(zip(p, a))))


def sweep_domain(
    s_values=(2, 3), p_values=(2, 3), count: int = 3, n_values: Iterable[int] = range(2, 21), qhs_only: bool = True
) -> List[Tuple[PairSystem, int]]:
    n_values = list(n_values)
    out = []
    for ps in pair_systems(s_values, p_values, count):
        for n in n_values:
            if qhs_only and not classify_link(ps, n).is_qhs:
                continue
            out.append((ps, n))
    return out


def plane_graph_problems(ps: PairSystem) -> List[str]:
    """Unimodularity and balance of the plane resolution graph."""
    g = build_plane_graph(ps)
    problems = []
    if determinant(g) != 1:
        problems.append(f"det(plane graph) = {determinant(g)}")
    for v in range(len(g)):
        if g.balance_defect(v) != 0:
            problems.append(f"balance fails at plane vertex {g.vertices[v].label}")
    return problems


def leaf_type(label) -> Optional[Tuple[str, int]]:
    """``("vbar", k)``, ``("v", k)``, ``("arrow", s)`` or ``("int", k)`` for a cover label."""
    if label is None:
        return None
    if label[0] == "str":
        _, a, b = label[:3]
        if b == ARROW:
            return ("arrow", a[1])
        for lab in (a, b):
            if lab[0] == "vbar":
                return ("vbar", lab[1])
        return ("int", b[1])
    return (label[0], label[1])


def _base_sides(bundle: CoverGraphBundle, k: int) -> Dict[int, str]:
    """Side (vbar, minus, A) of each base vertex as seen from ``v_k``."""
    base = bundle.base
    vk = bundle.base_index(("v", k, 0))
    sides = {}
    for start in base.neighbors(vk):
        comp = base.component(start, removed=[vk])
        labels = [base.vertices[i].label for i in comp]
        if any(lab[0] == "vbar" and lab[1] == k for lab in labels):
            side = "vbar"
        elif any(lab[0] == "v" and lab[1] == k + 1 for lab in labels):
            side = "A"
        else:
            side = "minus"
        for i in comp:
            sides[i] = side
    return sides


def cover_graph_problems(bundle: CoverGraphBundle) -> List[str]:
    """Compare counts, multiplicities, genera and subgraph determinants with closed forms."""
    inv = bundle.invariants
    s, n = inv.s, inv.n
    h, hb, pr, ar = inv.h, inv.hbar, inv.p_red, inv.a_red
    g = bundle.graph
    cf = weights_closed_form(bundle.pairs, n)
    problems: List[str] = []

    def expect(what, got, want):
        if got != want:
            problems.append(f"{what}: graph {got} != closed form {want}")

    # counts, multiplicities and genera over nodes and leaves
    for k in range(1, s + 1):
        expect(f"#q^-1(v_{k})", bundle.count(("v", k, 0)), prod(h[k + 1 : s + 1]))
        expect(f"#q^-1(vbar_{k})", bundle.count(("vbar", k, 0)), hb[k] * prod(h[k + 1 : s + 1]))
        node = bundle.preimages[bundle.base_index(("v", k, 0))][0]
        expect(f"m(v_{k})", g.vertices[node].mult, ar[k] * prod(pr[k : s + 1]))
        expect(f"g(v_{k})", g.vertices[node].genus, (h[k] - 1) * (hb[k] - 1) // 2)
        leaf = bundle.preimages[bundle.base_index(("vbar", k, 0))][0]
        want = ar[s] if k == s else ar[k] * prod(pr[k + 1 : s + 1])
        expect(f"m(vbar_{k})", g.vertices[leaf].mult, want)
    expect("#q^-1(vbar_0)", bundle.count(("vbar", 0, 0)), prod(h[1 : s + 1]))
    leaf0 = bundle.preimages[bundle.base_index(("vbar", 0, 0))][0]
    expect("m(vbar_0)", g.vertices[leaf0].mult, prod(pr[1 : s + 1]))
    for i in range(len(g)):
        if g.balance_defect(i) != 0:
            problems.append(f"balance fails at cover vertex {g.vertices[i].label}")

    expect("det(cover graph)", determinant(g), cf.det)

    arrow_vertex = g.arrows[0][0]
    for k in range(1, s + 1):
        sides = _base_sides(bundle, k)
        next_nodes = set(bundle.preimages[bundle.base_index(("v", k + 1, 0))]) if k < s else set()
        for vp in bundle.preimages[bundle.base_index(("v", k, 0))]:
            counts = {"vbar": 0, "minus": 0, "A": 0}
            for start in g.neighbors(vp):
                comp = g.component(start, removed=[vp])
                o = bundle.over[start]
                if isinstance(o, int):
                    base_v = o
                else:
                    a, b = o
                    if b < 0:
                        base_v = None
                    else:
                        base_v = b if a == bundle.base_index(("v", k, 0)) else a
                side = "A" if base_v is None else sides[base_v]
                counts[side] += 1
                det = determinant(g, comp)
                if side == "vbar":
                    expect(f"D(vbar_{k})", det, cf.D_vbar[k])
                elif side == "minus":
                    expect(f"D_-({k})", det, cf.D_minus[k])
                else:
                    expect(f"D_A({k})", det, cf.D_A[k])
            expect(f"vbar_{k} strings at a v_{k} vertex", counts["vbar"], hb[k])
            expect(f"Gamma_-({k}) pieces at a v_{k} vertex", counts["minus"], h[k] if k > 1 else h[1])
            path = g.path(vp, arrow_vertex)
            if k < s:
                between = []
                for x in path[1:]:
                    if x in next_nodes:
                        break
                    between.append(x)
                expect(f"D(v_{k})", determinant(g, between), cf.D_v[k])
            else:
                expect(f"D(v_{s})", determinant(g, path[1:]), cf.D_v[s])
                if cf.D_v[s] == 1:
                    expect("A side at v_s when D(v_s) = 1", counts["A"], 0)
    return problems


def pairing_problems(bundle: CoverGraphBundle) -> List[str]:
    """Leaf self-pairings from the diagram against the closed-form residues."""
    delta = bundle.diagram
    if delta is None or delta.is_degenerate():
        return []
    inv = bundle.invariants
    problems = []
    for w in delta.leaves:
        kind = leaf_type(delta.graph.vertices[w].label)
        if kind is None or kind[0] != "vbar":
            continue
        k = kind[1]
        if k == 0 and (inv.s < 2 or inv.a_red[1] == 1):
            continue
        if k >= 1 and inv.p_red[k] == 1:
            continue
        got = leaf_self_pairing(delta.graph, delta, w)
        want = edote_closed_form(bundle.pairs, bundle.n, k)
        if got != want:
            problems.append(f"e.e at vbar_{k} leaf {w}: graph {got} != closed form {want}")
    return problems


@dataclass
class InstanceResult:
    pairs: PairSystem
    n: int
    link_class: str
    closed_form_verdict: str
    checker_verdict: str
    agree: Optional[bool]
    problems: List[str] = field(default_factory=list)
    seconds: float = 0.0

    def row(self, timing: bool = False) -> Dict[str, str]:
        return {
            "pairs": self.pairs.text(),
            "n": str(self.n),
            "link_class": self.link_class,
            "closed_form_verdict": self.closed_form_verdict,
            "checker_verdict": self.checker_verdict,
            "agree": "" if self.agree is None else ("yes" if self.agree else "no"),
            "oracle_mismatches": str(len(self.problems)),
            "seconds": f"{self.seconds:.4f}" if timing else "",
        }


def validate_instance(ps: PairSystem, n: int, cap: Optional[int] = None, oracles: bool = True) -> InstanceResult:
    """Build, check and cross-validate one ``(pairs, n)``.

    ``agree`` is None when the checker is inconclusive or the theorem does not
    apply (``s = 1``).
    """
    start = time.perf_counter()
    link = classify_link(ps, n)
    verdict = main_theorem_classify(ps, n)
    bundle = build_cover_graph(ps, n)
    report = check_all(bundle, cap)
    problems: List[str] = []
    if oracles:
        problems += plane_graph_problems(ps)
        if link.is_qhs:
            problems += cover_graph_problems(bundle)
            problems += pairing_problems(bundle)
    if report.verdict == VERDICT_INCONCLUSIVE or verdict.kind == "WEIGHTED_HOMOGENEOUS":
        agree = None
    elif not link.is_qhs:
        agree = report.verdict == "NOT_QHS" and verdict.kind == "NOT_QHS"
    else:
        agree = verdict.is_yes == (report.verdict == PASS)
    return InstanceResult(ps, n, link.kind, verdict.kind, report.verdict, agree, problems,
                          time.perf_counter() - start)
