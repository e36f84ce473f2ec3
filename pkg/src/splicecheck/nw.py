"""Semigroup and congruence conditions on a splice diagram, and its equations.

The congruence test uses the leafwise form: for a node ``v`` and edge ``e``
there must be an admissible monomial ``prod Z_w^{alpha_w}`` such that for every
leaf ``w'`` beyond ``e``

    [sum_{w != w'} alpha_w l_{ww'}/det - alpha_{w'} e_{w'}.e_{w'}] = [l_{vw'}/det].

Every term is a multiple of ``1/det``, so the search works with integers
modulo ``det``.
"""
from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .graph import ResolutionGraph, SpliceDiagram, leaf_self_pairing, linking, splice_extract
from .numeric import gcd_many

__all__ = [
    "DEFAULT_CAP",
    "default_cap",
    "HOLDS",
    "FAILS",
    "TRIVIAL",
    "SKIPPED",
    "UNCHECKED",
    "INCONCLUSIVE",
    "PASS",
    "FAIL_SEMIGROUP",
    "FAIL_CONGRUENCE",
    "NOT_QHS",
    "semigroup_member",
    "enumerate_representations",
    "EdgeCheck",
    "CheckReport",
    "semigroup_condition",
    "congruence_condition",
    "check_all",
    "check_graph",
    "SpliceEquations",
    "emit_splice_equations",
]

DEFAULT_CAP = 10**6

HOLDS = "holds"
FAILS = "fails"
TRIVIAL = "trivial"
SKIPPED = "skipped"
UNCHECKED = "unchecked"
INCONCLUSIVE = "inconclusive"

PASS = "PASS"
FAIL_SEMIGROUP = "FAIL_SEMIGROUP"
FAIL_CONGRUENCE = "FAIL_CONGRUENCE"
VERDICT_INCONCLUSIVE = "INCONCLUSIVE"
NOT_QHS = "NOT_QHS"


def default_cap() -> int:
    """Search cap, overridable with the ``SPLICECHECK_CAP`` environment variable."""
    raw = os.environ.get("SPLICECHECK_CAP")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"SPLICECHECK_CAP must be an integer, got {raw!r}") from None
        if value <= 0:
            raise ValueError("SPLICECHECK_CAP must be positive")
        return value
    return DEFAULT_CAP


# ---------------------------------------------------------------- numerical semigroups


def semigroup_member(target: int, gens: Sequence[int], cap: Optional[int] = None) -> Tuple[str, Optional[List[int]]]:
    """Decide ``target in N<gens>``; returns ``(status, coefficients)``.

    Coefficients are aligned with ``gens``.  Large targets are settled by the
    two-generator Frobenius bound, the rest by a shortest-path table of
    residues modulo the smallest generator.
    """
    if cap is None:
        cap = default_cap()
    gens = list(gens)
    if any(g <= 0 for g in gens):
        raise ValueError("generators must be positive")
    if target < 0:
        return FAILS, None
    if target == 0:
        return HOLDS, [0] * len(gens)
    if not gens:
        return FAILS, None
    g = gcd_many(gens)
    if target % g:
        return FAILS, None

    # Frobenius fast path with any coprime pair (after dividing out g)
    reduced = [x // g for x in gens]
    t = target // g
    order = sorted(range(len(gens)), key=lambda i: reduced[i])
    for ii in range(len(order)):
        for jj in range(ii + 1, len(order)):
            i, j = order[ii], order[jj]
            x, y = reduced[i], reduced[j]
            if gcd(x, y) == 1 and t > x * y - x - y:
                cx = (t * pow(x, -1, y)) % y if y > 1 else 0
                cy = (t - x * cx) // y
                coeffs = [0] * len(gens)
                coeffs[i] += cx
                coeffs[j] += cy
                return HOLDS, coeffs
        # only the smallest few pairs are worth trying
        if ii >= 3:
            break

    # residues modulo the smallest generator
    i0 = order[0]
    m = reduced[i0]
    if m > cap:
        return INCONCLUSIVE, None
    dist = [None] * m
    via: List[Optional[Tuple[int, int]]] = [None] * m
    dist[0] = 0
    heap = [(0, 0)]
    steps = 0
    want = t % m
    while heap:
        dcur, r = heapq.heappop(heap)
        if dcur != dist[r]:
            continue
        if dcur > t:
            break
        if r == want:
            break
        for k, x in enumerate(reduced):
            if k == i0:
                continue
            steps += 1
            if steps > cap:
                return INCONCLUSIVE, None
            nd = dcur + x
            nr = (r + x) % m
            if dist[nr] is None or nd < dist[nr]:
                dist[nr] = nd
                via[nr] = (r, k)
                heapq.heappush(heap, (nd, nr))
    if dist[want] is None or dist[want] > t:
        return FAILS, None
    coeffs = [0] * len(gens)
    r = want
    while r != 0:
        prev, k = via[r]
        coeffs[k] += 1
        r = prev
    coeffs[i0] += (t - dist[want]) // m
    return HOLDS, coeffs


def enumerate_representations(
    target: int, gens: Sequence[int], cap: Optional[int] = None
) -> Tuple[List[Tuple[int, ...]], bool]:
    """All ``alpha >= 0`` with ``sum alpha_i gens_i = target``, and a truncation flag.

    Order is deterministic: depth-first over positions in the given order,
    smaller exponents first.
    """
    if cap is None:
        cap = default_cap()
    k = len(gens)
    suffix_gcd = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix_gcd[i] = gcd(suffix_gcd[i + 1], gens[i])
    out: List[Tuple[int, ...]] = []
    alpha = [0] * k
    budget = [cap]
    truncated = False

    def rec(i, remaining):
        nonlocal truncated
        budget[0] -= 1
        if budget[0] < 0:
            truncated = True
            return
        if i == k:
            if remaining == 0:
                out.append(tuple(alpha))
            return
        if suffix_gcd[i] == 0 or remaining % suffix_gcd[i]:
            return
        if i == k - 1:
            if remaining % gens[i] == 0:
                alpha[i] = remaining // gens[i]
                out.append(tuple(alpha))
                alpha[i] = 0
            return
        for c in range(remaining // gens[i] + 1):
            alpha[i] = c
            rec(i + 1, remaining - c * gens[i])
            if truncated:
                break
        alpha[i] = 0

    if k == 0:
        return ([()] if target == 0 else []), False
    rec(0, target)
    return out, truncated


# ---------------------------------------------------------------- per-edge checks


@dataclass
class EdgeCheck:
    node: int
    first: int
    target: int  # far end in the diagram
    weight: int
    leaves: Tuple[int, ...]
    generators: Tuple[int, ...]
    semigroup: str
    witness: Optional[Dict[int, int]] = None
    congruence: str = UNCHECKED
    monomial: Optional[Dict[int, int]] = None
    explored: int = 0

    @property
    def is_leaf_edge(self) -> bool:
        return self.semigroup == TRIVIAL


@dataclass
class CheckReport:
    verdict: str
    det: Optional[int]
    edges: List[EdgeCheck] = field(default_factory=list)
    nodes: Tuple[int, ...] = ()
    leaves: Tuple[int, ...] = ()

    def failures(self) -> List[EdgeCheck]:
        return [e for e in self.edges if e.semigroup == FAILS or e.congruence == FAILS]

    def to_dict(self) -> dict:
        return {
            "schema": "splicecheck.report/1",
            "verdict": self.verdict,
            "det": self.det,
            "nodes": list(self.nodes),
            "leaves": list(self.leaves),
            "edges": [
                {
                    "node": e.node,
                    "first": e.first,
                    "toward": e.target,
                    "weight": e.weight,
                    "leaves": list(e.leaves),
                    "generators": list(e.generators),
                    "semigroup": e.semigroup,
                    "witness": _alpha_json(e.witness),
                    "congruence": e.congruence,
                    "monomial": _alpha_json(e.monomial),
                    "explored": e.explored,
                }
                for e in self.edges
            ],
        }


def _alpha_json(alpha):
    if alpha is None:
        return None
    return {str(k): v for k, v in sorted(alpha.items())}


def _generators(delta: SpliceDiagram, v: int, first: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    leaves = tuple(delta.side_leaves(v, first))
    gens = tuple(linking(delta, v, w, "reduced") for w in leaves)
    return leaves, gens


def semigroup_condition(delta: SpliceDiagram, v: int, first: int, cap: Optional[int] = None) -> EdgeCheck:
    """Is ``d_ve`` in the semigroup generated by ``l'_{vw}`` over leaves beyond ``e``?"""
    (edge,) = [e for e in delta.edges[v] if e.first == first]
    if edge.target in delta.leaves_set:
        return EdgeCheck(v, first, edge.target, edge.weight, (edge.target,), (1,), TRIVIAL,
                         {edge.target: edge.weight}, SKIPPED)
    leaves, gens = _generators(delta, v, first)
    status, coeffs = semigroup_member(edge.weight, gens, cap)
    witness = dict(zip(leaves, coeffs)) if coeffs is not None else None
    return EdgeCheck(v, first, edge.target, edge.weight, leaves, gens, status, witness)


def _symmetry_classes(delta: SpliceDiagram, leaves: Sequence[int]) -> Dict[int, tuple]:
    """Leaves hanging off the same node by identical strings are interchangeable."""
    g = delta.graph
    out = {}
    for w in leaves:
        edge = delta.leaf_edge(w)
        string = tuple(g.vertices[x].e for x in (w,) + edge.interior)
        out[w] = (edge.target, string)
    return out


def congruence_condition(
    delta: SpliceDiagram, check: EdgeCheck, cap: Optional[int] = None, reverse: bool = False
) -> EdgeCheck:
    """Search admissible monomials for one satisfying the leafwise congruences.

    ``check`` must come from :func:`semigroup_condition` with status ``holds``.
    The search runs depth-first over leaves, sorted by decreasing generator
    (or the reverse when ``reverse`` is set), with exponents increasing, dead
    states memoized and interchangeable leaves kept in non-increasing order.
    """
    if cap is None:
        cap = default_cap()
    if check.semigroup == TRIVIAL:
        check.congruence = SKIPPED
        return check
    if check.semigroup != HOLDS:
        check.congruence = UNCHECKED
        return check
    det = delta.det
    v = check.node
    leaves = list(check.leaves)
    gen_of = dict(zip(check.leaves, check.generators))
    sym = _symmetry_classes(delta, leaves)
    order = sorted(leaves, key=lambda w: (-gen_of[w], sym[w], w))
    if reverse:
        order = order[::-1]
    k = len(order)
    gens = [gen_of[w] for w in order]

    if det == 1:
        check.congruence = HOLDS
        check.monomial = dict(check.witness)
        return check

    # integer columns: alpha_w contributes col[w][w'] to the condition at w'
    selfp = {}
    for w in order:
        r = leaf_self_pairing(delta.graph, delta, w).value * det
        if r.denominator != 1:
            raise ArithmeticError("self-pairing is not a multiple of 1/det")
        selfp[w] = int(r) % det
    cols = []
    for w in order:
        col = []
        for w2 in order:
            if w2 == w:
                col.append((-selfp[w]) % det)
            else:
                col.append(linking(delta, w, w2, "full") % det)
        cols.append(col)
    goal = tuple(linking(delta, v, w2, "full") % det for w2 in order)

    tie = [i > 0 and sym[order[i]] == sym[order[i - 1]] for i in range(k)]
    suffix_gcd = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix_gcd[i] = gcd(suffix_gcd[i + 1], gens[i])

    dead = set()
    alpha = [0] * k
    count = [0]
    found: List[Optional[Tuple[int, ...]]] = [None]
    aborted = [False]

    def add(res, col, c):
        return tuple((x + c * y) % det for x, y in zip(res, col))

    def rec(i, remaining, res, bound):
        count[0] += 1
        if count[0] > cap:
            aborted[0] = True
            return False
        if i == k:
            if remaining == 0 and res == goal:
                found[0] = tuple(alpha)
                return True
            return False
        if remaining % suffix_gcd[i]:
            return False
        key = (i, remaining, res, bound)
        if key in dead:
            return False
        top = remaining // gens[i]
        if bound is not None:
            top = min(top, bound)
        if i == k - 1:
            choices = [remaining // gens[i]] if remaining % gens[i] == 0 and remaining // gens[i] <= top else []
        else:
            choices = range(top + 1)
        for c in choices:
            alpha[i] = c
            nb = c if (i + 1 < k and tie[i + 1]) else None
            if rec(i + 1, remaining - c * gens[i], add(res, cols[i], c), nb):
                return True
            if aborted[0]:
                alpha[i] = 0
                return False
        alpha[i] = 0
        dead.add(key)
        return False

    zero = tuple([0] * k)
    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * k + 100))
    try:
        ok = rec(0, check.weight, zero, None)
    finally:
        sys.setrecursionlimit(old)
    check.explored = count[0]
    if ok:
        check.congruence = HOLDS
        check.monomial = {w: a for w, a in zip(order, found[0])}
    elif aborted[0]:
        check.congruence = INCONCLUSIVE
    else:
        check.congruence = FAILS
    return check


def _aggregate(edges: List[EdgeCheck]) -> str:
    sg = [e.semigroup for e in edges]
    if FAILS in sg:
        return FAIL_SEMIGROUP
    if INCONCLUSIVE in sg:
        return VERDICT_INCONCLUSIVE
    cg = [e.congruence for e in edges]
    if FAILS in cg:
        return FAIL_CONGRUENCE
    if INCONCLUSIVE in cg:
        return VERDICT_INCONCLUSIVE
    return PASS


def check_diagram(delta: SpliceDiagram, cap: Optional[int] = None) -> CheckReport:
    if cap is None:
        cap = default_cap()
    edges = []
    for v in delta.nodes:
        for e in sorted(delta.edges[v], key=lambda x: x.first):
            edges.append(semigroup_condition(delta, v, e.first, cap))
    all_hold = all(e.semigroup in (HOLDS, TRIVIAL) for e in edges)
    for e in edges:
        if e.semigroup == TRIVIAL:
            e.congruence = SKIPPED
        elif all_hold:
            congruence_condition(delta, e, cap)
        else:
            e.congruence = UNCHECKED
    return CheckReport(_aggregate(edges), delta.det, edges, tuple(delta.nodes), tuple(delta.leaves))


def check_graph(g: ResolutionGraph, cap: Optional[int] = None) -> CheckReport:
    """Check a raw plumbing tree (arrows ignored)."""
    if any(v.genus > 0 for v in g.vertices):
        return CheckReport(NOT_QHS, None)
    return check_diagram(splice_extract(g.without_arrows()), cap)


def check_all(bundle, cap: Optional[int] = None) -> CheckReport:
    """Check a :class:`~splicecheck.builder.CoverGraphBundle`, a raw graph or a ``(pairs, n)`` tuple."""
    if isinstance(bundle, ResolutionGraph):
        return check_graph(bundle, cap)
    if isinstance(bundle, tuple):
        from .builder import build_cover_graph

        bundle = build_cover_graph(*bundle)
    if not bundle.qhs or bundle.diagram is None:
        return CheckReport(NOT_QHS, None)
    return check_diagram(bundle.diagram, cap)


# ---------------------------------------------------------------- equations


@dataclass
class SpliceEquations:
    variables: Dict[int, str]
    equations: List[Tuple[int, int, List[Tuple[str, Dict[int, int]]]]]  # (node, index, [(coef, monomial)])
    homogeneous: Dict[int, bool]
    node_weight: Dict[int, int]

    def render(self) -> List[str]:
        out = []
        for node, idx, terms in self.equations:
            parts = []
            for coef, mono in terms:
                factors = []
                for w, a in sorted(mono.items()):
                    if a == 0:
                        continue
                    factors.append(self.variables[w] + (f"^{a}" if a > 1 else ""))
                parts.append(coef + "*" + "*".join(factors) if factors else coef)
            out.append(" + ".join(parts) + " = 0")
        return out

    def __len__(self):
        return len(self.equations)


def emit_splice_equations(
    delta: SpliceDiagram, report: CheckReport, names: Optional[Dict[int, str]] = None
) -> SpliceEquations:
    """Generic-coefficient splice diagram equations from the chosen monomials.

    Node ``v`` of valency ``delta_v`` gets ``delta_v - 2`` equations in its
    admissible monomials; coefficients ``c_{v,i,j}`` are symbolic and are
    required to have all maximal minors of full rank.
    """
    if report.verdict != PASS:
        raise ValueError(f"equations need a PASS report, got {report.verdict}")
    if names is None:
        names = {w: f"Z{i + 1}" for i, w in enumerate(delta.leaves)}
    by_node: Dict[int, List[EdgeCheck]] = {}
    for e in report.edges:
        by_node.setdefault(e.node, []).append(e)
    equations = []
    homogeneous = {}
    weights = {}
    for v in delta.nodes:
        edges = sorted(by_node.get(v, []), key=lambda x: x.first)
        monomials = [e.monomial if e.monomial is not None else e.witness for e in edges]
        dv = delta.node_weight(v)
        weights[v] = dv
        ok = True
        for mono in monomials:
            total = sum(a * linking(delta, v, w, "full") for w, a in mono.items())
            ok = ok and total == dv
        homogeneous[v] = ok
        for i in range(len(edges) - 2):
            terms = [(f"c{v}_{i + 1}_{j + 1}", dict(m)) for j, m in enumerate(monomials)]
            equations.append((v, i + 1, terms))
    return SpliceEquations(dict(names), equations, homogeneous, weights)
