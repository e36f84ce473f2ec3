"""Resolution graphs of f in C^2 and of z on the cyclic cover z^n = f.

The plane graph comes from iterated toric modifications: at step ``k`` the
strict transform meets the previous node divisor ``E = {u = 0}`` where it
looks like ``(w^{p_k} - u^{q_k})^{P_k}`` with ``P_k = p_{k+1} ... p_s``.  The
regular subdivision of the cone between ``(1, 0)`` (the divisor ``E``, or the
axis ``x = 0`` at step 1), the ray ``(p_k, q_k)`` and ``(0, 1)`` gives the
string toward ``v_k``, the node ``v_k`` itself and the leaf string ``vbar_k``.
Multiplicities are read off the rays, self-intersections from the balance
``b_v m_v = sum of neighbor multiplicities + arrow multiplicities``.

The cover graph is built vertex by vertex and edge by edge.  Over a vertex of
multiplicity ``m_v`` sit ``gcd(n, m_v, neighbor multiplicities)`` curves; over
an edge sit ``gcd(n, m_v, m_w)`` strings, each resolving the normalization of
``T^{n'} = u^{a'} w^{b'}``, a toric surface whose cone is the positive
quadrant in the lattice ``{(x, y) : a'x + b'y = 0 mod n'}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Tuple

from .curve import CoverInvariants, PairSystem, classify_link, cover_invariants, to_topological, topological_to_newton
from .graph import ResolutionGraph, SpliceDiagram, Vertex, determinant, minimalize_with_map, splice_extract
from .numeric import gcd_many, hj_expand, prod

__all__ = [
    "BuildError",
    "CoverGraphBundle",
    "build_plane_graph",
    "lambda_of",
    "vbar_string_fraction",
    "arrow_string_fraction",
    "build_cover_graph",
    "build_pathological",
]

ARROW = "arrow"


class BuildError(RuntimeError):
    """A construction invariant failed; this signals a bug, not bad input."""


def _det2(r1, r2) -> int:
    return r1[0] * r2[1] - r1[1] * r2[0]


def _chain(r1, r2, d: int, p: int) -> List[Tuple[int, int]]:
    """Rays strictly inside the cone ``(r1, r2)`` of the minimal regular subdivision.

    ``d`` is the lattice determinant of the cone and ``p`` the residue for
    which ``(r2 + p r1)/d`` is the ray next to ``r1``; ``r1`` and ``r2`` are
    given in whatever coordinates the caller uses, and the recurrence
    ``u_{i+1} = k_i u_i - u_{i-1}`` is linear so it works in any of them.
    """
    if d == 1:
        return []
    terms = hj_expand(d, p)
    first = ((r2[0] + p * r1[0]) // d, (r2[1] + p * r1[1]) // d)
    rays = [first]
    prev, cur = r1, first
    for k in terms[:-1]:
        prev, cur = cur, (k * cur[0] - prev[0], k * cur[1] - prev[1])
        rays.append(cur)
    last = (terms[-1] * cur[0] - prev[0], terms[-1] * cur[1] - prev[1])
    if last != tuple(r2):
        raise BuildError(f"subdivision of cone {r1}, {r2} did not close up")
    return rays


def _chain_z2(r1, r2) -> List[Tuple[int, int]]:
    d = _det2(r1, r2)
    if d <= 0:
        raise BuildError(f"cone {r1}, {r2} is not positively oriented")
    for p in range(d):
        if (r2[0] + p * r1[0]) % d == 0 and (r2[1] + p * r1[1]) % d == 0:
            return _chain(r1, r2, d, p) if d > 1 else []
    raise BuildError(f"ray {r1} is not primitive")


def _balance_self_intersections(mults, adj, arrows) -> List[int]:
    out = []
    for v, m in enumerate(mults):
        total = sum(mults[w] for w in adj[v]) + sum(a for x, a in arrows if x == v)
        if total % m:
            raise BuildError(f"balance fails at vertex {v}: {total} is not a multiple of {m}")
        out.append(-(total // m))
    return out


def build_plane_graph(ps: PairSystem) -> ResolutionGraph:
    """The minimal good embedded resolution graph of ``f`` with arrow at ``v_s``.

    Labels are ``("v", k, 0)`` for nodes, ``("vbar", k, i)`` for the leaf
    strings (``i = 0`` is the leaf) and ``("int", k, i)`` for the string from
    ``v_{k-1}`` to ``v_k`` (``i = 0`` next to ``v_{k-1}``).
    """
    top = to_topological(ps)
    newton = topological_to_newton(top)
    s = top.s
    p = [x for x, _ in newton.pairs]
    q = [y for _, y in newton.pairs]
    labels: List[tuple] = []
    mults: List[int] = []
    edges: List[Tuple[int, int]] = []

    def add(label, m):
        labels.append(label)
        mults.append(m)
        return len(labels) - 1

    def link_chain(seq):
        edges.extend(zip(seq, seq[1:]))

    prev_node = None
    prev_mult = 0
    for k in range(1, s + 1):
        pk, qk = p[k - 1], q[k - 1]
        big_p = prod(p[k:])
        rho = (pk, qk)

        def mult(ray, prev_mult=prev_mult, big_p=big_p, pk=pk, qk=qk):
            a, b = ray
            return a * prev_mult + big_p * min(a * qk, b * pk)

        lower = _chain_z2((1, 0), rho)
        upper = _chain_z2(rho, (0, 1))
        if k == 1:
            # the lower chain is the vbar_0 leaf string, its leaf next to the axis (1, 0)
            lower_ids = [add(("vbar", 0, i), mult(r)) for i, r in enumerate(lower)]
        else:
            lower_ids = [add(("int", k, i), mult(r)) for i, r in enumerate(lower)]
        node = add(("v", k, 0), mult(rho))
        upper_ids = [add(("vbar", k, len(upper) - 1 - i), mult(r)) for i, r in enumerate(upper)]
        link_chain(([] if k == 1 else [prev_node]) + lower_ids + [node])
        link_chain([node] + upper_ids)
        prev_node = node
        prev_mult = mults[node]
    arrows = [(prev_node, 1)]
    adj: List[List[int]] = [[] for _ in labels]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    selfint = _balance_self_intersections(mults, adj, arrows)
    verts = [Vertex(e, 0, m, lab) for e, m, lab in zip(selfint, mults, labels)]
    return ResolutionGraph(verts, edges, arrows)


def lambda_of(a: int, Q: int, P: int) -> int:
    """The unique ``0 <= lam < P/(a,P)`` with ``Q + lam * a/(a,P) = 0 mod P/(a,P)``."""
    if a <= 0 or Q <= 0 or P <= 0:
        raise ValueError("lambda_of needs positive arguments")
    if gcd(gcd(a, Q), P) != 1:
        raise ValueError(f"gcd(a, Q, P) = gcd({a}, {Q}, {P}) != 1")
    g = gcd(a, P)
    mod = P // g
    if mod == 1:
        return 0
    return (-Q * pow(a // g, -1, mod)) % mod


def vbar_string_fraction(k: int, inv: CoverInvariants) -> Optional[Tuple[int, int]]:
    """``(d, p)`` of a ``vbar_k`` leaf string, read from the leaf; None if it collapses."""
    if not 0 <= k <= inv.s:
        raise IndexError(f"k={k} out of range 0..{inv.s}")
    if k == 0:
        big_n = inv.n // (inv.h[1] * inv.d[1])
        P, Q = inv.a[1], inv.p[1]
        d = inv.a_red[1]
    else:
        big_n = inv.n // (inv.hbar[k] * inv.d[k])
        P, Q = inv.p[k], inv.q[k]
        d = inv.p_red[k]
    if d == 1:
        return None
    g = gcd(big_n, P)
    if P // g != d:
        raise BuildError(f"normalization data disagree for vbar_{k}")
    lam = lambda_of(1, Q * big_n // g, d)
    return d, lam


def arrow_string_fraction(inv: CoverInvariants) -> Optional[Tuple[int, int]]:
    """``(d, p)`` of the string from ``v_s`` to the arrow, read from the arrow end."""
    s = inv.s
    d = inv.n // (inv.h[s] * inv.hbar[s])
    if d == 1:
        return None
    m_vs = inv.a[s] * inv.p[s]
    lam = lambda_of(m_vs, 1, inv.n)
    # lam describes the string read from v_s; the other end has the inverse residue
    return d, pow(lam, -1, d)


@dataclass
class CoverGraphBundle:
    """Everything built for one ``(pairs, n)``.

    ``graph`` is the canonical embedded graph with its arrow, ``base`` the plane
    graph, ``minimal`` the minimal good resolution graph of the surface (arrow
    dropped) and ``diagram`` its splice diagram (None when not QHS).
    ``over[i]`` is the base vertex under cover vertex ``i``, or the base edge
    ``(v, w)`` for string vertices, with ``w = -1`` for the arrow edge.
    """

    pairs: PairSystem
    n: int
    invariants: CoverInvariants
    base: ResolutionGraph
    graph: ResolutionGraph
    over: List[object]
    preimages: Dict[int, List[int]]
    minimal: ResolutionGraph
    minimal_map: Dict[int, int]
    diagram: Optional[SpliceDiagram]
    qhs: bool
    pathological: bool = False

    def base_index(self, label) -> int:
        (i,) = self.base.find(label)
        return i

    def count(self, label) -> int:
        return len(self.preimages[self.base_index(label)])

    def vertex_type(self, i: int) -> tuple:
        """Base label of the vertex (or of the base edge endpoint) under cover vertex ``i``."""
        o = self.over[i]
        if isinstance(o, int):
            return self.base.vertices[o].label
        v, w = o
        return ("edge", self.base.vertices[v].label, ARROW if w < 0 else self.base.vertices[w].label)


def _cover(base: ResolutionGraph, n: int):
    mults = [v.mult for v in base.vertices]
    arrows_at: Dict[int, List[int]] = {}
    for v, m in base.arrows:
        arrows_at.setdefault(v, []).append(m)
    labels: List[tuple] = []
    zmult: List[int] = []
    genus: List[int] = []
    over: List[object] = []
    fixed_e: Dict[int, int] = {}
    edges: List[Tuple[int, int]] = []
    arrows: List[Tuple[int, int]] = []
    preimages: Dict[int, List[int]] = {}

    for v, vert in enumerate(base.vertices):
        m = mults[v]
        around = [mults[w] for w in base.neighbors(v)] + arrows_at.get(v, [])
        nv = gcd_many([n, m] + around)
        gm = gcd(n, m)
        chi = (2 - len(around)) * gm + sum(gcd(gm, x) for x in around)
        if chi % nv:
            raise BuildError(f"Riemann-Hurwitz count is not integral over base vertex {v}")
        euler = chi // nv
        if (2 - euler) % 2 or euler > 2:
            raise BuildError(f"bad Euler characteristic {euler} over base vertex {v}")
        g = (2 - euler) // 2
        ids = []
        for c in range(nv):
            labels.append(vert.label + (c,))
            zmult.append(m // gm)
            genus.append(g)
            over.append(v)
            ids.append(len(labels) - 1)
        preimages[v] = ids

    def string(v, w, mv, mw, copy, end_id):
        """Lay the string over base edge ``(v, w)`` from a copy of ``v`` to ``end_id``."""
        ge = gcd_many([n, mv, mw])
        n1, a1, b1 = n // ge, mv // ge, mw // ge
        ga, gb = gcd(n1, a1), gcd(n1, b1)
        d = n1 // (ga * gb)
        start = preimages[v][copy % len(preimages[v])]
        if d == 1:
            return start, []
        pp = (-(b1 // gb) * pow(a1 // ga, -1, d)) % d
        r1, r2 = (n1 // ga, 0), (0, n1 // gb)
        rays = _chain(r1, r2, d, pp)
        ids = []
        terms = hj_expand(d, pp)
        for i, (x, y) in enumerate(rays):
            num = a1 * x + b1 * y
            if num % n1:
                raise BuildError("string ray is not in the cover lattice")
            wlabel = ARROW if w < 0 else base.vertices[w].label
            labels.append(("str", base.vertices[v].label, wlabel, copy, i))
            zmult.append(num // n1)
            genus.append(0)
            over.append((v, w))
            fixed_e[len(labels) - 1] = -terms[i]
            ids.append(len(labels) - 1)
        return start, ids

    for v, w in base.edges:
        ge = gcd_many([n, mults[v], mults[w]])
        for c in range(ge):
            start, ids = string(v, w, mults[v], mults[w], c, None)
            end = preimages[w][c % len(preimages[w])]
            seq = [start] + ids + [end]
            edges.extend(zip(seq, seq[1:]))
    for v, am in base.arrows:
        ge = gcd_many([n, mults[v], am])
        for c in range(ge):
            start, ids = string(v, -1, mults[v], am, c, None)
            seq = [start] + ids
            edges.extend(zip(seq, seq[1:]))
            arrows.append((seq[-1], 1))

    adj: List[List[int]] = [[] for _ in labels]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    verts = []
    for i in range(len(labels)):
        total = sum(zmult[w] for w in adj[i]) + sum(m for x, m in arrows if x == i)
        if total % zmult[i]:
            raise BuildError(f"balance fails at cover vertex {labels[i]}")
        e = -(total // zmult[i])
        if i in fixed_e and fixed_e[i] != e:
            raise BuildError(f"string self-intersection {fixed_e[i]} disagrees with balance {e} at {labels[i]}")
        verts.append(Vertex(e, genus[i], zmult[i], labels[i]))
    return ResolutionGraph(verts, edges, arrows), over, preimages


def build_cover_graph(ps: PairSystem, n: int) -> CoverGraphBundle:
    """Canonical embedded resolution graph of ``z`` on ``z^n = f`` plus derived data."""
    top = to_topological(ps)
    inv = cover_invariants(top, n)
    base = build_plane_graph(top)
    graph, over, preimages = _cover(base, n)
    if not graph.is_tree():
        raise BuildError("cover graph is not a tree")
    link = classify_link(top, n)
    minimal, mmap = minimalize_with_map(graph.without_arrows(), "full")
    diagram = splice_extract(minimal) if link.is_qhs else None
    return CoverGraphBundle(
        pairs=top,
        n=n,
        invariants=inv,
        base=base,
        graph=graph,
        over=over,
        preimages=preimages,
        minimal=minimal,
        minimal_map=mmap,
        diagram=diagram,
        qhs=link.is_qhs,
        pathological=link.pathological,
    )


def build_pathological(ps: PairSystem, n: int = 2) -> CoverGraphBundle:
    """The bundle for ``n = p_s = 2``; its diagram has ``2(s - 1)`` nodes."""
    top = to_topological(ps)
    if not (n == 2 and top.pairs[-1][0] == 2):
        raise ValueError("the pathological case needs n = p_s = 2")
    bundle = build_cover_graph(top, n)
    if bundle.diagram is None or len(bundle.diagram.nodes) != 2 * (top.s - 1):
        raise BuildError("pathological minimal graph does not have 2(s-1) nodes")
    return bundle
