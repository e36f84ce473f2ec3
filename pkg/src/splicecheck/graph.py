"""Plumbing trees, their intersection forms, minimalization and splice diagrams.

A :class:`ResolutionGraph` is an immutable forest of exceptional curves
(vertices carry self-intersection, genus, an optional multiplicity and an
optional label) with arrows marking strict transforms.  Determinants are
always of ``-C`` where ``C`` is the intersection matrix, so a negative-definite
graph has positive determinant; the empty graph has determinant 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .numeric import Residue, hj_eval, prod

__all__ = [
    "Vertex",
    "ResolutionGraph",
    "SpliceDiagram",
    "DiagramEdge",
    "GraphError",
    "NotQHSError",
    "determinant",
    "bareiss_determinant",
    "leading_minors",
    "is_negative_definite",
    "minimalize",
    "minimalize_with_map",
    "splice_extract",
    "linking",
    "leaf_string_fraction",
    "leaf_self_pairing",
    "graph_to_text",
    "graph_from_text",
    "diagram_to_text",
]


class GraphError(ValueError):
    pass


class NotQHSError(GraphError):
    """Raised when splice machinery is asked to handle a positive-genus vertex."""


@dataclass(frozen=True)
class Vertex:
    e: int  # self-intersection
    genus: int = 0
    mult: Optional[int] = None
    label: Optional[Hashable] = None


class ResolutionGraph:
    """An immutable plumbing forest with arrows.

    ``edges`` are pairs of vertex indices; ``arrows`` are ``(vertex, mult)``.
    """

    __slots__ = ("vertices", "edges", "arrows", "_adj")

    def __init__(
        self,
        vertices: Iterable[Vertex],
        edges: Iterable[Tuple[int, int]] = (),
        arrows: Iterable[Tuple[int, int]] = (),
    ):
        self.vertices: Tuple[Vertex, ...] = tuple(vertices)
        n = len(self.vertices)
        norm = set()
        for u, w in edges:
            if not (0 <= u < n and 0 <= w < n):
                raise GraphError(f"edge ({u}, {w}) refers to a missing vertex")
            if u == w:
                raise GraphError(f"self-loop at vertex {u}")
            key = (min(u, w), max(u, w))
            if key in norm:
                raise GraphError(f"duplicate edge {key}")
            norm.add(key)
        self.edges: Tuple[Tuple[int, int], ...] = tuple(sorted(norm))
        self.arrows: Tuple[Tuple[int, int], ...] = tuple(
            (int(v), int(m) if m is not None else 1) for v, m in arrows
        )
        for v, _ in self.arrows:
            if not 0 <= v < n:
                raise GraphError(f"arrow at missing vertex {v}")
        adj: List[List[int]] = [[] for _ in range(n)]
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._check_forest()

    def _check_forest(self):
        seen = [False] * len(self.vertices)
        for root in range(len(self.vertices)):
            if seen[root]:
                continue
            seen[root] = True
            stack = [(root, -1)]
            while stack:
                v, parent = stack.pop()
                for w in self._adj[v]:
                    if w == parent:
                        continue
                    if seen[w]:
                        raise GraphError("edge set contains a cycle")
                    seen[w] = True
                    stack.append((w, v))

    def __len__(self):
        return len(self.vertices)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def arrow_count(self, v: int) -> int:
        return sum(1 for w, _ in self.arrows if w == v)

    def valency(self, v: int) -> int:
        """Degree plus the number of arrows at ``v``."""
        return len(self._adj[v]) + self.arrow_count(v)

    def is_tree(self) -> bool:
        return len(self.vertices) > 0 and len(self.edges) == len(self.vertices) - 1

    def find(self, label) -> List[int]:
        return [i for i, v in enumerate(self.vertices) if v.label == label]

    def find_where(self, pred) -> List[int]:
        return [i for i, v in enumerate(self.vertices) if v.label is not None and pred(v.label)]

    def intersection_matrix(self) -> List[List[int]]:
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for i, v in enumerate(self.vertices):
            m[i][i] = v.e
        for u, w in self.edges:
            m[u][w] = m[w][u] = 1
        return m

    def induced(self, keep: Iterable[int]) -> Tuple["ResolutionGraph", Dict[int, int]]:
        """The induced subgraph on ``keep`` and the old-to-new index map."""
        keep = sorted(set(keep))
        index = {old: new for new, old in enumerate(keep)}
        verts = [self.vertices[i] for i in keep]
        edges = [(index[u], index[w]) for u, w in self.edges if u in index and w in index]
        arrows = [(index[v], m) for v, m in self.arrows if v in index]
        return ResolutionGraph(verts, edges, arrows), index

    def without_arrows(self) -> "ResolutionGraph":
        return ResolutionGraph(self.vertices, self.edges, ())

    def component(self, start: int, removed: Iterable[int] = ()) -> List[int]:
        """Vertices reachable from ``start`` avoiding ``removed``."""
        blocked = set(removed)
        if start in blocked:
            return []
        out = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self._adj[v]:
                if w not in out and w not in blocked:
                    out.add(w)
                    stack.append(w)
        return sorted(out)

    def path(self, x: int, y: int) -> List[int]:
        """The unique path from ``x`` to ``y`` (inclusive)."""
        parent = {x: None}
        stack = [x]
        while stack:
            v = stack.pop()
            if v == y:
                break
            for w in self._adj[v]:
                if w not in parent:
                    parent[w] = v
                    stack.append(w)
        if y not in parent:
            raise GraphError(f"no path from {x} to {y}")
        out = [y]
        while out[-1] != x:
            out.append(parent[out[-1]])
        return out[::-1]

    def balance_defect(self, v: int) -> Optional[int]:
        """``b_v m_v - sum(neighbor mults) - sum(arrow mults)``; None if any mult is unknown."""
        mv = self.vertices[v].mult
        if mv is None:
            return None
        total = 0
        for w in self._adj[v]:
            mw = self.vertices[w].mult
            if mw is None:
                return None
            total += mw
        total += sum(m for w, m in self.arrows if w == v)
        return -self.vertices[v].e * mv - total

    def __eq__(self, other):
        if not isinstance(other, ResolutionGraph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and sorted(self.arrows) == sorted(other.arrows)
        )

    def __hash__(self):
        return hash((self.vertices, self.edges, tuple(sorted(self.arrows))))

    def __repr__(self):
        return f"ResolutionGraph({len(self.vertices)} vertices, {len(self.edges)} edges, {len(self.arrows)} arrows)"


# ---------------------------------------------------------------- determinants


def _tree_determinant(g: ResolutionGraph, keep: Optional[set] = None) -> int:
    """det(-C) of the forest induced on ``keep`` by leaf-to-root elimination."""
    verts = range(len(g.vertices)) if keep is None else sorted(keep)
    inside = (lambda v: True) if keep is None else keep.__contains__
    seen = set()
    total = 1
    for root in verts:
        if root in seen:
            continue
        # iterative post-order over the component
        order = []
        parent = {root: None}
        stack = [root]
        seen.add(root)
        while stack:
            v = stack.pop()
            order.append(v)
            for w in g.neighbors(v):
                if inside(w) and w not in seen:
                    seen.add(w)
                    parent[w] = v
                    stack.append(w)
        full: Dict[int, int] = {}  # det of subtree at v
        minus: Dict[int, int] = {}  # det of subtree at v with v removed
        for v in reversed(order):
            kids = [w for w in g.neighbors(v) if inside(w) and parent.get(w) == v and w != parent[v]]
            dets = [full[c] for c in kids]
            k = len(dets)
            pre = [1] * (k + 1)
            for i, x in enumerate(dets):
                pre[i + 1] = pre[i] * x
            suf = [1] * (k + 1)
            for i in range(k - 1, -1, -1):
                suf[i] = suf[i + 1] * dets[i]
            correction = 0
            for i, c in enumerate(kids):
                correction += minus[c] * pre[i] * suf[i + 1]
            minus[v] = pre[k]
            full[v] = -g.vertices[v].e * pre[k] - correction
        total *= full[root]
    return total


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination with row pivoting."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_minors(matrix: Sequence[Sequence[int]]) -> List[int]:
    """Leading principal minors of ``matrix``; stops early after the first zero."""
    a = [list(row) for row in matrix]
    n = len(a)
    out = []
    prev = 1
    for k in range(n):
        out.append(a[k][k])
        if a[k][k] == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return out


def determinant(g: ResolutionGraph, subset: Optional[Iterable[int]] = None) -> int:
    """det(-C) of ``g`` or of the subgraph induced on ``subset``; empty gives 1."""
    keep = None if subset is None else set(subset)
    if keep is not None and not keep:
        return 1
    return _tree_determinant(g, keep)


def is_negative_definite(g) -> bool:
    """True iff every leading principal minor of ``-C`` is positive.

    Accepts a :class:`ResolutionGraph` or a raw square intersection matrix.
    """
    matrix = g.intersection_matrix() if isinstance(g, ResolutionGraph) else g
    neg = [[-x for x in row] for row in matrix]
    minors = leading_minors(neg)
    return len(minors) == len(neg) and all(m > 0 for m in minors)


# ---------------------------------------------------------------- minimalization


def _blowdown_candidate(verts, adj, arrows, v, mode, strings_ok) -> bool:
    vert = verts[v]
    if vert.e != -1 or vert.genus != 0:
        return False
    val = len(adj[v]) + len(arrows.get(v, ()))
    if val > 2:
        return False
    # refuse moves that would push a neighbor to self-intersection >= 0
    if any(verts[w].e + 1 >= 0 for w in adj[v]):
        return False
    if mode == "quasi":
        return not strings_ok(v)
    return True


def minimalize_with_map(
    g: ResolutionGraph, mode: str = "full"
) -> Tuple[ResolutionGraph, Dict[int, int]]:
    """Blow down rational (-1)-curves of valency at most two.

    ``mode="full"`` repeats until none remain.  ``mode="quasi"`` only blows
    down a (-1)-vertex when its string holds more than that one vertex, so the
    result is quasi-minimal.  Arrows count toward valency; an arrow on a
    blown-down vertex moves to its unique neighbor (and is dropped if there is
    none).  Returns the new graph and the map from surviving old indices to
    new ones.
    """
    if mode not in ("full", "quasi"):
        raise ValueError(f"unknown mode {mode!r}")
    verts: Dict[int, Vertex] = dict(enumerate(g.vertices))
    adj: Dict[int, set] = {i: set(g.neighbors(i)) for i in verts}
    arrows: Dict[int, List[int]] = {}
    for v, m in g.arrows:
        arrows.setdefault(v, []).append(m)

    def is_rupture(v):
        return verts[v].genus > 0 or len(adj[v]) + len(arrows.get(v, ())) >= 3

    def string_of(v):
        # maximal set of non-rupture vertices connected to v
        out = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in out and not is_rupture(y):
                    out.add(y)
                    stack.append(y)
        return out

    def strings_ok(v):
        return len(string_of(v)) == 1

    work = sorted(verts)
    while work:
        next_round = []
        changed = False
        for v in work:
            if v not in verts:
                continue
            if not _blowdown_candidate(verts, adj, arrows, v, mode, strings_ok):
                continue
            nbrs = sorted(adj[v])
            for w in nbrs:
                adj[w].discard(v)
                verts[w] = Vertex(verts[w].e + 1, verts[w].genus, verts[w].mult, verts[w].label)
            if len(nbrs) == 2:
                a, b = nbrs
                adj[a].add(b)
                adj[b].add(a)
            moved = arrows.pop(v, [])
            if moved and len(nbrs) == 1:
                arrows.setdefault(nbrs[0], []).extend(moved)
            del verts[v]
            del adj[v]
            changed = True
            next_round.extend(nbrs)
        if not changed:
            break
        # neighbors may have become candidates; in quasi mode string shapes change too
        work = sorted(verts) if mode == "quasi" else sorted(set(x for x in next_round if x in verts))
    keep = sorted(verts)
    index = {old: new for new, old in enumerate(keep)}
    edges = set()
    for v in keep:
        for w in adj[v]:
            edges.add((min(index[v], index[w]), max(index[v], index[w])))
    arrow_list = [(index[v], m) for v in keep for m in arrows.get(v, ())]
    return ResolutionGraph([verts[v] for v in keep], edges, arrow_list), index


def minimalize(g: ResolutionGraph, mode: str = "full") -> ResolutionGraph:
    return minimalize_with_map(g, mode)[0]


# ---------------------------------------------------------------- splice diagrams


@dataclass(frozen=True)
class DiagramEdge:
    """An edge of a splice diagram seen from ``source``.

    ``first`` is the graph neighbor of ``source`` along the edge, ``target`` the
    diagram vertex at the far end and ``interior`` the string vertices between.
    ``weight`` is ``d_ve`` when ``source`` is a node and None at a leaf.
    """

    source: int
    first: int
    target: int
    interior: Tuple[int, ...]
    weight: Optional[int]


@dataclass
class SpliceDiagram:
    graph: ResolutionGraph
    nodes: Tuple[int, ...]
    leaves: Tuple[int, ...]
    edges: Dict[int, Tuple[DiagramEdge, ...]] = field(default_factory=dict)
    det: int = 1

    def is_degenerate(self) -> bool:
        return not self.nodes

    def edge_list(self, v: int) -> Tuple[DiagramEdge, ...]:
        return self.edges[v]

    def weight(self, v: int, first: int) -> int:
        for e in self.edges[v]:
            if e.first == first:
                return e.weight
        raise KeyError((v, first))

    def node_weight(self, v: int) -> int:
        """``d_v``, the product of the weights around node ``v``."""
        return prod(e.weight for e in self.edges[v])

    def leaf_node(self, leaf: int) -> int:
        (e,) = self.edges[leaf]
        return e.target

    def leaf_edge(self, leaf: int) -> DiagramEdge:
        (e,) = self.edges[leaf]
        return e

    def neighbors(self, x: int) -> List[int]:
        return [e.target for e in self.edges[x]]

    def diagram_path(self, x: int, y: int) -> List[int]:
        parent = {x: None}
        stack = [x]
        while stack:
            v = stack.pop()
            if v == y:
                break
            for w in self.neighbors(v):
                if w not in parent:
                    parent[w] = v
                    stack.append(w)
        if y not in parent:
            raise GraphError(f"{x} and {y} are not connected in the diagram")
        out = [y]
        while out[-1] != x:
            out.append(parent[out[-1]])
        return out[::-1]

    def side_leaves(self, v: int, first: int) -> List[int]:
        """Leaves of the diagram beyond the edge of node ``v`` starting at ``first``."""
        (e,) = [x for x in self.edges[v] if x.first == first]
        out = []
        seen = {v, e.target}
        stack = [e.target]
        while stack:
            x = stack.pop()
            if x in self.leaves_set:
                out.append(x)
            for y in self.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return sorted(out)

    @property
    def leaves_set(self):
        return frozenset(self.leaves)


def _branch_dets(g: ResolutionGraph, directed: Iterable[Tuple[int, int]]) -> Dict[Tuple[int, int], int]:
    """det of the component of ``g - u`` containing ``w`` for each requested ``(u, w)``.

    Directed branch values are memoized, so asking for every edge at every
    node costs roughly a sum of squared degrees.
    """
    full: Dict[Tuple[int, int], int] = {}
    minus: Dict[Tuple[int, int], int] = {}

    def solve(u0, w0):
        stack = [(u0, w0, False)]
        while stack:
            u, w, expanded = stack.pop()
            if (u, w) in full:
                continue
            kids = [x for x in g.neighbors(w) if x != u]
            if not expanded:
                stack.append((u, w, True))
                for x in kids:
                    if (w, x) not in full:
                        stack.append((w, x, False))
                continue
            dets = [full[(w, x)] for x in kids]
            k = len(dets)
            pre = [1] * (k + 1)
            for i, x in enumerate(dets):
                pre[i + 1] = pre[i] * x
            suf = [1] * (k + 1)
            for i in range(k - 1, -1, -1):
                suf[i] = suf[i + 1] * dets[i]
            corr = sum(minus[(w, x)] * pre[i] * suf[i + 1] for i, x in enumerate(kids))
            minus[(u, w)] = pre[k]
            full[(u, w)] = -g.vertices[w].e * pre[k] - corr

    out = {}
    for u, w in directed:
        if (u, w) not in full:
            solve(u, w)
        out[(u, w)] = full[(u, w)]
    return out


def splice_extract(g: ResolutionGraph) -> SpliceDiagram:
    """Contract strings of a plumbing tree and weight each node edge by ``det(-C_ve)``.

    Arrows are ignored.  A graph with no node gives a degenerate diagram.
    """
    if len(g) == 0 or not g.is_tree():
        raise GraphError("splice diagrams need a non-empty tree")
    for i, v in enumerate(g.vertices):
        if v.genus > 0:
            raise NotQHSError(f"vertex {i} has genus {v.genus}; not QHS, splice machinery inapplicable")
    nodes = tuple(i for i in range(len(g)) if g.degree(i) >= 3)
    leaves = tuple(i for i in range(len(g)) if g.degree(i) <= 1)
    det = determinant(g)
    if not nodes:
        return SpliceDiagram(g, (), leaves, {x: () for x in leaves}, det)
    node_set = set(nodes)
    marked = node_set | set(leaves)
    requests = [(v, w) for v in nodes for w in g.neighbors(v)]
    branch = _branch_dets(g, requests)
    edges: Dict[int, List[DiagramEdge]] = {x: [] for x in nodes + leaves}
    for v in nodes:
        for w in g.neighbors(v):
            interior = []
            prev, cur = v, w
            while cur not in marked:
                interior.append(cur)
                (nxt,) = [x for x in g.neighbors(cur) if x != prev]
                prev, cur = cur, nxt
            edges[v].append(DiagramEdge(v, w, cur, tuple(interior), branch[(v, w)]))
            if cur not in node_set:
                back_first = interior[-1] if interior else v
                edges[cur].append(DiagramEdge(cur, back_first, v, tuple(reversed(interior)), None))
    return SpliceDiagram(g, nodes, leaves, {k: tuple(vs) for k, vs in edges.items()}, det)


def linking(delta: SpliceDiagram, x: int, y: int, variant: str = "full") -> int:
    """Product of weights adjacent to, but not on, the diagram path from ``x`` to ``y``.

    ``variant="reduced"`` also drops the weights around the endpoints.
    """
    if x == y:
        raise GraphError("linking needs two distinct vertices")
    if variant not in ("full", "reduced"):
        raise ValueError(f"unknown variant {variant!r}")
    path = delta.diagram_path(x, y)
    out = 1
    for i, v in enumerate(path):
        if v not in delta.edges or delta.edges[v] == () or delta.edges[v][0].weight is None:
            continue  # leaves carry no weights
        if variant == "reduced" and (i == 0 or i == len(path) - 1):
            continue
        on_path = set()
        if i > 0:
            on_path.add(path[i - 1])
        if i < len(path) - 1:
            on_path.add(path[i + 1])
        for e in delta.edges[v]:
            if e.target not in on_path:
                out *= e.weight
    return out


def leaf_string_fraction(g: ResolutionGraph, leaf: int) -> Tuple[int, int]:
    """``(d, p)`` of the string from ``leaf`` to its node, read starting at the leaf."""
    if g.degree(leaf) > 1:
        raise GraphError(f"vertex {leaf} is not a leaf")
    terms = []
    prev, cur = None, leaf
    while True:
        if g.degree(cur) >= 3:
            break
        terms.append(-g.vertices[cur].e)
        nxt = [x for x in g.neighbors(cur) if x != prev]
        if not nxt:
            raise GraphError(f"leaf {leaf} has no node in its component")
        prev, cur = cur, nxt[0]
    return hj_eval(terms)


def leaf_self_pairing(g: ResolutionGraph, delta: SpliceDiagram, leaf: int) -> Residue:
    """``e_w . e_w`` in Q/Z via ``-d_v/(d^2 det) - p/d``."""
    d, p = leaf_string_fraction(g, leaf)
    dv = delta.node_weight(delta.leaf_node(leaf))
    return Residue(Fraction(-dv, d * d * delta.det) - Fraction(p, d))


# ---------------------------------------------------------------- text formats


def graph_to_text(g: ResolutionGraph) -> str:
    """Line format: ``vertex id e genus [mult]``, ``edge id id``, ``arrow id [mult]``."""
    lines = []
    for i, v in enumerate(g.vertices):
        tail = f" {v.mult}" if v.mult is not None else ""
        lines.append(f"vertex {i} {v.e} {v.genus}{tail}")
    for u, w in g.edges:
        lines.append(f"edge {u} {w}")
    for v, m in g.arrows:
        lines.append(f"arrow {v} {m}")
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> ResolutionGraph:
    verts: Dict[int, Vertex] = {}
    edges = []
    arrows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "vertex" and len(tok) in (4, 5):
                idx = int(tok[1])
                if idx in verts:
                    raise GraphError(f"line {lineno}: duplicate vertex {idx}")
                mult = int(tok[4]) if len(tok) == 5 else None
                verts[idx] = Vertex(int(tok[2]), int(tok[3]), mult)
            elif tok[0] == "edge" and len(tok) == 3:
                edges.append((int(tok[1]), int(tok[2])))
            elif tok[0] == "arrow" and len(tok) in (2, 3):
                arrows.append((int(tok[1]), int(tok[2]) if len(tok) == 3 else 1))
            else:
                raise GraphError(f"line {lineno}: cannot parse {raw!r}")
        except ValueError as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"line {lineno}: cannot parse {raw!r}") from None
    if sorted(verts) != list(range(len(verts))):
        raise GraphError("vertex ids must be 0..V-1")
    return ResolutionGraph([verts[i] for i in range(len(verts))], edges, arrows)


def diagram_to_text(delta: SpliceDiagram) -> str:
    """``node id``, ``leaf id d p`` and ``weight node first target d_ve`` lines."""
    lines = [f"det {delta.det}"]
    for v in delta.nodes:
        lines.append(f"node {v}")
    for w in delta.leaves:
        if delta.nodes:
            d, p = leaf_string_fraction(delta.graph, w)
            lines.append(f"leaf {w} {d} {p}")
        else:
            lines.append(f"leaf {w}")
    for v in delta.nodes:
        for e in delta.edges[v]:
            lines.append(f"weight {v} {e.first} {e.target} {e.weight}")
    return "\n".join(lines) + "\n"
