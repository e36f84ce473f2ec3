"""
Splice diagram equations
========================

The E8 plumbing has one node with weights 2, 3, 5 and gives back the
Brieskorn equation.  The n = 5 cover of (2,3),(2,15) gives five equations
in seven variables.
"""

from splicecheck import ResolutionGraph, Vertex, build_cover_graph, check_all, emit_splice_equations, parse_pairs
from splicecheck.graph import determinant, splice_extract
from splicecheck.nw import check_diagram

# E8: a -2 node with legs of length 1, 2 and 4
vs = [Vertex(-2) for _ in range(8)]
e8 = ResolutionGraph(vs, [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7)])
print(determinant(e8))

d = splice_extract(e8)
eqs = emit_splice_equations(d, check_diagram(d))
print(eqs.render())

b = build_cover_graph(parse_pairs("2:3,2:15"), 5)
eqs = emit_splice_equations(b.diagram, check_all(b))
for line in eqs.render():
    print(line)
print(eqs.homogeneous)  # weighted homogeneous at both nodes
