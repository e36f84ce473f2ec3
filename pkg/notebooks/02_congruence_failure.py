"""
Semigroup conditions hold, congruence conditions fail
=====================================================

For pairs (2,3),(3,20) and n = 2 every edge weight lies in its semigroup,
yet no admissible monomial transforms correctly under the discriminant group.
"""

from splicecheck import build_cover_graph, check_all, parse_pairs
from splicecheck.graph import diagram_to_text, linking

ps = parse_pairs("2:3,3:20")
b = build_cover_graph(ps, 2)
d = b.diagram
print(diagram_to_text(d))

report = check_all(b)
print(report.verdict)

for e in report.edges:
    if e.semigroup == "trivial":
        continue  # edges ending at a leaf impose nothing
    print(e.node, "->", e.target, "weight", e.weight, "generators", e.generators)
    print("   semigroup", e.semigroup, "witness", e.witness, "congruence", e.congruence)

# the failing edge: the reduced linking numbers and the node's linking numbers
bad = report.failures()[0]
for w in d.leaves:
    print(w, linking(d, bad.node, w), "/", d.det)
