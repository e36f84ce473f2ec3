"""
z^n = (x^3 + y^2)^2 + y^5 for many n
====================================

The branch y^5 + (x^3 + y^2)^2 has topological pairs (2,3),(2,15).  Walk
through the classification of the n-fold cyclic covers and compare it with
the checker that builds the resolution graph and tests the conditions.
"""

from splicecheck import build_cover_graph, check_all, classify_link, main_theorem_classify, parse_pairs
from splicecheck.curve import NEWTON, to_topological

ps = parse_pairs("2:3,2:15")

# the same branch written with Newton pairs
print(to_topological(parse_pairs("2:3,2:3", NEWTON)).text())

# link class, closed-form verdict and the checker verdict side by side
for n in (2, 3, 5, 6, 7, 9, 10, 11, 14, 21, 22, 25, 30, 35, 49):
    link = classify_link(ps, n)
    verdict = main_theorem_classify(ps, n)
    checker = check_all(build_cover_graph(ps, n)).verdict
    print(f"n={n:>2}  {link.kind:<6}  {verdict.kind:<18} {checker}")

# a closer look at n = 5: two nodes, seven leaves, discriminant group of order 16
b = build_cover_graph(ps, 5)
d = b.diagram
print(len(d.nodes), len(d.leaves), d.det)
for v in d.nodes:
    print(v, sorted(e.weight for e in d.edge_list(v)))  # 2,3,80 and 2,2,2,2,2,3

# the case (i) witness: 3 = 1*3 + 0*2
print(main_theorem_classify(ps, 5).witness)
