"""
Desk-scale re-verification
==========================

Sweep pair systems with s in {2,3}, p_k in {2,3} and small a_k over
2 <= n <= 20.  Each instance is checked twice: once by the closed-form
classification and once by building the graph and running the general
checker.  The built graphs are also compared against closed-form determinants
and self-pairings.
"""

from collections import Counter

from splicecheck.sweep import sweep_domain, validate_instance

domain = sweep_domain(s_values=(2,), p_values=(2, 3), count=3, n_values=range(2, 21))
print(len(domain), "QHS instances")

results = [validate_instance(ps, n) for ps, n in domain]
print(Counter((r.closed_form_verdict, r.checker_verdict) for r in results))

# any disagreement or oracle mismatch would show up here
print([r for r in results if r.agree is False or r.problems])

# the same run from the shell, with s = 3 included and four workers:
#   splicecheck sweep --workers 4 --output sweep.csv
