"""Closed-form invariants of z^n = f and the topological classification.

These formulas are independent of the graph construction in
:mod:`splicecheck.builder`, which is what makes them useful as oracles: the
sweep compares every determinant and pairing computed here with the value
read off the built graph.

Notation follows :class:`splicecheck.curve.CoverInvariants`; ``hh(k)`` is
``h_k * hbar_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Optional, Tuple

from .curve import PairSystem, classify_link, cover_invariants, to_topological
from .numeric import Residue, prod

__all__ = [
    "ClosedFormWeights",
    "TheoremVerdict",
    "weights_closed_form",
    "linking_closed_form",
    "edote_closed_form",
    "reduced_minus_condition",
    "main_theorem_classify",
    "YES_CASE_I",
    "YES_CASE_II",
    "YES_PATHOLOGICAL",
    "NO",
    "NOT_QHS",
    "WEIGHTED_HOMOGENEOUS",
]

YES_CASE_I = "YES_case_i"
YES_CASE_II = "YES_case_ii"
YES_PATHOLOGICAL = "YES_pathological"
NO = "NO"
NOT_QHS = "NOT_QHS"
WEIGHTED_HOMOGENEOUS = "WEIGHTED_HOMOGENEOUS"


def _exact(num: int, den: int, what: str) -> int:
    if num % den:
        raise ArithmeticError(f"{what} is not an integer: {num}/{den}")
    return num // den


@dataclass(frozen=True)
class ClosedFormWeights:
    """Determinants of the standard subgraphs of the canonical cover graph.

    ``D_vbar[k]`` for ``0 <= k <= s``; ``D_v``, ``D_minus`` for ``1 <= k <= s``;
    ``D_A[k]`` for ``1 <= k <= s`` (``D_A[s]`` is the arrow string ``D_v[s]``);
    ``A`` and ``A_tilde`` for ``1 <= k <= s - 1``.
    """

    D_vbar: Dict[int, int]
    D_v: Dict[int, int]
    D_minus: Dict[int, int]
    D_A: Dict[int, int]
    det: int
    A: Dict[int, int] = field(default_factory=dict)
    A_tilde: Dict[int, int] = field(default_factory=dict)


def _A_values(inv) -> Dict[int, int]:
    s, a, p, q, pr = inv.s, inv.a, inv.p, inv.q, inv.p_red
    A: Dict[int, int] = {}
    if s < 2:
        return A
    A[s - 1] = a[s - 1] * p[s - 1] * pr[s] + q[s]
    for k in range(s - 2, 0, -1):
        A[k] = a[k] * p[k] * pr[k + 1] * A[k + 1] + q[k + 1] * prod(a[k + 2 : s + 1])
    return A


def _A_tilde(inv) -> Dict[int, int]:
    s, a, p = inv.s, inv.a, inv.p
    out: Dict[int, int] = {}
    for k in range(1, s):
        if k == s - 1:
            out[k] = a[s] - a[s - 1] * p[s - 1]
        else:
            out[k] = a[s] - a[k] * p[k] * prod(x * x for x in p[k + 1 : s])
    return out


def weights_closed_form(ps: PairSystem, n: int) -> ClosedFormWeights:
    inv = cover_invariants(ps, n)
    s, a, p, q, d = inv.s, inv.a, inv.p, inv.q, inv.d
    h, hb, pr, ar = inv.h, inv.hbar, inv.p_red, inv.a_red

    D_vbar = {0: ar[1]}
    for k in range(1, s + 1):
        D_vbar[k] = pr[k]
    D_v = {s: _exact(n, h[s] * hb[s], "D(v_s)")}
    for k in range(1, s):
        D_v[k] = _exact(n * q[k + 1], d[k - 1] * hb[k] * hb[k + 1], f"D(v_{k})")

    D_minus = {1: ar[1]}
    for k in range(2, s + 1):
        ratio_prev = _exact(D_minus[k - 1], ar[k - 1], f"D_-({k - 1})/a'_{k - 1}")
        ratio = ar[k - 1] ** (h[k - 1] - 1) * pr[k - 1] ** (hb[k - 1] - 1) * ratio_prev ** h[k - 1]
        D_minus[k] = ratio * ar[k]

    A = _A_values(inv)
    D_A = {s: D_v[s]}
    for k in range(1, s):
        num = n * A[k]
        for j in range(k + 1, s + 1):
            num *= pr[j] ** (hb[j] - 1) * D_minus[j] ** (h[j] - 1)
        D_A[k] = _exact(num, inv.hh(k) * d[k] * prod(a[k + 1 : s + 1]), f"D_A({k})")

    ratio_s = _exact(D_minus[s], ar[s], "D_-(s)/a'_s")
    det = ar[s] ** (h[s] - 1) * pr[s] ** (hb[s] - 1) * ratio_s ** h[s]
    return ClosedFormWeights(D_vbar, D_v, D_minus, D_A, det, A, _A_tilde(inv))


def linking_closed_form(ps: PairSystem, n: int, k: int, j: int) -> int:
    """``l'_{v w_j}`` for a node ``v`` of type ``v_k`` and a leaf of type ``vbar_j`` below it."""
    inv = cover_invariants(ps, n)
    if not (2 <= k <= inv.s and 0 <= j <= k - 1):
        raise IndexError(f"need 2 <= k <= s and 0 <= j < k, got k={k}, j={j}")
    w = weights_closed_form(ps, n)
    base = _exact(w.D_minus[k], inv.a_red[k], f"D_-({k})/a'_{k}")
    pr, ar = inv.p_red, inv.a_red
    if j == 0:
        return base * prod(pr[1:k])
    if j == k - 1:
        return base * ar[k - 1]
    return base * ar[j] * prod(pr[j + 1 : k])


def edote_closed_form(ps: PairSystem, n: int, k: int) -> Residue:
    """``[e_w . e_w]`` for a leaf ``w`` of type ``vbar_k``."""
    inv = cover_invariants(ps, n)
    s, a, p = inv.s, inv.a, inv.p
    pr, ar, d = inv.p_red, inv.a_red, inv.d
    if not inv.is_qhs():
        raise ValueError("pairings are only defined here for QHS links")
    if not 0 <= k <= s:
        raise IndexError(f"k={k} out of range 0..{s}")
    if (k == 0 and ar[1] == 1) or (k >= 1 and pr[k] == 1):
        raise ValueError(f"leaves of type vbar_{k} collapse; no pairing to report")
    A = _A_values(inv)
    if k == s:
        return Residue(Fraction((n // inv.hh(s)) * (a[s] - ar[s]), pr[s]))
    if k == 0:
        if s < 2:
            raise ValueError("the vbar_0 formula needs s >= 2")
        tail = prod(a[2 : s + 1])
        return Residue(Fraction((n // (inv.hh(1) * d[1])) * (p[1] * tail - A[1] * pr[1]), ar[1] * tail))
    tail = prod(a[k + 1 : s + 1])
    return Residue(Fraction((n // (inv.hh(k) * d[k])) * (a[k] * tail - A[k] * ar[k]), pr[k] * tail))


def reduced_minus_condition(ps: PairSystem, n: int, k: int) -> bool:
    """The semigroup condition toward a ``Gamma_-`` side at a node of type ``v_k``.

    Reduced to ``a'_k in <a'_{k-1}, p'_1...p'_{k-1}, a'_j p'_{j+1}...p'_{k-1}>``.
    """
    from .nw import semigroup_member

    inv = cover_invariants(ps, n)
    if not 2 <= k <= inv.s:
        raise IndexError(f"need 2 <= k <= s, got {k}")
    pr, ar = inv.p_red, inv.a_red
    gens = [ar[k - 1], prod(pr[1:k])] + [ar[j] * prod(pr[j + 1 : k]) for j in range(1, k - 1)]
    status, _ = semigroup_member(ar[k], gens)
    return status == "holds"


@dataclass(frozen=True)
class TheoremVerdict:
    kind: str
    witness: Optional[Tuple[Tuple[int, int], ...]] = None  # (generator, coefficient) pairs
    detail: str = ""

    @property
    def is_yes(self) -> bool:
        return self.kind.startswith("YES")


def main_theorem_classify(ps: PairSystem, n: int) -> TheoremVerdict:
    from .nw import semigroup_member

    top = to_topological(ps)
    link = classify_link(top, n)
    if not link.is_qhs:
        return TheoremVerdict(NOT_QHS, detail="(h_k - 1)(hbar_k - 1) != 0 for some k")
    s = top.s
    p = top.p
    a = top.second
    if s == 1:
        return TheoremVerdict(WEIGHTED_HOMOGENEOUS, detail="s = 1")
    if link.pathological:
        if s == 2:
            return TheoremVerdict(YES_PATHOLOGICAL, detail="n = p_s = 2 and s = 2")
        return TheoremVerdict(NO, detail="n = p_s = 2 with s > 2")
    coprime_below = all(gcd(n, p[i]) == 1 and gcd(n, a[i]) == 1 for i in range(1, s))
    if gcd(n, p[s]) == 1 and coprime_below:
        target = a[s] // gcd(n, a[s])
        gens = [a[s - 1], prod(p[1:s])] + [a[j] * prod(p[j + 1 : s]) for j in range(1, s - 1)]
        status, witness = semigroup_member(target, gens)
        if status == "holds":
            pairs = tuple((g, c) for g, c in zip(gens, witness))
            return TheoremVerdict(YES_CASE_I, pairs, f"{target} in <{', '.join(map(str, gens))}>")
        if status != "fails":
            raise RuntimeError(f"membership of {target} undecided")
    if (
        s == 2
        and p[2] == 2
        and gcd(n, p[2]) == 2
        and gcd(n, a[2]) == 1
        and gcd(n // 2, p[1]) == 1
        and gcd(n // 2, a[1]) == 1
    ):
        return TheoremVerdict(YES_CASE_II, detail="s = 2, p_2 = 2, (n, p_2) = 2")
    return TheoremVerdict(NO)
