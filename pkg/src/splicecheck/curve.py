"""Pair systems of irreducible plane curve germs and the invariants of z^n = f.

Three equivalent encodings are supported:

* Newton pairs ``(p_k, q_k)``,
* topological pairs ``(p_k, a_k)`` with ``a_1 = q_1`` and
  ``a_k = q_k + a_{k-1} p_{k-1} p_k``,
* Puiseux pairs ``(p_k, m_k)`` with ``a_1 = m_1`` and
  ``a_k = m_k - m_{k-1} p_k + a_{k-1} p_{k-1} p_k``.

Indices are 1-based throughout to match the usual notation; sequences indexed
by ``k`` carry a ``None`` placeholder in slot 0 where ``k = 0`` is meaningless.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence, Tuple

from .numeric import prod

__all__ = [
    "NEWTON",
    "TOPOLOGICAL",
    "PUISEUX",
    "PairSystem",
    "PairValidationError",
    "CoverInvariants",
    "LinkClass",
    "validate",
    "parse_pairs",
    "newton_to_topological",
    "topological_to_newton",
    "puiseux_convert",
    "to_topological",
    "semigroup_generators",
    "cover_invariants",
    "classify_link",
]

NEWTON = "newton"
TOPOLOGICAL = "topological"
PUISEUX = "puiseux"
KINDS = (NEWTON, TOPOLOGICAL, PUISEUX)


class PairValidationError(ValueError):
    """A pair system violates one of its defining constraints."""

    def __init__(self, message: str, index: Optional[int] = None, constraint: str = ""):
        super().__init__(message)
        self.index = index
        self.constraint = constraint


@dataclass(frozen=True)
class PairSystem:
    kind: str
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(p), int(x)) for p, x in self.pairs))

    @property
    def s(self) -> int:
        return len(self.pairs)

    @property
    def p(self) -> Tuple[Optional[int], ...]:
        """``p[k]`` for ``1 <= k <= s``; ``p[0]`` is ``None``."""
        return (None,) + tuple(p for p, _ in self.pairs)

    @property
    def second(self) -> Tuple[Optional[int], ...]:
        return (None,) + tuple(x for _, x in self.pairs)

    def text(self) -> str:
        return ",".join(f"{p}:{x}" for p, x in self.pairs)

    def __str__(self):
        return f"{self.kind} {self.text()}"


def parse_pairs(text: str, kind: str = TOPOLOGICAL) -> PairSystem:
    """Parse ``"p1:x1,p2:x2,..."``; the result is validated."""
    if kind not in KINDS:
        raise PairValidationError(f"unknown pair kind {kind!r}")
    pairs = []
    for chunk in text.replace(" ", "").split(","):
        if not chunk:
            continue
        try:
            p, x = chunk.split(":")
            pairs.append((int(p), int(x)))
        except ValueError:
            raise PairValidationError(f"cannot parse pair {chunk!r}; expected 'p:x'") from None
    return validate(PairSystem(kind, tuple(pairs)))


def _check_newton(pairs):
    if not pairs:
        raise PairValidationError("empty pair system", None, "s>=1")
    for k, (p, q) in enumerate(pairs, start=1):
        if p < 2:
            raise PairValidationError(f"p_{k}={p} must be >= 2", k, "p_k>=2")
        if q < 1:
            raise PairValidationError(f"q_{k}={q} must be >= 1", k, "q_k>=1")
        if gcd(p, q) != 1:
            raise PairValidationError(f"gcd(p_{k}, q_{k}) = gcd({p}, {q}) != 1", k, "gcd(p_k,q_k)=1")
    p1, q1 = pairs[0]
    if not q1 > p1:
        raise PairValidationError(f"q_1={q1} must exceed p_1={p1}", 1, "q_1>p_1")


def _check_topological(pairs):
    if not pairs:
        raise PairValidationError("empty pair system", None, "s>=1")
    prev = None
    for k, (p, a) in enumerate(pairs, start=1):
        if p < 2:
            raise PairValidationError(f"p_{k}={p} must be >= 2", k, "p_k>=2")
        if gcd(p, a) != 1:
            raise PairValidationError(f"gcd(p_{k}, a_{k}) = gcd({p}, {a}) != 1", k, "gcd(p_k,a_k)=1")
        if k == 1:
            if not a > p:
                raise PairValidationError(f"a_1={a} must exceed p_1={p}", 1, "a_1>p_1")
        else:
            pp, pa = prev
            if not a > pa * pp * p:
                raise PairValidationError(
                    f"a_{k}={a} must exceed a_{k-1} p_{k-1} p_{k} = {pa * pp * p}", k, "a_k>a_{k-1}p_{k-1}p_k"
                )
        prev = (p, a)


def validate(ps: PairSystem) -> PairSystem:
    """Return ``ps`` unchanged if valid, else raise :class:`PairValidationError`."""
    if ps.kind == NEWTON:
        _check_newton(ps.pairs)
    elif ps.kind == TOPOLOGICAL:
        _check_topological(ps.pairs)
    elif ps.kind == PUISEUX:
        if not ps.pairs:
            raise PairValidationError("empty pair system", None, "s>=1")
        for k, (p, m) in enumerate(ps.pairs, start=1):
            if p < 2 or m < 1:
                raise PairValidationError(f"pair {k} = ({p}, {m}) is not positive", k, "positivity")
        _check_topological(_puiseux_to_top(ps.pairs))
    else:
        raise PairValidationError(f"unknown pair kind {ps.kind!r}")
    return ps


def newton_to_topological(ps: PairSystem) -> PairSystem:
    validate(ps)
    if ps.kind != NEWTON:
        raise PairValidationError(f"expected newton pairs, got {ps.kind}")
    out = []
    for k, (p, q) in enumerate(ps.pairs):
        if k == 0:
            a = q
        else:
            pp, pa = out[-1]
            a = q + pa * pp * p
        out.append((p, a))
    return validate(PairSystem(TOPOLOGICAL, tuple(out)))


def topological_to_newton(ps: PairSystem) -> PairSystem:
    if ps.kind != TOPOLOGICAL:
        raise PairValidationError(f"expected topological pairs, got {ps.kind}")
    out = []
    for k, (p, a) in enumerate(ps.pairs):
        if k == 0:
            q = a
        else:
            pp, pa = ps.pairs[k - 1]
            q = a - pa * pp * p
        if q < 1:
            raise PairValidationError(f"derived q_{k + 1}={q} < 1", k + 1, "q_k>=1")
        out.append((p, q))
    return validate(PairSystem(NEWTON, tuple(out)))


def _puiseux_to_top(pairs):
    out = []
    for k, (p, m) in enumerate(pairs):
        if k == 0:
            a = m
        else:
            pp, pa = out[-1]
            pm = pairs[k - 1][1]
            a = m - pm * p + pa * pp * p
        out.append((p, a))
    return tuple(out)


def _top_to_puiseux(pairs):
    out = []
    for k, (p, a) in enumerate(pairs):
        if k == 0:
            m = a
        else:
            pp, pa = pairs[k - 1]
            pm = out[-1][1]
            m = a + pm * p - pa * pp * p
        out.append((p, m))
    return tuple(out)


def puiseux_convert(ps: PairSystem, direction: str) -> PairSystem:
    """Convert between Puiseux and topological pairs.

    ``direction`` is ``"to_topological"`` or ``"to_puiseux"``.
    """
    if direction == "to_topological":
        if ps.kind != PUISEUX:
            raise PairValidationError(f"expected puiseux pairs, got {ps.kind}")
        validate(ps)
        return validate(PairSystem(TOPOLOGICAL, _puiseux_to_top(ps.pairs)))
    if direction == "to_puiseux":
        if ps.kind != TOPOLOGICAL:
            raise PairValidationError(f"expected topological pairs, got {ps.kind}")
        validate(ps)
        out = PairSystem(PUISEUX, _top_to_puiseux(ps.pairs))
        for k, (p, m) in enumerate(out.pairs, start=1):
            if m < 1:
                raise PairValidationError(f"derived m_{k}={m} < 1", k, "m_k>=1")
        return validate(out)
    raise ValueError(f"unknown direction {direction!r}")


def to_topological(ps: PairSystem) -> PairSystem:
    if ps.kind == TOPOLOGICAL:
        return validate(ps)
    if ps.kind == NEWTON:
        return newton_to_topological(ps)
    return puiseux_convert(ps, "to_topological")


def semigroup_generators(ps: PairSystem) -> Tuple[int, ...]:
    """Generators ``beta_0, ..., beta_s`` of the value semigroup of the branch."""
    ps = to_topological(ps)
    p = [x for x, _ in ps.pairs]
    a = [x for _, x in ps.pairs]
    s = ps.s
    gens = [prod(p)]
    for k in range(1, s):
        gens.append(a[k - 1] * prod(p[k:]))
    gens.append(a[s - 1])
    return tuple(gens)


@dataclass(frozen=True)
class CoverInvariants:
    """Integers attached to ``(pairs, n)``.

    ``d`` is indexed ``0..s``; ``h``, ``hbar``, ``p_red`` (p'_k) and ``a_red``
    (a'_k), like ``p``, ``a`` and ``q``, are indexed ``1..s`` with slot 0 unused.
    """

    n: int
    s: int
    p: Tuple[Optional[int], ...]
    a: Tuple[Optional[int], ...]
    q: Tuple[Optional[int], ...]
    d: Tuple[int, ...]
    h: Tuple[Optional[int], ...]
    hbar: Tuple[Optional[int], ...]
    p_red: Tuple[Optional[int], ...]
    a_red: Tuple[Optional[int], ...]

    def hh(self, k: int) -> int:
        """``h_k * hbar_k``."""
        return self.h[k] * self.hbar[k]

    def is_qhs(self) -> bool:
        return all((self.h[k] - 1) * (self.hbar[k] - 1) == 0 for k in range(1, self.s + 1))

    def is_zhs(self) -> bool:
        return all(self.h[k] == 1 and self.hbar[k] == 1 for k in range(1, self.s + 1))


def cover_invariants(ps: PairSystem, n: int) -> CoverInvariants:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    top = to_topological(ps)
    s = top.s
    p = top.p
    a = top.second
    q = (None,) + tuple(x for _, x in topological_to_newton(top).pairs)
    d = [0] * (s + 1)
    d[s] = 1
    for k in range(s):
        d[k] = gcd(n, prod(p[k + 1 :]))
    h = [None] * (s + 1)
    hbar = [None] * (s + 1)
    pr = [None] * (s + 1)
    ar = [None] * (s + 1)
    for k in range(1, s + 1):
        h[k] = gcd(p[k], n // d[k])
        hbar[k] = gcd(a[k], n // d[k])
        pr[k] = p[k] // h[k]
        ar[k] = a[k] // hbar[k]
    return CoverInvariants(n, s, p, a, q, tuple(d), tuple(h), tuple(hbar), tuple(pr), tuple(ar))


@dataclass(frozen=True)
class LinkClass:
    kind: str  # "ZHS", "QHS" or "NotQHS"
    pathological: bool
    weighted_homogeneous: bool

    @property
    def is_qhs(self) -> bool:
        return self.kind != "NotQHS"


def classify_link(ps: PairSystem, n: int) -> LinkClass:
    top = to_topological(ps)
    inv = cover_invariants(top, n)
    zhs = all(gcd(n, p) == 1 and gcd(n, a) == 1 for p, a in top.pairs)
    if zhs:
        kind = "ZHS"
    elif inv.is_qhs():
        kind = "QHS"
    else:
        kind = "NotQHS"
    pathological = n == 2 and top.pairs[-1][0] == 2
    return LinkClass(kind, pathological, top.s == 1)
