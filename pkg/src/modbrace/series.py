"""Star spans and the left, right and derived series of a brace."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .brace_core import Brace, BraceError, classify_subset, quotient_brace

LEFT, RIGHT, DERIVED = "left", "right", "derived"
CSV_BOUND = 64


def star_span(b: Brace, X: Iterable[int], Y: Iterable[int]) -> frozenset[int]:
    """Additive subgroup generated by x * y for x in X, y in Y."""
    X = np.array(sorted(set(X)), dtype=np.int64)
    Y = np.array(sorted(set(Y)), dtype=np.int64)
    if not len(X) or not len(Y):
        return frozenset({0})
    return b.module.span(np.unique(b.star_table[np.ix_(X, Y)]).tolist())


@dataclass
class SeriesReport:
    kind: str
    chain: list[frozenset[int]]
    cls: int | None
    flags: list[dict[str, bool]] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def reaches_zero(self) -> bool:
        return self.chain[-1] == frozenset({0})

    def term(self, k: int) -> frozenset[int]:
        """The k-th term (1-based); stable terms repeat."""
        return self.chain[min(k, len(self.chain)) - 1]

    @property
    def orders(self) -> list[int]:
        return [len(t) for t in self.chain]

    def to_json(self) -> dict:
        return {"kind": self.kind, "class": self.cls,
                "chain": [sorted(t) for t in self.chain], "flags": self.flags,
                "violations": self.violations}


def _log_p(b: Brace) -> int | None:
    p = b.module.p
    if b.size == 1:
        return 0
    return round(math.log(b.size, p)) if p else None


def _series(b: Brace, kind: str) -> SeriesReport:
    N = frozenset(range(b.size))
    chain = [N]
    violations = []
    for _ in range(b.size + 1):
        cur = chain[-1]
        if kind == RIGHT:
            nxt = star_span(b, cur, N)
        elif kind == LEFT:
            nxt = star_span(b, N, cur)
        else:
            nxt = star_span(b, cur, cur)
        if nxt == cur:
            break
        if not nxt <= cur:
            violations.append(f"term {len(chain) + 1} is not contained in term {len(chain)}")
        chain.append(nxt)
    m = _log_p(b)
    if chain[-1] == frozenset({0}):
        cls = len(chain) - 1
    else:
        cls = None
        if kind == LEFT and m is not None:
            violations.append("left series stalls at a nonzero term")
    if kind in (LEFT, RIGHT) and m is not None and cls is not None and cls > max(m, 1):
        violations.append(f"{kind} class {cls} exceeds log_p|N| = {m}")
    flags = []
    for k, term in enumerate(chain, start=1):
        c = classify_subset(b, term)
        f = {"subbrace": c.subbrace, "left_ideal": c.left_ideal, "ideal": c.ideal,
             "submodule": c.submodule}
        flags.append(f)
        need = {RIGHT: c.r_ideal, LEFT: c.left_r_ideal, DERIVED: c.r_subbrace}[kind]
        if not need:
            violations.append(f"{kind} term {k} has the wrong substructure type")
    return SeriesReport(kind, chain, cls, flags, violations)


def left_series(b: Brace) -> SeriesReport:
    return _series(b, LEFT)


def right_series(b: Brace) -> SeriesReport:
    return _series(b, RIGHT)


def derived_series(b: Brace) -> SeriesReport:
    return _series(b, DERIVED)


def all_series(b: Brace) -> dict[str, SeriesReport]:
    return {k: _series(b, k) for k in (LEFT, RIGHT, DERIVED)}


def subgroups_of(b: Brace, subset: Iterable[int]) -> list[frozenset[int]]:
    """All additive subgroups of the subgroup ``subset``."""
    elems = sorted(set(subset))
    mod = b.module
    found = {frozenset({0})}
    frontier = [frozenset({0})]
    while frontier:
        nxt = []
        for H in frontier:
            for g in elems:
                if g not in H:
                    K = mod.span(list(H) + [g])
                    if K not in found:
                        found.add(K)
                        nxt.append(K)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


@dataclass
class CSVReport:
    n2: frozenset[int]
    quotient_trivial: bool
    minimal: bool | None
    counterexample: frozenset[int] | None = None
    equal_terms: bool = True

    @property
    def ok(self) -> bool:
        return self.quotient_trivial and self.minimal is not False and self.equal_terms


def _quotient_is_trivial(b: Brace, ideal: frozenset[int]) -> bool:
    q, _ = quotient_brace(b, ideal)
    ident = np.arange(q.size)
    return all(np.array_equal(q.gamma.registry[k], ident) for k in set(q.gamma.index.tolist()))


def csv_minimality_check(b: Brace, bound: int = CSV_BOUND) -> CSVReport:
    """N/N^(2) is trivial, and no smaller ideal has a trivial quotient."""
    n2 = star_span(b, range(b.size), range(b.size))
    trivial = _quotient_is_trivial(b, n2)
    left2 = left_series(b).term(2)
    derived2 = derived_series(b).term(2)
    equal = n2 == left2 == derived2
    if b.size > bound:
        return CSVReport(n2, trivial, None, equal_terms=equal)
    for H in subgroups_of(b, n2):
        if H == n2 or not classify_subset(b, H).ideal:
            continue
        if _quotient_is_trivial(b, H):
            return CSVReport(n2, trivial, False, H, equal)
    return CSVReport(n2, trivial, True, equal_terms=equal)


def _is_field_module(b: Brace) -> bool:
    mod = b.module
    if b.size == 1:
        return True
    if mod.ring is not None:
        return mod.ring.c == 1
    return mod.p is not None and mod.exponent == mod.p


def field_dimension_bound_check(b: Brace) -> bool:
    """Over a field K with dim_K M = r, the left series gives M^(r+1) = 0."""
    if not _is_field_module(b):
        raise BraceError("base ring is not a field")
    if not b.is_d_brace:
        raise BraceError("brace is not linear over the base field")
    r = b.module.d_rank if b.size > 1 else 0
    return left_series(b).term(r + 1) == frozenset({0})
