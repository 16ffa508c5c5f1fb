"""Order statistics of (N, +) versus (N, o) for module braces of small rank.

The checks here follow the structure of the argument: p-th circle powers,
unipotent automorphisms, the Omega filtrations of both groups, and finally
the comparison of order statistics with an explicit isomorphism when the
circle group is abelian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .brace_core import Brace, BraceError, classify_subset, restrict_brace
from .finite_ring import RingAction, padic_structure
from .galois_ring import GaloisRingSpec
from .module_core import FiniteModule, ModuleMap, ModuleShape, abelian_isomorphism

CONFIRMED = "confirmed"
OUT_OF_HYPOTHESIS = "out-of-hypothesis"
DEFECT = "defect"


class AnalysisError(ValueError):
    pass


def _prime(b: Brace) -> int:
    p = b.module.p
    if p is None:
        raise AnalysisError("the brace does not have prime-power order")
    return p


def circle_power(b: Brace, m: int, a: int) -> int:
    """a o a o ... o a (m factors); 0 for m = 0."""
    if m < 0:
        raise AnalysisError("m must be non-negative")
    C = b.circle_table
    result, base = 0, int(a)
    while m:
        if m & 1:
            result = int(C[result, base])
        base = int(C[base, base])
        m >>= 1
    return result


def circle_power_all(b: Brace, m: int) -> np.ndarray:
    """m-th circle power of every element at once."""
    C = b.circle_table
    n = b.size
    result = np.zeros(n, dtype=np.int64)
    base = np.arange(n)
    while m:
        if m & 1:
            result = C[result, base]
        base = C[base, base]
        m >>= 1
    return result


def p_power_values(b: Brace, a: int) -> tuple[int, int, int]:
    """(iterated power, geometric form, binomial form) of the p-th circle power of a."""
    p = _prime(b) if b.size > 1 else 2
    mod = b.module
    add = mod.add
    g = b.gamma_table[a]
    iterated = circle_power(b, p, a)
    geometric, term = 0, int(a)
    for _ in range(p):
        geometric = int(add[geometric, term])
        term = int(g[term])
    delta = add[g, mod.neg]  # delta_a(y) = gamma_a(y) - y
    binomial, term = 0, int(a)
    for j in range(p - 1):
        binomial = int(add[binomial, mod.multiple(math.comb(p, j + 1))[term]])
        term = int(delta[term])
    binomial = int(add[binomial, term])
    return iterated, geometric, binomial


def p_power_formula_check(b: Brace, a: int) -> bool:
    it, geo, bino = p_power_values(b, a)
    return it == geo == bino


def _as_module(shape: ModuleShape | FiniteModule) -> FiniteModule:
    return shape.module if isinstance(shape, ModuleShape) else shape


def perm_order(f: np.ndarray, bound: int | None = None) -> int:
    ident = np.arange(len(f))
    g, k = f.copy(), 1
    bound = bound or math.factorial(min(len(f), 12))
    while not np.array_equal(g, ident):
        g = f[g]
        k += 1
        if k > bound:  # pragma: no cover - permutations of a finite set have finite order
            raise AnalysisError("order search did not terminate")
    return k


def aut_unipotency_check(shape: ModuleShape | FiniteModule, f) -> bool:
    """(f - id)^r(N) lies in pN for a D-automorphism f of p-power order, r = rank_D N."""
    mod = _as_module(shape)
    f = f.perm if isinstance(f, ModuleMap) else np.asarray(f, dtype=np.int64)
    p = mod.p
    if p is None:
        raise AnalysisError("module is not a p-group")
    if len(np.unique(f)) != mod.size or not mod.is_additive(f):
        raise AnalysisError("f is not an additive automorphism")
    if not mod.is_linear(f):
        raise AnalysisError("f is not D-linear")
    k = perm_order(f)
    while k % p == 0:
        k //= p
    if k != 1:
        raise AnalysisError("f does not have p-power order")
    r = mod.d_rank
    minus = mod.add[f, mod.neg]  # y -> f(y) - y
    image = np.arange(mod.size)
    for _ in range(r):
        image = minus[image]
    pN = np.zeros(mod.size, dtype=bool)
    pN[list(mod.times_p())] = True
    return bool(pN[image].all())


def omega_circle(b: Brace, i: int) -> frozenset[int]:
    """Elements a with (p^i)-th circle power 0; a plain set, no subgroup assumed."""
    p = _prime(b) if b.size > 1 else 2
    return frozenset(np.flatnonzero(circle_power_all(b, p ** i) == 0).tolist())


@dataclass
class OmegaReport:
    levels: int
    inclusions: list[bool]
    subsets: list[bool]

    @property
    def ok(self) -> bool:
        return all(self.inclusions) and all(self.subsets)

    def first_failure(self) -> int | None:
        for i, v in enumerate(self.inclusions):
            if not v:
                return i
        return None


def omega_chain_check(b: Brace) -> OmegaReport:
    """For each i test Omega_{i+1}(+) minus Omega_i(+) inside Omega_{i+1}(o) minus Omega_i(o),
    and Omega_i(+) inside Omega_i(o)."""
    if b.size == 1:
        return OmegaReport(0, [], [True])
    p = _prime(b)
    top = max(int(b.module.orders.max()), max(b.circle_stats))
    levels = round(math.log(top, p))
    add_om = [b.module.omega(i) for i in range(levels + 1)]
    circ_om = [omega_circle(b, i) for i in range(levels + 1)]
    inclusions = [(add_om[i + 1] - add_om[i]) <= (circ_om[i + 1] - circ_om[i]) for i in range(levels)]
    subsets = [add_om[i] <= circ_om[i] for i in range(levels + 1)]
    return OmegaReport(levels, inclusions, subsets)


@dataclass
class SChainReport:
    quotient_order: int
    chain: list[frozenset[int]]
    strict: bool
    k: int | None
    dims_match: bool | None
    defects: list[str] = field(default_factory=list)

    @property
    def orders(self) -> list[int]:
        return [len(s) for s in self.chain]


def s_chain_diagnostic(b: Brace, a: int, i: int) -> SChainReport:
    """Orbit spans S_j = <delta_a^m(a) : m >= j - 1> in Omega_{i+1}(+)/Omega_{i-1}(+)."""
    p = _prime(b)
    mod = b.module
    if i < 1:
        raise AnalysisError("i must be at least 1")
    upper, mid, lower = mod.omega(i + 1), mod.omega(i), mod.omega(i - 1)
    if a not in upper or a in mid:
        raise AnalysisError(f"element {a} is not in Omega_{i + 1} minus Omega_{i}")
    sub, embed = mod.submodule(upper)
    back = np.full(mod.size, -1, dtype=np.int64)
    back[embed] = np.arange(len(embed))
    q, proj = sub.quotient(back[sorted(lower)])
    bar = lambda x: int(proj[back[x]])
    delta = mod.add[b.gamma_table[a], mod.neg]
    orbit, x = [], int(a)
    seen = set()
    while x not in seen:  # delta_a-orbit of a, stopping at the first repeat
        seen.add(x)
        orbit.append(bar(x))
        x = int(delta[x])
    chain = []
    for j in range(1, len(orbit) + 2):
        S = q.span(orbit[j - 1:], use_scalars=True)
        chain.append(S)
        if S == frozenset({0}):
            break
    defects = []
    strict = True
    for j in range(len(chain) - 1):
        if chain[j + 1] == chain[j] and chain[j] != frozenset({0}):
            strict = False
            defects.append(f"S_{j + 2} = S_{j + 1} is nonzero")
    pa = bar(int(mod.multiple(p)[a]))
    k = None
    for j in range(len(chain)):
        nxt = chain[j + 1] if j + 1 < len(chain) else frozenset({0})
        if pa in chain[j] and pa not in nxt:
            k = j + 1
            break
    dims = None
    if k is not None:  # dim over D/pD of S_1/S_k against k - 1
        dims = round(math.log(len(chain[0]) // len(chain[k - 1]), p)) == (k - 1) * mod.lam
    return SChainReport(q.size, chain, strict, k, dims, defects)


def _is_field(mod: FiniteModule) -> bool:
    if mod.size == 1:
        return True
    if mod.ring is not None:
        return mod.ring.c == 1 and mod.exponent == mod.ring.p
    return mod.p is not None and mod.exponent == mod.p


def prop4_check(b: Brace) -> bool | None:
    """Over a field of dimension r < p - 1 every nonzero element has circle order p.

    Returns None when the hypothesis fails (nothing is asserted then).
    """
    if not _is_field(b.module):
        raise AnalysisError("the base ring is not a field")
    if not b.is_d_brace:
        raise AnalysisError("the brace is not linear over the field")
    if b.size == 1:
        return True
    p = _prime(b)
    if b.module.d_rank >= p - 1:
        return None
    return bool((circle_power_all(b, p) == 0).all())


@dataclass
class TheoremReport:
    p: int | None
    lam: int
    rank_d: int
    rank_z: int
    hypothesis_holds: bool
    z_hypothesis: bool
    additive_stats: dict[int, int]
    circle_stats: dict[int, int]
    omega_inclusions: list[bool]
    omega_subsets: list[bool]
    verdict: str
    circle_abelian: bool = False
    isomorphism: np.ndarray | None = None
    summands: list["TheoremReport"] = field(default_factory=list)
    summand_ideals: list[bool] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    name: str = ""

    @property
    def stats_equal(self) -> bool:
        return self.additive_stats == self.circle_stats

    @property
    def defect(self) -> bool:
        return self.verdict == DEFECT or any(s.defect for s in self.summands)

    def to_json(self) -> dict:
        return {
            "name": self.name, "p": self.p, "lambda": self.lam, "rank_D": self.rank_d,
            "rank_Z": self.rank_z, "hypothesis_holds": self.hypothesis_holds,
            "z_hypothesis": self.z_hypothesis,
            "additive_stats": {str(k): v for k, v in self.additive_stats.items()},
            "circle_stats": {str(k): v for k, v in self.circle_stats.items()},
            "stats_equal": self.stats_equal, "omega_inclusions": self.omega_inclusions,
            "omega_subsets": self.omega_subsets, "circle_abelian": self.circle_abelian,
            "isomorphism": None if self.isomorphism is None else self.isomorphism.tolist(),
            "verdict": self.verdict, "summands": [s.to_json() for s in self.summands],
            "summand_ideals": self.summand_ideals, "notes": self.notes,
        }


def _verdict(hyp: bool, equal: bool, omega_ok: bool) -> str:
    if not hyp:
        return OUT_OF_HYPOTHESIS
    return CONFIRMED if equal and omega_ok else DEFECT


def _report(b: Brace, lam: int, name: str = "", local_bound: bool = False) -> TheoremReport:
    add_stats = b.additive_stats
    circ_stats = b.circle_stats
    if b.size == 1:
        return TheoremReport(None, lam, 0, 0, True, True, add_stats, circ_stats, [], [True],
                             CONFIRMED, True, np.zeros(1, dtype=np.int64), name=name)
    p = _prime(b)
    z = b.module.z_rank
    if z % lam:
        raise AnalysisError(f"Z-rank {z} is not a multiple of lambda = {lam}")
    r = z // lam
    hyp = r < p - 1
    om = omega_chain_check(b)
    equal = add_stats == circ_stats
    iso = None
    if equal and b.circle_is_abelian:
        iso = abelian_isomorphism(b.module.add, b.circle_table)
    rep = TheoremReport(p, lam, r, z, hyp, z < p - 1, add_stats, circ_stats, om.inclusions,
                        om.subsets, _verdict(hyp, equal, om.ok), b.circle_is_abelian, iso, name=name)
    if equal and b.circle_is_abelian and iso is None:  # pragma: no cover - equal stats force it
        rep.notes.append("abelian groups with equal statistics but no isomorphism found")
        rep.verdict = DEFECT
    return rep


def theorem_check(b: Brace, ring: GaloisRingSpec | None = None) -> TheoremReport:
    """Evaluate rank_D N < p - 1 and compare the order statistics of (N, +) and (N, o).

    ``ring`` defaults to the module's own coefficient ring; passing a ring
    with lambda = 1 evaluates the integer criterion for any brace.
    """
    mod = b.module
    lam = ring.lam if ring is not None else mod.lam
    if lam > 1:
        if mod.ring is None or mod.ring.lam != lam:
            raise AnalysisError(f"module carries no structure over a ring with lambda = {lam}")
        if not b.is_d_brace:
            raise BraceError("b is not a D-brace")
        if ring is not None and mod.ring.p != ring.p:
            raise AnalysisError("ring characteristic does not match the module")
    rep = _report(b, lam, name=b.name)
    if lam > 1 and rep.p is not None:
        rep.notes.append(f"integer criterion rank_Z = {rep.rank_z} < {rep.p - 1}: {rep.z_hypothesis}")
    return rep


def theorem_check_action(b: Brace, action: RingAction) -> TheoremReport:
    """Local analysis through the Galois-ring structure of each Peirce summand."""
    act = action.act
    R = action.ring
    gens = [R.index([int(t == i) for t in range(len(R.orders))]) for i in range(len(R.orders))]
    for k in set(b.gamma.index.tolist()):
        g = b.gamma.registry[k]
        if any(not np.array_equal(g[act[r]], act[r][g]) for r in gens):
            raise BraceError("gamma is not linear over the acting ring")
    ps = padic_structure(action)
    summands, ideals = [], []
    for s in ps.summands:
        sb, _ = restrict_brace(b, s.elements, name=f"N e{s.idempotent}")
        summands.append(_report(sb, s.lam, name=sb.name))
        ideals.append(classify_subset(b, s.elements).ideal)
    if ps.common_lambda is not None:
        rep = _report(b, ps.common_lambda, name=b.name)
    else:
        hyp = all(ideals) and all(s.hypothesis_holds for s in summands)
        equal = b.additive_stats == b.circle_stats
        iso = None
        if equal and b.circle_is_abelian:
            iso = abelian_isomorphism(b.module.add, b.circle_table)
        rep = TheoremReport(None, 1, b.module.z_rank, b.module.z_rank, hyp, False,
                            b.additive_stats, b.circle_stats, [], [],
                            _verdict(hyp, equal, True), b.circle_is_abelian, iso, name=b.name)
        rep.notes.append("mixed characteristic: global verdict through ideal summands")
    rep.summands = summands
    rep.summand_ideals = ideals
    return rep


def corpus_theorem_summary(reports: Sequence[TheoremReport]) -> dict[str, int]:
    out = {CONFIRMED: 0, OUT_OF_HYPOTHESIS: 0, DEFECT: 0}
    for r in reports:
        out[DEFECT if r.defect else r.verdict] += 1
    return out

