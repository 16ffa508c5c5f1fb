"""Gamma functions and (module) braces on finite abelian groups.

A brace is stored as its additive module plus a gamma function: a table
``x -> gamma_x`` of additive automorphisms, deduplicated into a registry so
that the gamma functional equation can be checked by comparing registry
indices.  The circle operation is ``x o y = x + gamma_x(y)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .finite_ring import PeirceSummand, RingAction, peirce_module_split
from .galois_ring import GaloisRingSpec, RingElement, ring_add, ring_mul
from .module_core import (
    FiniteModule,
    ModuleError,
    ModuleMap,
    ModuleShape,
    SizeBoundError,
    abelian_isomorphism,
    check_group,
    element_orders,
    module_automorphisms,
    order_statistics,
)

NOT_GAMMA = "not-gamma"
Z_BRACE = "Z-brace"
D_BRACE = "D-brace"


class BraceError(ValueError):
    pass


class GammaFunction:
    """Registry of automorphism tables plus one registry index per element."""

    def __init__(self, registry: Sequence[np.ndarray], index: Sequence[int]) -> None:
        self.registry = [np.asarray(r, dtype=np.int64) for r in registry]
        self.index = np.asarray(index, dtype=np.int64)

    @classmethod
    def from_tables(cls, tables: Sequence[Sequence[int]] | np.ndarray) -> "GammaFunction":
        registry: list[np.ndarray] = []
        lookup: dict[bytes, int] = {}
        index = []
        for t in np.asarray(tables, dtype=np.int64):
            key = t.tobytes()
            if key not in lookup:
                lookup[key] = len(registry)
                registry.append(t.copy())
            index.append(lookup[key])
        return cls(registry, index)

    @classmethod
    def trivial(cls, n: int) -> "GammaFunction":
        return cls([np.arange(n)], np.zeros(n, dtype=np.int64))

    @property
    def size(self) -> int:
        return len(self.index)

    @cached_property
    def table(self) -> np.ndarray:
        """table[x, y] = gamma_x(y)."""
        return np.stack(self.registry)[self.index]

    @cached_property
    def composition(self) -> np.ndarray:
        """composition[i, j] = registry index of R_i R_j, or -1 when absent."""
        lookup = {r.tobytes(): k for k, r in enumerate(self.registry)}
        k = len(self.registry)
        comp = np.full((k, k), -1, dtype=np.int64)
        for i in range(k):
            for j in range(k):
                comp[i, j] = lookup.get(self.registry[i][self.registry[j]].tobytes(), -1)
        return comp

    def relabel(self, f: np.ndarray) -> "GammaFunction":
        """Transport along the bijection f: gamma'_{f(x)} = f gamma_x f^-1."""
        f = np.asarray(f)
        finv = np.empty_like(f)
        finv[f] = np.arange(len(f))
        registry = [f[r[finv]] for r in self.registry]
        index = np.empty_like(self.index)
        index[f] = self.index
        return GammaFunction(registry, index)


@dataclass
class GammaReport:
    kind: str
    counterexample: tuple[int, int] | None = None
    reason: str = ""
    linear_over: dict[str, bool] = field(default_factory=dict)

    @property
    def is_gamma(self) -> bool:
        return self.kind != NOT_GAMMA

    @property
    def is_d_brace(self) -> bool:
        return self.kind == D_BRACE


def verify_gamma(module: FiniteModule, gamma: GammaFunction) -> GammaReport:
    """Classify a table x -> gamma_x as not a gamma function, a Z-brace or a D-brace."""
    n = module.size
    if gamma.size != n or any(len(r) != n for r in gamma.registry):
        return GammaReport(NOT_GAMMA, reason="table does not cover the module")
    if gamma.index.min() < 0 or gamma.index.max() >= len(gamma.registry):
        return GammaReport(NOT_GAMMA, reason="registry index out of range")
    add = module.add
    used = sorted(set(gamma.index.tolist()))
    for k in used:
        r = gamma.registry[k]
        x = int(np.flatnonzero(gamma.index == k)[0])
        if len(np.unique(r)) != n:
            y = int(np.flatnonzero(np.bincount(r, minlength=n) != 1)[0])
            return GammaReport(NOT_GAMMA, (x, y), reason=f"gamma_{x} is not bijective")
        bad = np.argwhere(r[add] != add[r[:, None], r[None, :]])
        if len(bad):
            return GammaReport(NOT_GAMMA, (x, int(bad[0][0])), reason=f"gamma_{x} is not additive")
    table = gamma.table
    circ = add[np.arange(n)[:, None], table]
    lhs = gamma.index[circ]
    rhs = gamma.composition[gamma.index[:, None], gamma.index[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        x, y = (int(v) for v in bad[0])
        return GammaReport(NOT_GAMMA, (x, y), reason="gamma functional equation fails")
    linear = {}
    for name, s in module.scalars.items():
        linear[name] = all(np.array_equal(gamma.registry[k][s], s[gamma.registry[k]]) for k in used)
    if all(linear.values()):
        return GammaReport(D_BRACE, linear_over=linear)
    name = next(k for k, v in linear.items() if not v)
    s = module.scalars[name]
    for k in used:
        r = gamma.registry[k]
        bad = np.flatnonzero(r[s] != s[r])
        if len(bad):
            x = int(np.flatnonzero(gamma.index == k)[0])
            return GammaReport(Z_BRACE, (x, int(bad[0])), reason=f"gamma_{x} is not {name}-linear",
                               linear_over=linear)
    return GammaReport(Z_BRACE, linear_over=linear)  # pragma: no cover


class Brace:
    """A validated brace (N, +, o) with x o y = x + gamma_x(y)."""

    def __init__(self, module: FiniteModule, gamma: GammaFunction, name: str = "",
                 report: GammaReport | None = None) -> None:
        self.module = module
        self.gamma = gamma
        self.name = name
        self.report = report or verify_gamma(module, gamma)
        if not self.report.is_gamma:
            raise BraceError(f"not a gamma function: {self.report.reason} "
                             f"at {self.report.counterexample}")

    def __repr__(self) -> str:
        return f"Brace({self.name or self.module.name or self.module.moduli}, {self.kind})"

    @classmethod
    def trivial(cls, module: FiniteModule, name: str = "") -> "Brace":
        return cls(module, GammaFunction.trivial(module.size), name=name or "trivial")

    @classmethod
    def from_tables(cls, module: FiniteModule, tables, name: str = "") -> "Brace":
        return cls(module, GammaFunction.from_tables(tables), name=name)

    @property
    def size(self) -> int:
        return self.module.size

    @property
    def kind(self) -> str:
        return self.report.kind

    @property
    def is_d_brace(self) -> bool:
        return self.report.is_d_brace

    @property
    def flags(self) -> dict[str, bool]:
        return {"Z-brace": True, "D-brace": self.is_d_brace, "two-sided": self.is_two_sided}

    @cached_property
    def gamma_table(self) -> np.ndarray:
        return self.gamma.table

    @cached_property
    def circle_table(self) -> np.ndarray:
        n = self.size
        return self.module.add[np.arange(n)[:, None], self.gamma_table]

    @cached_property
    def star_table(self) -> np.ndarray:
        n = self.size
        return self.module.add[self.gamma_table, self.module.neg[np.arange(n)][None, :]]

    @cached_property
    def circle_inverse(self) -> np.ndarray:
        inv = np.empty(self.size, dtype=np.int64)
        rows, cols = np.nonzero(self.circle_table == 0)
        inv[rows] = cols
        return inv

    @cached_property
    def is_two_sided(self) -> bool:
        return two_sided_check(self)

    @cached_property
    def additive_stats(self) -> dict[int, int]:
        return order_statistics(self.module.add, check=False)

    @cached_property
    def circle_stats(self) -> dict[int, int]:
        return order_statistics(self.circle_table, check=False)

    @cached_property
    def circle_is_abelian(self) -> bool:
        return bool(np.array_equal(self.circle_table, self.circle_table.T))

    def key(self, registry_order: Mapping[bytes, int]) -> tuple[int, ...]:
        """Gamma table as indices into an external automorphism list."""
        return tuple(registry_order[self.gamma.registry[k].tobytes()] for k in self.gamma.index)


def circle(b: Brace, x: int, y: int) -> int:
    return int(b.circle_table[x, y])


def circle_inverse(b: Brace, x: int) -> int:
    return int(b.circle_inverse[x])


def star(b: Brace, x: int, y: int) -> int:
    return int(b.star_table[x, y])


def brace_from_circle(module: FiniteModule, table: np.ndarray, name: str = "") -> Brace:
    """Recover gamma_x(y) = -x + x o y from a circle table and validate it."""
    table = np.asarray(table, dtype=np.int64)
    n = module.size
    if table.shape != (n, n):
        raise BraceError("circle table has the wrong shape")
    reason = check_group(table)
    if reason:
        raise BraceError(f"circle table is not a group with identity 0 ({reason})")
    gam = module.add[module.neg[:, None], table]
    b = Brace(module, GammaFunction.from_tables(gam), name=name)
    if not np.array_equal(b.circle_table, table):  # pragma: no cover - algebraic identity
        raise BraceError("circle round trip failed")
    return b


# -- products ----------------------------------------------------------------

def _compatible_rings(r1: GaloisRingSpec, r2: GaloisRingSpec) -> GaloisRingSpec:
    if r1.p != r2.p or r1.lam != r2.lam:
        raise BraceError(f"ring mismatch: {r1} versus {r2}")
    low = r1.p ** min(r1.c, r2.c)
    if tuple(a % low for a in r1.modulus) != tuple(a % low for a in r2.modulus):
        raise BraceError(f"ring mismatch: {r1} versus {r2}")
    return r1 if r1.c >= r2.c else r2


def product_module(m1: FiniteModule, m2: FiniteModule) -> tuple[FiniteModule, np.ndarray]:
    """Direct sum of two modules and the array pair[x1, x2] -> index."""
    c1 = np.repeat(m1.coords, m2.size, axis=0)
    c2 = np.tile(m2.coords, (m1.size, 1))
    flat = np.concatenate([c1, c2], axis=1)
    if m1.shape is not None and m2.shape is not None:
        s1, s2 = m1.shape, m2.shape
        ring = (_compatible_rings(s1.ring, s2.ring) if s1.rank and s2.rank
                else (s1.ring if s1.rank else s2.ring))
        shape = ModuleShape(ring, s1.exponents + s2.exponents)
        lam = ring.lam
        cols = [k * lam + t for k in shape.permutation for t in range(lam)]
        mod = shape.module
        idx = mod.index_of(flat[:, cols]) if cols else np.zeros(len(flat), dtype=np.int64)
        return mod, idx.reshape(m1.size, m2.size)
    if set(m1.scalars) != set(m2.scalars):
        raise BraceError("scalar actions differ between the factors")
    ring = m1.ring if m1.ring == m2.ring else None
    mod = FiniteModule(m1.moduli + m2.moduli, ring=ring)
    idx = mod.index_of(flat).reshape(m1.size, m2.size)
    for name in m1.scalars:
        s = np.empty(mod.size, dtype=np.int64)
        s[idx] = idx[m1.scalars[name][:, None], m2.scalars[name][None, :]]
        mod.scalars[name] = s
    return mod, idx


def direct_product(b1: Brace, b2: Brace, with_index: bool = False):
    """Componentwise product brace; ``with_index`` also returns pair -> index."""
    mod, idx = product_module(b1.module, b2.module)
    g1, g2 = b1.gamma, b2.gamma
    registry = []
    lookup: dict[tuple[int, int], int] = {}
    index = np.empty(mod.size, dtype=np.int64)
    for x1 in range(b1.size):
        for x2 in range(b2.size):
            pair = (int(g1.index[x1]), int(g2.index[x2]))
            if pair not in lookup:
                r1, r2 = g1.registry[pair[0]], g2.registry[pair[1]]
                perm = np.empty(mod.size, dtype=np.int64)
                perm[idx] = idx[r1[:, None], r2[None, :]]
                lookup[pair] = len(registry)
                registry.append(perm)
            index[idx[x1, x2]] = lookup[pair]
    b = Brace(mod, GammaFunction(registry, index), name=f"({b1.name} x {b2.name})")
    return (b, idx) if with_index else b


def zero_brace(like: FiniteModule | None = None) -> Brace:
    if like is not None and like.shape is not None:
        mod = ModuleShape(like.shape.ring, ()).module
    else:
        mod = FiniteModule((), ring=like.ring if like is not None else None)
        if like is not None:
            for name in like.scalars:
                mod.scalars[name] = np.zeros(1, dtype=np.int64)
    return Brace.trivial(mod, name="0")


# -- subsets ------------------------------------------------------------------

@dataclass
class SubsetClassification:
    subset: frozenset[int]
    additive_subgroup: bool
    subbrace: bool
    left_ideal: bool
    ideal: bool
    submodule: bool

    @property
    def r_subbrace(self) -> bool:
        return self.subbrace and self.submodule

    @property
    def left_r_ideal(self) -> bool:
        return self.left_ideal and self.submodule

    @property
    def r_ideal(self) -> bool:
        return self.ideal and self.submodule

    @property
    def consistent(self) -> bool:
        return (not self.ideal or self.left_ideal) and (not self.left_ideal or self.subbrace)


def classify_subset(b: Brace, subset: Iterable[int]) -> SubsetClassification:
    S = frozenset(int(s) for s in subset)
    arr = np.array(sorted(S), dtype=np.int64)
    member = np.zeros(b.size, dtype=bool)
    member[arr] = True
    has0 = 0 in S
    add_sub = has0 and bool(member[b.module.add[np.ix_(arr, arr)]].all())
    circ_closed = has0 and bool(member[b.circle_table[np.ix_(arr, arr)]].all())
    invariant = bool(member[b.gamma_table[:, arr]].all())
    conj = b.circle_table[b.circle_table[:, arr], b.circle_inverse[:, None]]
    normal = circ_closed and bool(member[conj].all())
    submod = add_sub and all(member[s[arr]].all() for s in b.module.scalars.values())
    subbrace = add_sub and circ_closed
    left = subbrace and invariant
    return SubsetClassification(S, add_sub, subbrace, left, left and normal, submod)


def restrict_brace(b: Brace, subset: Iterable[int], name: str = "") -> tuple[Brace, np.ndarray]:
    """The induced brace on a subbrace, with its embedding into ``b``."""
    cls = classify_subset(b, subset)
    if not cls.subbrace:
        raise BraceError("subset is not a subbrace")
    mod, embed = b.module.submodule(cls.subset, name=name)
    back = np.full(b.size, -1, dtype=np.int64)
    back[embed] = np.arange(len(embed))
    tables = back[b.gamma_table[np.ix_(embed, embed)]]
    return Brace(mod, GammaFunction.from_tables(tables), name=name), embed


def quotient_brace(b: Brace, ideal: Iterable[int], name: str = "") -> tuple[Brace, np.ndarray]:
    """Coset brace N/I with gamma_{x+I} induced by gamma_x; returns the projection too."""
    cls = classify_subset(b, ideal)
    if not cls.ideal:
        raise BraceError("subset is not an ideal")
    qmod, proj = b.module.quotient(cls.subset, name=name)
    rep = np.full(qmod.size, -1, dtype=np.int64)
    for x in range(b.size - 1, -1, -1):
        rep[proj[x]] = x
    tables = proj[b.gamma_table[np.ix_(rep, rep)]]
    return Brace(qmod, GammaFunction.from_tables(tables), name=name), proj


# -- isomorphisms -------------------------------------------------------------

def _fingerprint(b: Brace) -> tuple:
    return (b.size, tuple(sorted(b.additive_stats.items())), tuple(sorted(b.circle_stats.items())),
            b.module.z_rank)


def find_isomorphism(b1: Brace, b2: Brace, mode: str = "brace",
                     limit: int | None = None) -> np.ndarray | None:
    """First f: N1 -> N2 preserving + and o (and the scalars in mode 'R-brace')."""
    if mode not in ("brace", "R-brace"):
        raise BraceError("mode must be 'brace' or 'R-brace'")
    if b1.size != b2.size or _fingerprint(b1) != _fingerprint(b2):
        return None
    m1, m2 = b1.module, b2.module
    if m1.moduli == m2.moduli:
        base = np.arange(m1.size)
    else:
        base = abelian_isomorphism(m1.add, m2.add)
        if base is None:
            return None
    if mode == "R-brace" and set(m1.scalars) != set(m2.scalars):
        return None
    try:
        auts = module_automorphisms(FiniteModule(m2.moduli), limit=limit)
    except SizeBoundError:
        raise
    c1, c2 = b1.circle_table, b2.circle_table
    for a in auts:
        f = a[base]
        if mode == "R-brace" and not all(np.array_equal(f[m1.scalars[k]], m2.scalars[k][f])
                                         for k in m1.scalars):
            continue
        if np.array_equal(f[c1], c2[f[:, None], f[None, :]]):
            return f
    return None


# -- two-sided braces ---------------------------------------------------------

def two_sided_check(b: Brace) -> bool:
    """Right brace axiom (x + y) o z = (x o z) - z + (y o z) on all triples."""
    add, neg, C = b.module.add, b.module.neg, b.circle_table
    n = b.size
    z = np.arange(n)
    for x in range(n):
        lhs = C[add[x][:, None], z[None, :]]
        a = add[C[x], neg]
        rhs = add[a[None, :], C]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def brace_to_radical_ring(b: Brace):
    """The radical ring x.y = -x + x o y - y of a two-sided brace."""
    from .radical_ring import NilpotentRing, validate_nilpotent_ring

    if not two_sided_check(b):
        raise BraceError("brace is not two-sided")
    mod = b.module
    m = len(mod.moduli)
    gens = [mod.index([int(t == j) for t in range(m)]) for j in range(m)]
    mul = [[list(mod.element(int(b.star_table[gi, gj]))) for gj in gens] for gi in gens]
    ring = NilpotentRing(mod.moduli, mul)
    rep = validate_nilpotent_ring(ring)
    if not rep.valid:
        raise BraceError(f"recovered ring is invalid: {rep.violations}")
    if not np.array_equal(ring.mul_table, b.star_table):
        raise BraceError("recovered product disagrees with the star operation")
    return ring


# -- restriction of scalars ---------------------------------------------------

def restrict_scalars(b: Brace, phi: Mapping[RingElement, object], source: GaloisRingSpec,
                     action: RingAction | None = None, name: str = "") -> Brace:
    """View ``b`` over ``source`` through the unital ring hom ``phi``.

    Without ``action``, phi takes values in the module's own Galois ring;
    with it, phi takes values in ``action.ring`` (as element indices) and
    scalars act through ``action``.
    """
    mod = b.module
    elems = source.elements()
    if action is None:
        target = mod.ring
        if target is None or mod.shape is None:
            raise BraceError("module has no Galois-ring structure to restrict")
        add_t = lambda u, v: ring_add(target, u, v)
        mul_t = lambda u, v: ring_mul(target, u, v)
        one_t = target.one
        act_of = lambda d: ModuleMap.scalar(mod.shape, d).perm
    else:
        R = action.ring
        if action.module.moduli != mod.moduli:
            raise BraceError("action is on a different module")
        add_t, mul_t, one_t = R.add, R.mul, R.one
        act_of = lambda d: action.act[d]
    if phi[source.one] != one_t:
        raise BraceError("phi is not unital")
    for u, v in itertools.product(elems, repeat=2):
        if phi[ring_add(source, u, v)] != add_t(phi[u], phi[v]) or \
                phi[ring_mul(source, u, v)] != mul_t(phi[u], phi[v]):
            raise BraceError(f"phi is not a ring homomorphism at {u}, {v}")
    scalars = {}
    if source.lam > 1:
        scalars["xi"] = act_of(phi[source.generator])
    new = FiniteModule(mod.moduli, scalars, ring=source, name=name or mod.name)
    out = Brace(new, b.gamma, name=name or b.name)
    if not out.is_d_brace:
        raise BraceError("restricted brace is not linear over the source ring")
    return out


# -- Peirce splitting of a module brace ---------------------------------------

@dataclass
class SplitReport:
    summands: list[PeirceSummand]
    classifications: list[SubsetClassification]
    conditions: dict[str, bool]
    summand_braces: list[Brace] = field(default_factory=list)
    product: Brace | None = None
    isomorphism: np.ndarray | None = None

    @property
    def all_left_ideals(self) -> bool:
        return all(c.left_ideal for c in self.classifications)

    @property
    def all_ideals(self) -> bool:
        return all(c.ideal for c in self.classifications)

    @property
    def conditions_agree(self) -> bool:
        return len(set(self.conditions.values())) <= 1


def peirce_split_brace(b: Brace, action: RingAction) -> SplitReport:
    """Split N = sum e_i N and test the four equivalent product-decomposition conditions."""
    if action.module.moduli != b.module.moduli:
        raise BraceError("action is on a different module")
    pieces = peirce_module_split(action)
    classes = [classify_subset(b, pc.elements) for pc in pieces]
    act = action.act
    comps = [act[pc.idempotent] for pc in pieces]  # x -> e_j x
    add, T, S = b.module.add, b.gamma_table, b.star_table
    n = b.size
    sum_gamma = np.zeros((n, n), dtype=np.int64)
    sum_star = np.zeros((n, n), dtype=np.int64)
    for cj in comps:
        sum_gamma = add[sum_gamma, T[cj[:, None], cj[None, :]]]
        sum_star = add[sum_star, S[cj[:, None], cj[None, :]]]
    cond = {
        "ii": all(c.ideal for c in classes),
        "iii": bool(np.array_equal(sum_gamma, T)),
        "iv": bool(np.array_equal(sum_star, S)),
    }
    braces = [restrict_brace(b, pc.elements, name=f"e{pc.idempotent}N") for pc in pieces]
    report = SplitReport(pieces, classes, cond, [br for br, _ in braces])
    if not pieces:
        cond["i"] = True
        return report
    prod, emb0 = braces[0]
    back0 = np.full(n, -1, dtype=np.int64)
    back0[emb0] = np.arange(len(emb0))
    f = back0[comps[0]]
    for (br, emb), cj in zip(braces[1:], comps[1:]):
        back = np.full(n, -1, dtype=np.int64)
        back[emb] = np.arange(len(emb))
        prod, idx = direct_product(prod, br, with_index=True)
        f = idx[f, back[cj]]
    bij = len(np.unique(f)) == n
    hom = bool(np.array_equal(f[b.circle_table], prod.circle_table[f[:, None], f[None, :]]))
    additive = bool(np.array_equal(f[add], prod.module.add[f[:, None], f[None, :]]))
    cond["i"] = bij and hom and additive
    report.conditions = {k: cond[k] for k in ("i", "ii", "iii", "iv")}
    if cond["i"]:
        report.product = prod
        report.isomorphism = f
    return report


# -- documents ----------------------------------------------------------------

class DocumentError(ValueError):
    pass


def module_to_json(mod: FiniteModule) -> dict:
    if mod.shape is not None and not (set(mod.scalars) - {"xi"}):
        return mod.shape.to_json()
    out: dict = {"moduli": list(mod.moduli)}
    if mod.scalars:
        out["scalars"] = {k: perm_to_matrix(mod, s) for k, s in mod.scalars.items()}
    if mod.ring is not None:
        out["ring"] = mod.ring.to_json()
    return out


def module_from_json(data: dict) -> FiniteModule:
    try:
        if "exponents" in data:
            return ModuleShape.from_json(data).module
        ring = GaloisRingSpec.from_json(data["ring"]) if "ring" in data else None
        mod = FiniteModule([int(m) for m in data["moduli"]], ring=ring)
        for k, mat in data.get("scalars", {}).items():
            mod.scalars[k] = matrix_to_perm(mod, mat, bijective=False)
        return mod
    except (KeyError, TypeError, ModuleError, ValueError) as exc:
        raise DocumentError(f"malformed module: {exc}") from exc


def perm_to_matrix(mod: FiniteModule, table: np.ndarray) -> list[list[int]]:
    m = len(mod.moduli)
    cols = [mod.coords[table[mod.index([int(t == j) for t in range(m)])]] for j in range(m)]
    return np.array(cols, dtype=np.int64).T.tolist() if m else []


def matrix_to_perm(mod: FiniteModule, matrix: Sequence[Sequence[int]], bijective: bool = True) -> np.ndarray:
    m = len(mod.moduli)
    mat = np.array(matrix, dtype=np.int64).reshape(m, m)
    for i in range(m):
        for j in range(m):
            if (mod.moduli[j] * mat[i, j]) % mod.moduli[i]:
                raise DocumentError(f"matrix entry ({i},{j}) violates the hom condition")
    table = mod.index_of(mod.coords @ mat.T)
    if bijective and len(np.unique(table)) != mod.size:
        raise DocumentError("registry matrix is not invertible")
    return table


def brace_to_document(b: Brace) -> dict:
    mod = b.module
    return {"module": module_to_json(mod),
            "gamma": b.gamma.index.tolist(),
            "registry": [perm_to_matrix(mod, r) for r in b.gamma.registry],
            "name": b.name}


def gamma_from_document(doc: dict) -> tuple[FiniteModule, GammaFunction]:
    try:
        mod = module_from_json(doc["module"])
        registry = [matrix_to_perm(mod, m) for m in doc["registry"]]
        index = [int(v) for v in doc["gamma"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"malformed brace document: {exc}") from exc
    if len(index) != mod.size or min(index, default=0) < 0 or max(index, default=0) >= len(registry):
        raise DocumentError("gamma indices do not fit the module or registry")
    return mod, GammaFunction(registry, index)


def brace_from_document(doc: dict | str) -> Brace:
    if isinstance(doc, str):
        doc = json.loads(doc)
    mod, gamma = gamma_from_document(doc)
    return Brace(mod, gamma, name=doc.get("name", ""))
