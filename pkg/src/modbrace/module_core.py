"""Finite modules over Galois rings and table-level abelian group machinery.

Everything downstream works with element *indices*.  A :class:`FiniteModule`
is an abelian group ``Z/m_1 x ... x Z/m_k`` in mixed-radix indexing (first
coordinate most significant), carrying the scalar action of its coefficient
ring as additive endomorphism tables.  :class:`ModuleShape` describes the
canonical ``D``-module ``D/p^c_1 + ... + D/p^c_r`` and produces one.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .galois_ring import (
    GaloisRingSpec,
    RingElement,
    construct_galois_ring,
    reduce_element,
    ring_add,
    ring_mul,
    ring_neg,
)

ModuleElement = tuple[RingElement, ...]


class ModuleError(ValueError):
    pass


class SizeBoundError(ModuleError):
    pass


class NotAGroupError(ModuleError):
    pass


def size_bound() -> int:
    """Largest module order handled by table-based routines (env MODBRACE_MAX_ORDER)."""
    return int(os.environ.get("MODBRACE_MAX_ORDER", "1024"))


def _prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _prime_power(n: int) -> tuple[int, int] | None:
    """(p, e) with n = p^e, or None."""
    if n == 1:
        return None
    ps = _prime_factors(n)
    if len(ps) != 1:
        return None
    e = 0
    while n > 1:
        n //= ps[0]
        e += 1
    return ps[0], e


# -- generic abelian group tables --------------------------------------------

def element_orders(table: np.ndarray, identity: int = 0) -> np.ndarray:
    """Order of every element under the group operation given by ``table``."""
    n = len(table)
    idx = np.arange(n)
    cur = idx.copy()
    orders = np.zeros(n, dtype=np.int64)
    for k in range(1, n + 1):
        hit = (cur == identity) & (orders == 0)
        orders[hit] = k
        if orders.all():
            return orders
        cur = table[cur, idx]
    raise NotAGroupError("element powers do not return to the identity")


def check_group(table: np.ndarray, identity: int = 0, full: bool | None = None) -> str | None:
    """Return None when ``table`` is a group operation, else a reason."""
    n = len(table)
    idx = np.arange(n)
    if not (np.array_equal(table[identity], idx) and np.array_equal(table[:, identity], idx)):
        return "identity"
    srt = np.sort(table, axis=1)
    if not (srt == idx).all() or not (np.sort(table, axis=0) == idx[:, None]).all():
        return "cancellation"
    if full is None:
        full = n <= 128
    if full:
        for x in range(n):
            if not np.array_equal(table[table[x]][:, idx], table[x][table]):
                return "associativity"
    return None


def order_statistics(table: np.ndarray, identity: int = 0, check: bool = True) -> dict[int, int]:
    """Histogram order -> number of elements for the group given by ``table``."""
    if check:
        reason = check_group(np.asarray(table), identity)
        if reason:
            raise NotAGroupError(f"not a group ({reason})")
    counts = Counter(int(o) for o in element_orders(np.asarray(table), identity))
    return dict(sorted(counts.items()))


def _multiples(table: np.ndarray, x: int, order: int) -> list[int]:
    out, cur = [0], x
    for _ in range(order - 1):
        out.append(int(cur))
        cur = table[cur, x]
    return out


def table_basis(table: np.ndarray, orders: np.ndarray | None = None) -> tuple[list[int], list[int]]:
    """Generators g_i of invariant orders d_i with G = <g_1> + ... + <g_k> direct.

    Backtracking over elements in index order; deterministic.
    """
    table = np.asarray(table)
    if orders is None:
        orders = element_orders(table)
    inv = invariant_factors_from_orders(orders)
    by_order: dict[int, list[int]] = {}
    for x, o in enumerate(orders):
        by_order.setdefault(int(o), []).append(x)

    def search(i: int, sub: set[int], gens: list[int]) -> list[int] | None:
        if i == len(inv):
            return gens
        for x in by_order.get(inv[i], []):
            cyc = _multiples(table, x, inv[i])
            if any(m in sub for m in cyc[1:]):
                continue
            new = {int(table[h, m]) for h in sub for m in cyc}
            found = search(i + 1, new, gens + [x])
            if found is not None:
                return found
        return None

    gens = search(0, {0}, [])
    if gens is None:  # pragma: no cover - structure theorem guarantees a basis
        raise ModuleError("failed to find a basis")
    return inv, gens


def combination_map(table: np.ndarray, orders: Sequence[int], gens: Sequence[int]) -> np.ndarray:
    """Array sending mixed-radix coordinates over ``orders`` to sum a_i g_i."""
    result = np.zeros(1, dtype=np.int64)
    for d, g in zip(orders, gens):
        mult = np.array(_multiples(table, g, d), dtype=np.int64)
        result = table[result[:, None], mult[None, :]].reshape(-1)
    return result


def abelian_isomorphism(table1: np.ndarray, table2: np.ndarray) -> np.ndarray | None:
    """Explicit group isomorphism between two abelian group tables, if one exists."""
    o1, o2 = element_orders(table1), element_orders(table2)
    if sorted(o1.tolist()) != sorted(o2.tolist()):
        return None
    inv1, g1 = table_basis(table1, o1)
    inv2, g2 = table_basis(table2, o2)
    if inv1 != inv2:
        return None
    c1 = combination_map(table1, inv1, g1)
    c2 = combination_map(table2, inv2, g2)
    f = np.empty(len(table1), dtype=np.int64)
    f[c1] = c2
    return f


# -- modules -----------------------------------------------------------------

class FiniteModule:
    """Abelian group Z/m_1 x ... x Z/m_k with optional scalar endomorphisms.

    ``scalars`` maps a name to an index table of an additive endomorphism;
    maps commuting with all of them are the module-linear ones.
    """

    def __init__(self, moduli: Sequence[int], scalars: dict[str, np.ndarray] | None = None,
                 ring: GaloisRingSpec | None = None, shape: "ModuleShape | None" = None,
                 name: str = "") -> None:
        self.moduli = tuple(int(m) for m in moduli)
        if any(m < 1 for m in self.moduli):
            raise ModuleError("moduli must be positive")
        self.size = math.prod(self.moduli)
        if self.size > size_bound():
            raise SizeBoundError(f"module of order {self.size} exceeds the size bound")
        self.scalars = {k: np.asarray(v, dtype=np.int64) for k, v in (scalars or {}).items()}
        self.ring = ring
        self.shape = shape
        self.name = name
        strides = []
        acc = 1
        for m in reversed(self.moduli):
            strides.append(acc)
            acc *= m
        self.strides = np.array(strides[::-1], dtype=np.int64)

    def __repr__(self) -> str:
        return f"FiniteModule({self.name or self.moduli})"

    @classmethod
    def from_orders(cls, orders: Sequence[int], **kw) -> "FiniteModule":
        return cls(orders, **kw)

    @cached_property
    def mod_array(self) -> np.ndarray:
        return np.array(self.moduli, dtype=np.int64)

    @cached_property
    def coords(self) -> np.ndarray:
        if not self.moduli:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.moduli).reshape(len(self.moduli), -1).T
        return grids.astype(np.int64)

    def index_of(self, coords: np.ndarray) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64) % self.mod_array
        return c @ self.strides

    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.moduli):
            raise ModuleError("coordinate length mismatch")
        return int(self.index_of(np.array(coords, dtype=np.int64)))

    def element(self, k: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.coords[k])

    @cached_property
    def add(self) -> np.ndarray:
        c = self.coords
        s = (c[:, None, :] + c[None, :, :]) % self.mod_array
        return (s @ self.strides).astype(np.int64)

    @cached_property
    def neg(self) -> np.ndarray:
        return self.index_of(-self.coords)

    def multiple(self, k: int) -> np.ndarray:
        return self.index_of(self.coords * k)

    @cached_property
    def orders(self) -> np.ndarray:
        c = self.coords
        m = self.mod_array
        o = m // np.gcd(c, m)
        return np.lcm.reduce(o, axis=1) if len(m) else np.ones(1, dtype=np.int64)

    @cached_property
    def p(self) -> int | None:
        pp = _prime_power(self.size)
        return pp[0] if pp else None

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.mod_array)) if self.moduli else 1

    @cached_property
    def invariants(self) -> list[int]:
        return invariant_factors_from_orders(self.orders)

    @property
    def lam(self) -> int:
        return self.ring.lam if self.ring is not None else 1

    @cached_property
    def z_rank(self) -> int:
        """Number of cyclic factors in the primary decomposition."""
        if self.p is None:
            return sum(len(_primary_exponents(self.orders, q)) for q in _prime_factors(self.size))
        return len(_primary_exponents(self.orders, self.p))

    @cached_property
    def d_rank(self) -> int:
        z = self.z_rank
        if z % self.lam:
            raise ModuleError("Z-rank is not a multiple of the residue degree")
        return z // self.lam

    def omega(self, i: int) -> frozenset[int]:
        """Elements x with p^i x = 0."""
        if self.size == 1:
            return frozenset({0})
        if self.p is None:
            raise ModuleError("omega subgroups need a p-group")
        return frozenset(np.flatnonzero(self.multiple(self.p ** i) == 0).tolist())

    def times_p(self) -> frozenset[int]:
        if self.size == 1:
            return frozenset({0})
        if self.p is None:
            raise ModuleError("pN needs a p-group")
        return frozenset(self.multiple(self.p).tolist())

    def span(self, gens: Iterable[int], use_scalars: bool = False) -> frozenset[int]:
        """Additive closure (optionally also under the scalar maps) of ``gens``."""
        add = self.add
        gens = sorted(set(int(g) for g in gens) - {0})
        if use_scalars:
            todo = list(gens)
            seen = set(gens)
            while todo:
                g = todo.pop()
                for s in self.scalars.values():
                    h = int(s[g])
                    if h and h not in seen:
                        seen.add(h)
                        todo.append(h)
            gens = sorted(seen)
        elems = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(add[x, g])
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(elems)

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        s = np.array(sorted(set(subset)), dtype=np.int64)
        if 0 not in set(s.tolist()):
            return False
        member = np.zeros(self.size, dtype=bool)
        member[s] = True
        return bool(member[self.add[np.ix_(s, s)]].all())

    def is_submodule(self, subset: Iterable[int]) -> bool:
        s = np.array(sorted(set(subset)), dtype=np.int64)
        member = np.zeros(self.size, dtype=bool)
        member[s] = True
        return self.is_subgroup(s) and all(member[t[s]].all() for t in self.scalars.values())

    def is_additive(self, f: np.ndarray) -> bool:
        f = np.asarray(f)
        return bool((f[self.add] == self.add[f[:, None], f[None, :]]).all())

    def is_linear(self, f: np.ndarray) -> bool:
        """Commutes with every scalar endomorphism."""
        f = np.asarray(f)
        return all(np.array_equal(f[s], s[f]) for s in self.scalars.values())

    def submodule(self, subset: Iterable[int], name: str = "") -> tuple["FiniteModule", np.ndarray]:
        """The subgroup ``subset`` as a module of its own, with its embedding array."""
        elems = np.array(sorted(set(subset)), dtype=np.int64)
        if not self.is_subgroup(elems):
            raise ModuleError("subset is not an additive subgroup")
        pos = np.full(self.size, -1, dtype=np.int64)
        pos[elems] = np.arange(len(elems))
        sub_table = pos[self.add[np.ix_(elems, elems)]]
        inv, gens = table_basis(sub_table)
        local = combination_map(sub_table, inv, gens)
        embed = elems[local]
        back = np.full(self.size, -1, dtype=np.int64)
        back[embed] = np.arange(len(embed))
        scalars = {}
        for k, s in self.scalars.items():
            img = s[embed]
            if (back[img] >= 0).all():
                scalars[k] = back[img]
        ring = self.ring if len(scalars) == len(self.scalars) else None
        mod = FiniteModule(inv, scalars, ring=ring, name=name)
        return mod, embed

    def quotient(self, subset: Iterable[int], name: str = "") -> tuple["FiniteModule", np.ndarray]:
        """N/I for a subgroup I, with the projection array N -> N/I.

        Cosets are labelled by their least-index representative before a basis
        of the quotient is chosen.
        """
        sub = np.array(sorted(set(subset)), dtype=np.int64)
        if not self.is_subgroup(sub):
            raise ModuleError("subset is not an additive subgroup")
        coset = np.full(self.size, -1, dtype=np.int64)
        reps = []
        for x in range(self.size):
            if coset[x] < 0:
                coset[self.add[x, sub]] = len(reps)
                reps.append(x)
        reps_a = np.array(reps, dtype=np.int64)
        qtable = coset[self.add[np.ix_(reps_a, reps_a)]]
        inv, gens = table_basis(qtable)
        local = combination_map(qtable, inv, gens)
        to_local = np.empty(len(reps), dtype=np.int64)
        to_local[local] = np.arange(len(local))
        proj = to_local[coset]
        scalars = {}
        member = np.zeros(self.size, dtype=bool)
        member[sub] = True
        for k, s in self.scalars.items():
            if member[s[sub]].all():
                scalars[k] = proj[s[reps_a[local]]]
        ring = self.ring if len(scalars) == len(self.scalars) else None
        return FiniteModule(inv, scalars, ring=ring, name=name), proj


def _primary_exponents(orders: np.ndarray, p: int) -> list[int]:
    """Exponents of the cyclic p-primary factors, non-increasing."""
    sizes = [1]
    j = 1
    while True:
        cnt = int(np.count_nonzero((p ** j) % orders == 0))
        sizes.append(cnt)
        if cnt == sizes[-2]:
            break
        j += 1
    logs = [round(math.log(s, p)) for s in sizes]
    ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
    exps: list[int] = []
    for k in range(len(ge)):
        nxt = ge[k + 1] if k + 1 < len(ge) else 0
        exps.extend([k + 1] * (ge[k] - nxt))
    return sorted(exps, reverse=True)


def invariant_factors_from_orders(orders: np.ndarray) -> list[int]:
    """Invariant factors d_1, d_2, ... (d_{i+1} | d_i) of the abelian group with these orders."""
    n = len(orders)
    per_prime = {p: _primary_exponents(orders, p) for p in _prime_factors(n)}
    width = max((len(v) for v in per_prime.values()), default=0)
    out = []
    for i in range(width):
        d = 1
        for p, exps in per_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        out.append(d)
    return out


@dataclass(frozen=True)
class ModuleShape:
    """The D-module D/p^c_1 + ... + D/p^c_r with c_1 >= ... >= c_r >= 1."""

    ring: GaloisRingSpec
    exponents: tuple[int, ...]
    permutation: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 1 for e in exps):
            raise ModuleError("exponents must be positive")
        order = sorted(range(len(exps)), key=lambda i: -exps[i])
        object.__setattr__(self, "exponents", tuple(exps[i] for i in order))
        if not self.permutation:
            object.__setattr__(self, "permutation", tuple(order))
        if exps and max(exps) != self.ring.c:
            raise ModuleError(f"ring precision {self.ring.c} must equal the top exponent {max(exps)}")

    @classmethod
    def create(cls, p: int, lam: int, exponents: Sequence[int]) -> "ModuleShape":
        c = max(exponents) if exponents else 1
        return cls(construct_galois_ring(p, lam, c), tuple(exponents))

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def lam(self) -> int:
        return self.ring.lam

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @property
    def order(self) -> int:
        return self.p ** (self.lam * sum(self.exponents))

    @property
    def flat_moduli(self) -> tuple[int, ...]:
        return tuple(self.p ** c for c in self.exponents for _ in range(self.lam))

    @cached_property
    def module(self) -> FiniteModule:
        flat = self.flat_moduli
        mod = FiniteModule(flat, ring=self.ring, shape=self, name=str(self))
        if self.lam > 1:
            xi = self.ring.generator
            mod.scalars["xi"] = _scalar_table(self, mod, xi)
        return mod

    def index(self, x: ModuleElement) -> int:
        return self.module.index([a for comp in x for a in comp])

    def element(self, k: int) -> ModuleElement:
        flat = self.module.element(k)
        lam = self.lam
        return tuple(tuple(flat[i * lam:(i + 1) * lam]) for i in range(self.rank))

    def elements(self) -> list[ModuleElement]:
        return [self.element(k) for k in range(self.order)]

    def __str__(self) -> str:
        return f"{self.ring}^{list(self.exponents)}"

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "exponents": list(self.exponents)}

    @classmethod
    def from_json(cls, data: dict) -> "ModuleShape":
        return cls(GaloisRingSpec.from_json(data["ring"]), tuple(data["exponents"]))


def _scalar_table(shape: ModuleShape, mod: FiniteModule, d: RingElement) -> np.ndarray:
    cols = []
    lam = shape.lam
    for i, c in enumerate(shape.exponents):
        for k in range(lam):
            basis = tuple(1 if t == k else 0 for t in range(lam))
            img = ring_mul(shape.ring, d, basis, c)
            col = [0] * (lam * shape.rank)
            col[i * lam:(i + 1) * lam] = img
            cols.append(col)
    mat = np.array(cols, dtype=np.int64).T
    return mod.index_of(mod.coords @ mat.T)


# -- element arithmetic ------------------------------------------------------

def _check_elem(shape: ModuleShape, *xs: ModuleElement) -> None:
    for x in xs:
        if len(x) != shape.rank or any(len(comp) != shape.lam for comp in x):
            raise ModuleError(f"element {x} does not match {shape}")


def elem_add(shape: ModuleShape, x: ModuleElement, y: ModuleElement) -> ModuleElement:
    _check_elem(shape, x, y)
    return tuple(ring_add(shape.ring, a, b, c) for a, b, c in zip(x, y, shape.exponents))


def elem_neg(shape: ModuleShape, x: ModuleElement) -> ModuleElement:
    _check_elem(shape, x)
    return tuple(ring_neg(shape.ring, a, c) for a, c in zip(x, shape.exponents))


def scalar_mul(shape: ModuleShape, d: RingElement, x: ModuleElement) -> ModuleElement:
    _check_elem(shape, x)
    d = reduce_element(shape.ring, d)
    return tuple(ring_mul(shape.ring, d, a, c) for a, c in zip(x, shape.exponents))


# -- module maps -------------------------------------------------------------

class ModuleMapError(ModuleError):
    pass


def _rank_mod_p(mat: np.ndarray, p: int) -> int:
    m = mat.copy() % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i, c] % p), None)
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        r += 1
    return r


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """Additive endomorphism of a shape as an integer matrix on flat coordinates.

    Column j holds the image of the j-th flat generator; row i is reduced
    modulo the i-th flat modulus.
    """

    shape: ModuleShape
    matrix: tuple[tuple[int, ...], ...]
    linearity: str = "Z"

    def __post_init__(self) -> None:
        mods = self.shape.flat_moduli
        m = len(mods)
        if len(self.matrix) != m or any(len(row) != m for row in self.matrix):
            raise ModuleMapError("matrix size does not match the shape")
        mat = tuple(tuple(int(v) % mods[i] for v in row) for i, row in enumerate(self.matrix))
        p = self.shape.p
        for i in range(m):
            for j in range(m):
                e = max(0, round(math.log(mods[i], p)) - round(math.log(mods[j], p)))
                if mat[i][j] % p ** e:
                    raise ModuleMapError(
                        f"hom condition violated at ({i},{j}): entry {mat[i][j]} "
                        f"not divisible by {p ** e}")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def identity(cls, shape: ModuleShape) -> "ModuleMap":
        m = len(shape.flat_moduli)
        return cls(shape, tuple(tuple(int(i == j) for j in range(m)) for i in range(m)), "D")

    @classmethod
    def scalar(cls, shape: ModuleShape, d: RingElement | int) -> "ModuleMap":
        if isinstance(d, int):
            d = shape.ring.element(d)
        return cls.from_ring_matrix(shape, [[d if i == j else shape.ring.zero
                                            for j in range(shape.rank)]
                                           for i in range(shape.rank)])

    @classmethod
    def from_ring_matrix(cls, shape: ModuleShape, entries: Sequence[Sequence[RingElement]]) -> "ModuleMap":
        """D-linear map with (i, j) entry the image coefficient of e_j in component i."""
        r, lam, ring = shape.rank, shape.lam, shape.ring
        if len(entries) != r or any(len(row) != r for row in entries):
            raise ModuleMapError("ring matrix size does not match the shape rank")
        exps = shape.exponents
        flat = [[0] * (r * lam) for _ in range(r * lam)]
        for i in range(r):
            for j in range(r):
                d = reduce_element(ring, entries[i][j], exps[i])
                e = max(0, exps[i] - exps[j])
                if any(v % ring.p ** e for v in d):
                    raise ModuleMapError(
                        f"hom condition violated at ({i},{j}): {d} not divisible by p^{e}")
                for k in range(lam):
                    basis = tuple(1 if t == k else 0 for t in range(lam))
                    img = ring_mul(ring, d, basis, exps[i])
                    for t in range(lam):
                        flat[i * lam + t][j * lam + k] = img[t]
        return cls(shape, tuple(tuple(row) for row in flat), "D")

    @classmethod
    def from_perm(cls, shape: ModuleShape, perm: Sequence[int]) -> "ModuleMap":
        mod = shape.module
        perm = np.asarray(perm, dtype=np.int64)
        m = len(mod.moduli)
        cols = []
        for j in range(m):
            unit = [0] * m
            unit[j] = 1
            cols.append(mod.coords[perm[mod.index(unit)]])
        mat = np.array(cols, dtype=np.int64).T if m else np.zeros((0, 0), dtype=np.int64)
        f = cls(shape, tuple(tuple(int(v) for v in row) for row in mat))
        if not np.array_equal(f.perm, perm):
            raise ModuleMapError("table is not an additive map")
        linear = mod.is_linear(perm)
        return cls(shape, f.matrix, "D" if linear else "Z")

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64).reshape(len(self.matrix), len(self.matrix))

    @cached_property
    def perm(self) -> np.ndarray:
        mod = self.shape.module
        return mod.index_of(mod.coords @ self.array.T)

    def apply(self, x: ModuleElement) -> ModuleElement:
        return self.shape.element(int(self.perm[self.shape.index(x)]))

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self after other."""
        lin = "D" if self.linearity == other.linearity == "D" else "Z"
        return ModuleMap(self.shape, tuple(tuple(int(v) for v in row)
                                           for row in self.array @ other.array), lin)

    def passes_prefilter(self) -> bool:
        """Diagonal blocks (equal exponents) invertible modulo p."""
        mods = self.shape.flat_moduli
        p = self.shape.p
        i = 0
        while i < len(mods):
            j = i
            while j < len(mods) and mods[j] == mods[i]:
                j += 1
            block = self.array[i:j, i:j]
            if _rank_mod_p(block, p) < j - i:
                return False
            i = j
        return True

    def is_bijective(self) -> bool:
        if not self.passes_prefilter():
            return False
        return len(np.unique(self.perm)) == self.shape.order

    def is_d_linear(self) -> bool:
        return self.shape.module.is_linear(self.perm)

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.matrix]


def apply_map(shape: ModuleShape, m: ModuleMap, x: ModuleElement) -> ModuleElement:
    return m.apply(x)


def compose_maps(shape: ModuleShape, f: ModuleMap, g: ModuleMap) -> ModuleMap:
    return f.compose(g)


def is_bijective(shape: ModuleShape, m: ModuleMap) -> bool:
    return m.is_bijective()


def _candidate_images(mod: FiniteModule, order: int) -> np.ndarray:
    return np.flatnonzero(mod.multiple(order) == 0)


def enumerate_automorphisms(shape: ModuleShape, linearity: str = "Z",
                            limit: int | None = None) -> list[ModuleMap]:
    """All additive (``"Z"``) or D-linear (``"D"``) automorphisms, sorted by action."""
    linearity = linearity.upper()
    if linearity not in ("Z", "D"):
        raise ModuleError("linearity must be 'Z' or 'D'")
    limit = limit or 2_000_000
    mod = shape.module
    if shape.rank == 0:
        return [ModuleMap.identity(shape)]
    lam = shape.lam
    if linearity == "Z" or lam == 1:
        gens = [mod.index([int(t == j) for t in range(len(mod.moduli))]) for j in range(len(mod.moduli))]
        cands = [_candidate_images(mod, m) for m in mod.moduli]
        expand = None
    else:
        gens_orders = list(shape.exponents)
        cands = [_candidate_images(mod, shape.p ** c) for c in gens_orders]
        xi = mod.scalars["xi"]
        xi_pows = [np.arange(mod.size)]
        for _ in range(1, lam):
            xi_pows.append(xi[xi_pows[-1]])

        def expand(images):  # images of D-generators -> images of flat generators
            return [int(xp[y]) for y in images for xp in xi_pows]
    total = math.prod(len(c) for c in cands)
    if total > limit:
        raise SizeBoundError(f"{total} candidate matrices exceed the limit {limit}")
    seen: dict[bytes, ModuleMap] = {}
    coords = mod.coords
    for images in itertools.product(*cands):
        flat_imgs = expand(images) if expand else list(images)
        mat = coords[flat_imgs].T
        try:
            f = ModuleMap(shape, tuple(tuple(int(v) for v in row) for row in mat),
                          "D" if linearity == "D" else "Z")
        except ModuleMapError:
            continue
        if not f.passes_prefilter():
            continue
        perm = f.perm
        if len(np.unique(perm)) != mod.size:
            continue
        if linearity == "D" and not mod.is_linear(perm):
            continue
        seen.setdefault(perm.tobytes(), f)
    maps = list(seen.values())
    maps.sort(key=lambda f: tuple(f.perm.tolist()))
    if linearity == "Z" and lam > 1:
        maps = [ModuleMap(shape, f.matrix, "D" if mod.is_linear(f.perm) else "Z") for f in maps]
    return maps


def module_automorphisms(mod: FiniteModule, linear: bool = False,
                         limit: int | None = None) -> list[np.ndarray]:
    """Additive automorphism tables of a coordinate module, sorted, optionally linear only."""
    if mod.shape is not None:
        return [f.perm for f in enumerate_automorphisms(mod.shape, "D" if linear else "Z", limit)]
    limit = limit or 2_000_000
    m = len(mod.moduli)
    cands = [_candidate_images(mod, d) for d in mod.moduli]
    total = math.prod(len(c) for c in cands)
    if total > limit:
        raise SizeBoundError(f"{total} candidate maps exceed the limit {limit}")
    out = []
    coords = mod.coords
    for images in itertools.product(*cands):
        mat = coords[list(images)].T if m else np.zeros((0, 0), dtype=np.int64)
        perm = mod.index_of(coords @ mat.T)
        if len(np.unique(perm)) != mod.size:
            continue
        if linear and not mod.is_linear(perm):
            continue
        out.append(perm)
    out.sort(key=lambda f: tuple(f.tolist()))
    return out


# -- omega subgroups and ranks -----------------------------------------------

def omega_subgroup(shape: ModuleShape | FiniteModule, i: int) -> frozenset[int]:
    if i < 0:
        raise ModuleError("i must be non-negative")
    mod = shape.module if isinstance(shape, ModuleShape) else shape
    return mod.omega(i)


def times_p_image(shape: ModuleShape | FiniteModule) -> frozenset[int]:
    mod = shape.module if isinstance(shape, ModuleShape) else shape
    return mod.times_p()


def rank_accounting(shape: ModuleShape) -> tuple[int, int]:
    """(rank over D, rank over Z), the latter recomputed from the group itself."""
    r = shape.rank
    z = shape.module.z_rank if shape.rank else 0
    if z != shape.lam * r:
        raise ModuleError(f"Z-rank {z} disagrees with lambda * rank = {shape.lam * r}")
    return r, z


def element_set_statistics(mod: FiniteModule) -> dict[int, int]:
    return dict(sorted(Counter(int(o) for o in mod.orders).items()))
