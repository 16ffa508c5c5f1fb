"""Finite nilpotent rings and the two-sided braces of their adjoint groups."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .brace_core import Brace, GammaFunction
from .finite_ring import _bilinear
from .galois_ring import GaloisRingSpec, ring_mul, ring_pow
from .module_core import FiniteModule, ModuleShape, abelian_isomorphism, order_statistics


class RadicalRingError(ValueError):
    pass


class NilpotentRing:
    """Associative ring without unity given by structure constants.

    ``mul[i][j]`` is the coordinate vector of g_i * g_j for the generators
    of Z/orders[0] x ... .  ``module`` may supply the same group with extra
    scalar actions (for instance a Galois-ring structure).
    """

    def __init__(self, orders: Sequence[int], mul, module: FiniteModule | None = None,
                 name: str = "") -> None:
        self.orders = tuple(int(d) for d in orders)
        m = len(self.orders)
        self.consts = np.zeros((m, m, m), dtype=np.int64)
        if len(mul) != m or any(len(row) != m for row in mul):
            raise RadicalRingError("multiplication table does not match the generator count")
        for i in range(m):
            for j in range(m):
                if len(mul[i][j]) != m:
                    raise RadicalRingError(f"product g{i}*g{j} has the wrong length")
                self.consts[i, j] = mul[i][j]
        if module is not None and module.moduli != self.orders:
            raise RadicalRingError("module does not match the additive group")
        self.module = module or FiniteModule(self.orders, name=name)
        self.name = name

    def __repr__(self) -> str:
        return f"NilpotentRing({self.name or self.orders})"

    @classmethod
    def zero(cls, orders: Sequence[int], module: FiniteModule | None = None) -> "NilpotentRing":
        m = len(orders)
        return cls(orders, [[[0] * m for _ in range(m)] for _ in range(m)], module, name="zero")

    @classmethod
    def multiples(cls, n: int, d: int) -> "NilpotentRing":
        """The ideal dZ/nZ, generated additively by d (element k stands for k*d)."""
        if n % d or d <= 1:
            raise RadicalRingError("d must be a proper divisor of n")
        order = n // d
        return cls([order], [[[d % order]]], name=f"{d}Z/{n}Z")

    @classmethod
    def from_galois_ideal(cls, spec: GaloisRingSpec, k: int) -> "NilpotentRing":
        """p^k GR(p, c, lam), a module over GR(p, c - k, lam).

        Element coordinates are those of a in p^k a, read modulo p^(c-k).
        """
        if not 1 <= k < spec.c:
            raise RadicalRingError("k must satisfy 1 <= k < c")
        low = spec.with_precision(spec.c - k)
        shape = ModuleShape(low, (spec.c - k,))
        lam = spec.lam
        pk = spec.element(spec.p ** k)
        basis = [ring_mul(spec, pk, ring_pow(spec, spec.generator, i)) for i in range(lam)]
        mul = []
        for i in range(lam):
            row = []
            for j in range(lam):
                prod = ring_mul(spec, basis[i], basis[j])
                # prod = p^k * (p^k xi^(i+j)); divide out the leading p^k
                row.append([(v // spec.p ** k) % low.char for v in prod])
            mul.append(row)
        return cls(shape.flat_moduli, mul, module=shape.module, name=f"{spec.p}^{k}*{spec}")

    @classmethod
    def product(cls, a: "NilpotentRing", b: "NilpotentRing") -> "NilpotentRing":
        ma, mb = len(a.orders), len(b.orders)
        m = ma + mb
        mul = [[[0] * m for _ in range(m)] for _ in range(m)]
        for i in range(ma):
            for j in range(ma):
                mul[i][j][:ma] = a.consts[i, j].tolist()
        for i in range(mb):
            for j in range(mb):
                mul[ma + i][ma + j][ma:] = b.consts[i, j].tolist()
        return cls(a.orders + b.orders, mul, name=f"{a.name} x {b.name}")

    @property
    def size(self) -> int:
        return self.module.size

    @cached_property
    def mul_table(self) -> np.ndarray:
        c = self.module.coords
        prod = _bilinear(c, c, self.consts, self.module.mod_array)
        return (prod @ self.module.strides).astype(np.int64)

    def mul(self, x: int, y: int) -> int:
        return int(self.mul_table[x, y])

    @cached_property
    def commutative(self) -> bool:
        return bool(np.array_equal(self.mul_table, self.mul_table.T))

    def to_json(self) -> dict:
        return {"orders": list(self.orders), "mul": self.consts.tolist()}

    @classmethod
    def from_json(cls, data: dict | str) -> "NilpotentRing":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["orders"], data["mul"])


@dataclass
class NilpotentReport:
    valid: bool
    violations: list[str] = field(default_factory=list)
    index: int | None = None
    commutative: bool = False
    chain: list[frozenset[int]] = field(default_factory=list)


def product_span(n: NilpotentRing, X, Y) -> frozenset[int]:
    X = np.array(sorted(set(X)), dtype=np.int64)
    Y = np.array(sorted(set(Y)), dtype=np.int64)
    return n.module.span(np.unique(n.mul_table[np.ix_(X, Y)]).tolist())


def validate_nilpotent_ring(n: NilpotentRing) -> NilpotentReport:
    """Bilinearity, associativity and the nilpotency index (least k with N^k = 0)."""
    bad = []
    mods = n.module.mod_array
    for i, d in enumerate(n.orders):
        for j, e in enumerate(n.orders):
            if ((d * n.consts[i, j]) % mods).any() or ((e * n.consts[i, j]) % mods).any():
                bad.append(f"bilinearity at (g{i}, g{j})")
    mt = n.mul_table
    for x in range(n.size):
        if not np.array_equal(mt[mt[x]], mt[x][mt]):  # (xy)z versus x(yz) over all y, z
            bad.append(f"associativity fails for x = {x}")
            break
    everything = frozenset(range(n.size))
    chain = [everything]
    index = None
    for _ in range(n.size + 1):
        if chain[-1] == frozenset({0}):
            index = len(chain)
            break
        nxt = product_span(n, chain[-1], everything)
        if nxt == chain[-1]:
            bad.append("product powers stabilise at a nonzero ideal")
            break
        chain.append(nxt)
    return NilpotentReport(not bad, bad, index, n.commutative, chain)


def adjoint_circle(n: NilpotentRing, x: int, y: int) -> int:
    return int(n.module.add[n.module.add[x, y], n.mul_table[x, y]])


def quasi_inverse(n: NilpotentRing, x: int) -> int:
    """-x + x^2 - x^3 + ..., which terminates because x is nilpotent."""
    add, neg, mt = n.module.add, n.module.neg, n.mul_table
    total, term, sign = 0, x, -1
    for _ in range(n.size + 1):
        if term == 0:
            return int(total)
        total = add[total, neg[term] if sign < 0 else term]
        term = int(mt[term, x])
        sign = -sign
    raise RadicalRingError(f"element {x} is not nilpotent")


def brace_from_radical_ring(n: NilpotentRing, module: FiniteModule | None = None) -> Brace:
    """Adjoint brace with gamma_x(y) = y + x y."""
    rep = validate_nilpotent_ring(n)
    if not rep.valid:
        raise RadicalRingError(f"not a nilpotent ring: {rep.violations}")
    mod = module or n.module
    if mod.moduli != n.orders:
        raise RadicalRingError("module does not match the additive group")
    ys = np.arange(n.size)
    tables = mod.add[ys[None, :], n.mul_table]
    b = Brace(mod, GammaFunction.from_tables(tables), name=f"adj({n.name})")
    inv = np.array([quasi_inverse(n, x) for x in range(n.size)])
    if not np.array_equal(b.circle_inverse, inv):  # pragma: no cover - algebraic identity
        raise RadicalRingError("adjoint inverses disagree with the quasi-inverse series")
    return b


@dataclass
class RadicalRingReport:
    p: int | None
    lam: int
    rank_d: int
    rank_z: int
    hypothesis: bool
    z_hypothesis: bool
    additive_stats: dict[int, int]
    circle_stats: dict[int, int]
    isomorphism: np.ndarray | None = None

    @property
    def stats_equal(self) -> bool:
        return self.additive_stats == self.circle_stats

    @property
    def defect(self) -> bool:
        return self.hypothesis and not self.stats_equal

    def to_json(self) -> dict:
        return {"p": self.p, "lambda": self.lam, "rank_D": self.rank_d, "rank_Z": self.rank_z,
                "hypothesis": self.hypothesis, "z_hypothesis": self.z_hypothesis,
                "additive_stats": self.additive_stats, "circle_stats": self.circle_stats,
                "stats_equal": self.stats_equal,
                "isomorphic": self.isomorphism is not None}


def corollary_radring_check(n: NilpotentRing, ring: GaloisRingSpec | None = None) -> RadicalRingReport:
    """Compare (N, +) with the adjoint group under the rank bound rank_D N < p - 1."""
    if not n.commutative:
        raise RadicalRingError("the ring must be commutative")
    b = brace_from_radical_ring(n)
    mod = n.module
    p = mod.p
    if mod.size > 1 and p is None:
        raise RadicalRingError("the ring must have prime-power order")
    ring = ring or mod.ring
    lam = ring.lam if ring is not None else 1
    z = mod.z_rank if mod.size > 1 else 0
    if z % lam:
        raise RadicalRingError("Z-rank is not a multiple of lambda")
    r = z // lam
    bound = (p - 1) if p else 1
    add_stats = order_statistics(mod.add, check=False)
    circ_stats = b.circle_stats
    iso = None
    if add_stats == circ_stats and b.circle_is_abelian:
        iso = abelian_isomorphism(mod.add, b.circle_table)
    return RadicalRingReport(p, lam, r, z, r < bound, z < bound, add_stats, circ_stats, iso)
