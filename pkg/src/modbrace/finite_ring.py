"""Finite commutative unital rings given by structure constants.

A ring is an additive group Z/d_1 x ... x Z/d_n with generators g_i and a
table ``mul[i][j]`` holding the coordinates of g_i g_j.  Besides validation
this module provides the idempotent (Peirce) splitting of a ring and of a
module over it, locality tests, quotients by annihilators, and the passage
to Galois-ring coefficients on each local piece.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .galois_ring import GaloisRingSpec, RingElement, construct_galois_ring, embed_into_local_ring
from .module_core import FiniteModule, ModuleError, ModuleShape, SizeBoundError, _primary_exponents

DEFAULT_RING_BOUND = 2 ** 16


class RingError(ValueError):
    pass


@dataclass
class RingReport:
    valid: bool
    violations: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class LocalInfo:
    is_local: bool
    maximal_ideal: frozenset[int] = frozenset()
    generators: tuple[int, ...] = ()
    p: int | None = None
    lam: int | None = None


def _bilinear(xc: np.ndarray, yc: np.ndarray, consts: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    """Coordinates of products for coordinate arrays ``xc`` (a x m) and ``yc`` (b x m)."""
    prod = np.einsum("ai,bj,ijk->abk", xc, yc, consts)
    return prod % moduli


class FiniteCommRing:
    def __init__(self, orders: Sequence[int], mul: Sequence[Sequence[Sequence[int]]],
                 one: Sequence[int], name: str = "") -> None:
        self.orders = tuple(int(d) for d in orders)
        m = len(self.orders)
        self.consts = np.zeros((m, m, m), dtype=np.int64)
        if len(mul) != m or any(len(row) != m for row in mul):
            raise RingError("multiplication table does not match the generator count")
        for i in range(m):
            for j in range(m):
                if len(mul[i][j]) != m:
                    raise RingError(f"product g{i}*g{j} has the wrong length")
                self.consts[i, j] = mul[i][j]
        if len(one) != m:
            raise RingError("unity has the wrong length")
        self.module = FiniteModule(self.orders, name=name)
        self.one_coords = tuple(int(v) % d for v, d in zip(one, self.orders))
        self.name = name

    def __repr__(self) -> str:
        return f"FiniteCommRing({self.name or self.orders})"

    # constructors
    @classmethod
    def zmod(cls, n: int) -> "FiniteCommRing":
        return cls([n], [[[1]]], [1], name=f"Z/{n}")

    @classmethod
    def from_polynomial(cls, n: int, f: Sequence[int], name: str = "") -> "FiniteCommRing":
        """(Z/n)[t]/(f) for monic f, coefficients listed from the constant term."""
        deg = len(f) - 1
        if deg < 1 or f[-1] % n != 1 % n:
            raise RingError("f must be monic of positive degree")
        powers = []
        cur = [1] + [0] * (deg - 1)
        for _ in range(2 * deg - 1):
            powers.append(cur)
            nxt = [0] + cur
            top = nxt.pop()
            cur = [(nxt[k] - top * f[k]) % n for k in range(deg)]
        mul = [[powers[i + j] for j in range(deg)] for i in range(deg)]
        return cls([n] * deg, mul, [1] + [0] * (deg - 1), name=name or f"(Z/{n})[t]/{tuple(f)}")

    @classmethod
    def from_galois_ring(cls, spec: GaloisRingSpec) -> "FiniteCommRing":
        return cls.from_polynomial(spec.char, spec.modulus, name=str(spec))

    @classmethod
    def product(cls, a: "FiniteCommRing", b: "FiniteCommRing") -> "FiniteCommRing":
        ma, mb = len(a.orders), len(b.orders)
        m = ma + mb
        mul = [[[0] * m for _ in range(m)] for _ in range(m)]
        for i in range(ma):
            for j in range(ma):
                mul[i][j][:ma] = a.consts[i, j].tolist()
        for i in range(mb):
            for j in range(mb):
                mul[ma + i][ma + j][ma:] = b.consts[i, j].tolist()
        return cls(a.orders + b.orders, mul, a.one_coords + b.one_coords,
                   name=f"{a.name} x {b.name}")

    # element access
    @property
    def size(self) -> int:
        return self.module.size

    @property
    def zero(self) -> int:
        return 0

    @cached_property
    def one(self) -> int:
        return self.module.index(self.one_coords)

    def index(self, coords: Sequence[int]) -> int:
        return self.module.index(coords)

    def element(self, k: int) -> tuple[int, ...]:
        return self.module.element(k)

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.size > DEFAULT_RING_BOUND:
            raise SizeBoundError(f"ring of order {self.size} exceeds the table bound")
        c = self.module.coords
        prod = _bilinear(c, c, self.consts, self.module.mod_array)
        return (prod @ self.module.strides).astype(np.int64)

    def add(self, x: int, y: int) -> int:
        return int(self.module.add[x, y])

    def neg(self, x: int) -> int:
        return int(self.module.neg[x])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        return int(self.mul_table[x, y])

    def int_multiple(self, k: int, x: int) -> int:
        return int(self.module.index_of(self.module.coords[x] * k))

    def int_element(self, k: int) -> int:
        return self.int_multiple(k, self.one)

    def characteristic(self) -> int:
        return int(self.module.orders[self.one])

    @cached_property
    def units(self) -> np.ndarray:
        return np.flatnonzero((self.mul_table == self.one).any(axis=1))

    def is_unit(self, x: int) -> bool:
        return bool((self.mul_table[x] == self.one).any())

    def inverse(self, x: int) -> int:
        hits = np.flatnonzero(self.mul_table[x] == self.one)
        if not len(hits):
            raise RingError(f"element {self.element(x)} is not a unit")
        return int(hits[0])

    @cached_property
    def idempotents(self) -> list[int]:
        mt = self.mul_table
        return [int(x) for x in np.flatnonzero(mt[np.arange(self.size), np.arange(self.size)] == np.arange(self.size))]

    def local_info(self) -> LocalInfo:
        return is_local(self)

    def to_json(self) -> dict:
        m = len(self.orders)
        return {"orders": list(self.orders),
                "mul": [[self.consts[i, j].tolist() for j in range(m)] for i in range(m)],
                "one": list(self.one_coords)}

    @classmethod
    def from_json(cls, data: dict | str) -> "FiniteCommRing":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["orders"], data["mul"], data["one"], name=data.get("name", ""))


def validate_ring(A: FiniteCommRing) -> RingReport:
    """Check structure constants: well-defined bilinearity, commutativity,
    associativity on generator triples, and the unity."""
    bad: list[str] = []
    m = len(A.orders)
    mods = A.module.mod_array
    for i in range(m):
        for j in range(m):
            if ((A.orders[i] * A.consts[i, j]) % mods).any():
                bad.append(f"bilinearity: {A.orders[i]} * (g{i} g{j}) != 0")
            if not np.array_equal(A.consts[i, j] % mods, A.consts[j, i] % mods):
                bad.append(f"commutativity: g{i} g{j} != g{j} g{i}")
    eye = np.eye(m, dtype=np.int64)
    if m:
        gg = _bilinear(eye, eye, A.consts, mods)  # m x m x m
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    left = _bilinear(gg[i, j][None], eye[k][None], A.consts, mods)[0, 0]
                    right = _bilinear(eye[i][None], gg[j, k][None], A.consts, mods)[0, 0]
                    if not np.array_equal(left, right):
                        bad.append(f"associativity on (g{i}, g{j}, g{k})")
        one = np.array(A.one_coords, dtype=np.int64)[None]
        prod = _bilinear(one, eye, A.consts, mods)[0]
        for j in range(m):
            if not np.array_equal(prod[j], eye[j] % mods):
                bad.append(f"unity: 1 * g{j} != g{j}")
    return RingReport(not bad, bad)


def primitive_orthogonal_idempotents(A: FiniteCommRing, bound: int = DEFAULT_RING_BOUND) -> list[int]:
    """Complete set of primitive orthogonal idempotents, by brute-force scan."""
    if A.size > bound:
        raise SizeBoundError(f"ring of order {A.size} exceeds the bound {bound}")
    if A.size == 1:
        return []
    mt = A.mul_table
    idem = A.idempotents
    prims = []
    for e in idem:
        if e == 0:
            continue
        below = [f for f in idem if f not in (0, e) and mt[e, f] == f]
        if not below:
            prims.append(e)
    total = 0
    for i, e in enumerate(prims):
        total = A.add(total, e)
        for f in prims[i + 1:]:
            if mt[e, f] != 0:
                raise RingError("primitive idempotents are not orthogonal")  # pragma: no cover
    if total != A.one:
        raise RingError("primitive idempotents do not sum to 1")  # pragma: no cover
    return prims


def is_local(A: FiniteCommRing) -> LocalInfo:
    """Locality test: the non-units must form an additive subgroup."""
    if A.size == 1:
        return LocalInfo(False)
    units = set(A.units.tolist())
    nonunits = frozenset(x for x in range(A.size) if x not in units)
    if not A.module.is_subgroup(nonunits):
        return LocalInfo(False)
    residue = A.size // len(nonunits)
    pe = _prime_power_of(residue)
    if pe is None:  # pragma: no cover - a residue field has prime power order
        return LocalInfo(False)
    p, lam = pe
    # prefer integer multiples of 1 as generators, then index order
    ints = [A.int_element(k) for k in range(A.characteristic())]
    order = [x for x in dict.fromkeys(ints) if x in nonunits]
    order += [x for x in sorted(nonunits) if x not in set(order)]
    gens: list[int] = []
    ideal = frozenset({0})
    for x in order:
        if x in ideal:
            continue
        gens.append(x)
        ideal = _ideal_span(A, gens)
        if ideal == nonunits:
            break
    return LocalInfo(True, nonunits, tuple(gens), p, lam)


def _ideal_span(A: FiniteCommRing, gens: Sequence[int]) -> frozenset[int]:
    mt = A.mul_table
    return A.module.span(set(int(v) for g in gens for v in mt[g]))


def _prime_power_of(n: int) -> tuple[int, int] | None:
    if n < 2:
        return None
    p = next(k for k in range(2, n + 1) if n % k == 0)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return (p, e) if n == 1 else None


def _ring_from_tables(parent: FiniteCommRing, mod: FiniteModule, embed: np.ndarray,
                      mult: "callable", one: int, name: str) -> FiniteCommRing:
    """Structure constants for a ring whose additive group is ``mod`` (embedded via
    ``embed`` into some table world) and whose product is ``mult`` there."""
    m = len(mod.moduli)
    back = {int(v): k for k, v in enumerate(embed)}
    gens = [mod.index([int(t == j) for t in range(m)]) for j in range(m)]
    mul = [[list(mod.element(back[mult(int(embed[gi]), int(embed[gj]))])) for gj in gens] for gi in gens]
    return FiniteCommRing(mod.moduli, mul, list(mod.element(back[one])), name=name)


@dataclass
class RingAction:
    """Action of a finite commutative ring on a finite abelian group.

    ``table[i][j]`` is the coordinate vector of g_i . e_j for ring generator
    g_i and module generator e_j.
    """

    ring: FiniteCommRing
    module: FiniteModule
    table: list[list[list[int]]]

    def __post_init__(self) -> None:
        mi, mj = len(self.ring.orders), len(self.module.moduli)
        if len(self.table) != mi or any(len(row) != mj for row in self.table):
            raise RingError("action table does not match the generator counts")

    @classmethod
    def regular(cls, A: FiniteCommRing) -> "RingAction":
        m = len(A.orders)
        return cls(A, FiniteModule(A.orders), [[A.consts[i, j].tolist() for j in range(m)] for i in range(m)])

    @classmethod
    def integer(cls, module: FiniteModule, n: int | None = None) -> "RingAction":
        """Z/n acting by integer multiplication (n defaults to the exponent)."""
        n = n or module.exponent
        mj = len(module.moduli)
        return cls(FiniteCommRing.zmod(n), module,
                   [[[int(t == j) for t in range(mj)] for j in range(mj)]])

    @cached_property
    def act(self) -> np.ndarray:
        """Full table: act[r, x] = index of r . x."""
        consts = np.array(self.table, dtype=np.int64).reshape(
            len(self.ring.orders), len(self.module.moduli), len(self.module.moduli))
        prod = _bilinear(self.ring.module.coords, self.module.coords, consts, self.module.mod_array)
        return (prod @ self.module.strides).astype(np.int64)

    def validate(self) -> RingReport:
        bad = []
        R, N = self.ring, self.module
        consts = np.array(self.table, dtype=np.int64)
        for i, d in enumerate(R.orders):
            for j, e in enumerate(N.moduli):
                if ((d * consts[i, j]) % N.mod_array).any() or ((e * consts[i, j]) % N.mod_array).any():
                    bad.append(f"bilinearity at (g{i}, e{j})")
        act = self.act
        if not np.array_equal(act[R.one], np.arange(N.size)):
            bad.append("1 does not act as the identity")
        gens = [R.index([int(t == i) for t in range(len(R.orders))]) for i in range(len(R.orders))]
        mt = R.mul_table
        for r in gens:
            for s in gens:
                if not np.array_equal(act[mt[r, s]], act[r][act[s]]):
                    bad.append(f"associativity for generators {r}, {s}")
        return RingReport(not bad, bad)

    def annihilator(self) -> frozenset[int]:
        return frozenset(np.flatnonzero((self.act == 0).all(axis=1)).tolist())

    def is_faithful(self) -> bool:
        return self.annihilator() == frozenset({0})

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "module": list(self.module.moduli), "table": self.table}

    @classmethod
    def from_json(cls, data: dict | str) -> "RingAction":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(FiniteCommRing.from_json(data["ring"]), FiniteModule(data["module"]), data["table"])


def quotient_by_annihilator(act: RingAction) -> tuple[FiniteCommRing, RingAction]:
    """A = R / Ann_R(N) with its induced, faithful action on N."""
    R, N = act.ring, act.module
    ann = act.annihilator()
    qmod, proj = R.module.quotient(ann)
    rep = np.full(qmod.size, -1, dtype=np.int64)
    for r in range(R.size - 1, -1, -1):
        rep[proj[r]] = r
    mt = R.mul_table
    m = len(qmod.moduli)
    gens = [qmod.index([int(t == j) for t in range(m)]) for j in range(m)]
    mul = [[list(qmod.element(int(proj[mt[rep[a], rep[b]]]))) for b in gens] for a in gens]
    A = FiniteCommRing(qmod.moduli, mul, list(qmod.element(int(proj[R.one]))),
                       name=f"{R.name}/Ann" if R.name else "")
    mj = len(N.moduli)
    ngens = [N.index([int(t == j) for t in range(mj)]) for j in range(mj)]
    table = [[list(N.element(int(act.act[rep[a], x]))) for x in ngens] for a in gens]
    out = RingAction(A, N, table)
    if not out.is_faithful():  # pragma: no cover - holds by construction
        raise RingError("induced action is not faithful")
    return A, out


@dataclass
class PeirceSummand:
    idempotent: int
    elements: frozenset[int]
    ring: FiniteCommRing
    ring_embedding: np.ndarray
    module: FiniteModule
    module_embedding: np.ndarray
    action: RingAction

    @property
    def order(self) -> int:
        return len(self.elements)


def _local_piece(act: RingAction, e: int) -> PeirceSummand:
    A, N = act.ring, act.module
    mt = A.mul_table
    ring_set = frozenset(int(v) for v in mt[e])
    rmod, rembed = A.module.submodule(ring_set)
    Ai = _ring_from_tables(A, rmod, rembed, A.mul, e, name=f"{A.name}e{e}")
    n_set = frozenset(int(v) for v in act.act[e])
    nmod, nembed = N.submodule(n_set)
    nback = {int(v): k for k, v in enumerate(nembed)}
    mi, mj = len(rmod.moduli), len(nmod.moduli)
    rg = [int(rembed[rmod.index([int(t == i) for t in range(mi)])]) for i in range(mi)]
    ng = [int(nembed[nmod.index([int(t == j) for t in range(mj)])]) for j in range(mj)]
    table = [[list(nmod.element(nback[int(act.act[r, x])])) for x in ng] for r in rg]
    return PeirceSummand(e, n_set, Ai, rembed, nmod, nembed, RingAction(Ai, nmod, table))


def peirce_module_split(act: RingAction) -> list[PeirceSummand]:
    """N = e_1 N + ... + e_t N over the primitive idempotents of the acting ring.

    Summands with e_i N = 0 are dropped.
    """
    A, N = act.ring, act.module
    idems = primitive_orthogonal_idempotents(A)
    pieces = [_local_piece(act, e) for e in idems]
    pieces = [pc for pc in pieces if pc.order > 1]
    if math.prod(pc.order for pc in pieces) != N.size:
        raise RingError("Peirce pieces do not multiply to |N|")
    for x in range(N.size):
        total = 0
        for pc in pieces:
            total = int(N.add[total, act.act[pc.idempotent, x]])
        if total != x:
            raise RingError(f"element {x} is not the sum of its Peirce components")
    mt = A.mul_table
    for pc in pieces:
        elems = np.array(sorted(pc.elements), dtype=np.int64)
        for other in pieces:
            if other is pc:
                continue
            killers = mt[:, other.idempotent]  # r e_j for all r
            if (act.act[np.ix_(killers, elems)] != 0).any():
                raise RingError("a Peirce piece is not annihilated by the other components")
    return pieces


@dataclass
class PadicSummand:
    idempotent: int
    p: int
    lam: int
    c: int
    spec: GaloisRingSpec
    embedding: dict[RingElement, int]
    shape: ModuleShape
    elements: frozenset[int]
    piece: PeirceSummand

    @property
    def z_rank(self) -> int:
        return self.shape.rank * self.lam


@dataclass
class PadicStructure:
    ring: FiniteCommRing
    action: RingAction
    summands: list[PadicSummand]
    common_lambda: int | None = None
    common_spec: GaloisRingSpec | None = None
    common_shape: ModuleShape | None = None


def _shape_from_orders(orders: np.ndarray, p: int, spec: GaloisRingSpec) -> ModuleShape:
    exps = _primary_exponents(orders, p) if len(orders) > 1 else []
    counts: dict[int, int] = {}
    for e in exps:
        counts[e] = counts.get(e, 0) + 1
    out = []
    for e in sorted(counts, reverse=True):
        if counts[e] % spec.lam:
            raise RingError(f"multiplicity {counts[e]} of exponent {e} is not divisible by {spec.lam}")
        out.extend([e] * (counts[e] // spec.lam))
    if out and out[0] != spec.c:
        spec = spec.with_precision(out[0])
    return ModuleShape(spec, tuple(out))


def padic_structure(act: RingAction) -> PadicStructure:
    """Galois-ring coefficients for each local summand of a faithful quotient."""
    A, fact = quotient_by_annihilator(act)
    pieces = peirce_module_split(fact)
    summands = []
    for pc in pieces:
        info = is_local(pc.ring)
        if not info.is_local:  # pragma: no cover - primitive idempotents give local pieces
            raise RingError("Peirce component is not local")
        char = pc.ring.characteristic()
        c = round(math.log(char, info.p))
        spec = construct_galois_ring(info.p, info.lam, c)
        emb = embed_into_local_ring(spec, pc.ring)
        _check_induced_module(pc, spec, emb)
        shape = _shape_from_orders(pc.module.orders, info.p, spec)
        summands.append(PadicSummand(pc.idempotent, info.p, info.lam, c, spec, emb, shape,
                                     pc.elements, pc))
    out = PadicStructure(A, fact, summands)
    primes = {s.p for s in summands}
    if len(primes) == 1:
        p = primes.pop()
        lam = math.gcd(*[s.lam for s in summands])
        c = max(s.c for s in summands)
        out.common_lambda = lam
        out.common_spec = construct_galois_ring(p, lam, c)
        out.common_shape = _shape_from_orders(act.module.orders, p, out.common_spec)
    return out


def _check_induced_module(pc: PeirceSummand, spec: GaloisRingSpec, emb: dict) -> None:
    """The generator of GR must act additively on the piece through the embedding."""
    xi_idx = emb[spec.generator]
    act = pc.action.act
    table = act[xi_idx]
    if not pc.module.is_additive(table):  # pragma: no cover - bilinear by construction
        raise RingError("induced scalar action is not additive")
