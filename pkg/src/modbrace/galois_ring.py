"""Arithmetic in Galois rings GR(p, c, lam) = Z_p(lam) / p^c.

Elements are coefficient tuples in the basis (1, xi, ..., xi^(lam-1)) where
xi is the class of the indeterminate modulo a monic lift of an irreducible
polynomial over F_p.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:
    from .finite_ring import FiniteCommRing

RingElement = tuple[int, ...]


class GaloisRingError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


# -- polynomials over Z/m, coefficient lists from the constant term up --------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mod(f: Sequence[int], g: Sequence[int], m: int) -> list[int]:
    """Remainder of f by the monic polynomial g, coefficients mod m."""
    f = [c % m for c in f]
    d = len(g) - 1
    for top in range(len(f) - 1, d - 1, -1):
        c = f[top]
        if c:
            for k in range(d + 1):
                f[top - d + k] = (f[top - d + k] - c * g[k]) % m
    return _trim(f[:d] if len(f) > d else f)


def _is_irreducible_mod_p(g: Sequence[int], p: int) -> bool:
    deg = len(g) - 1
    if deg <= 1:
        return True
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            h = list(tail) + [1]
            if not _poly_mod(g, h, p):
                return False
    return True


def _irreducible_monic(p: int, lam: int) -> tuple[int, ...]:
    # ordered by the integer sum(a_i p^i), i.e. lexicographic from the top coefficient down
    for code in range(p ** lam):
        low = [(code // p ** i) % p for i in range(lam)]
        g = low + [1]
        if _is_irreducible_mod_p(g, p):
            return tuple(g)
    raise GaloisRingError(f"no irreducible polynomial of degree {lam} over F_{p}")


@dataclass(frozen=True)
class GaloisRingSpec:
    """GR(p, c, lam), stored with its monic modulus (constant term first)."""

    p: int
    lam: int
    c: int
    modulus: tuple[int, ...] = field(compare=True)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise GaloisRingError(f"{self.p} is not prime")
        if self.lam < 1 or self.c < 1:
            raise GaloisRingError("lambda and c must be positive")
        if len(self.modulus) != self.lam + 1 or self.modulus[-1] != 1:
            raise GaloisRingError("modulus must be monic of degree lambda")
        if any(not 0 <= a < self.char for a in self.modulus):
            raise GaloisRingError("modulus coefficients must lie in [0, p^c)")
        if not _is_irreducible_mod_p([a % self.p for a in self.modulus], self.p):
            raise GaloisRingError("modulus is not irreducible mod p")

    @property
    def char(self) -> int:
        return self.p ** self.c

    @property
    def order(self) -> int:
        return self.p ** (self.c * self.lam)

    @property
    def zero(self) -> RingElement:
        return (0,) * self.lam

    @property
    def one(self) -> RingElement:
        return (1,) + (0,) * (self.lam - 1)

    @property
    def generator(self) -> RingElement:
        """The class xi of the indeterminate."""
        if self.lam == 1:
            return ((-self.modulus[0]) % self.char,)
        return (0, 1) + (0,) * (self.lam - 2)

    def element(self, value: int | Sequence[int]) -> RingElement:
        if isinstance(value, int):
            return reduce_element(self, (value,) + (0,) * (self.lam - 1))
        return reduce_element(self, tuple(value))

    def elements(self) -> list[RingElement]:
        """All elements in mixed-radix order, first coefficient most significant."""
        return [tuple(t) for t in itertools.product(range(self.char), repeat=self.lam)]

    def with_precision(self, c: int) -> "GaloisRingSpec":
        return GaloisRingSpec(self.p, self.lam, c, tuple(a % self.p ** c for a in self.modulus))

    def __str__(self) -> str:
        return f"GR({self.p},{self.c},{self.lam})"

    def to_json(self) -> dict:
        return {"p": self.p, "lambda": self.lam, "c": self.c, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict | str) -> "GaloisRingSpec":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["p"]), int(data["lambda"]), int(data["c"]),
                   tuple(int(a) for a in data["modulus"]))


def construct_galois_ring(p: int, lam: int, c: int) -> GaloisRingSpec:
    """Build GR(p, c, lam) over the smallest irreducible monic modulus."""
    if not is_prime(p):
        raise GaloisRingError(f"{p} is not prime")
    if lam < 1 or c < 1:
        raise GaloisRingError("lambda and c must be positive")
    return GaloisRingSpec(p, lam, c, _irreducible_monic(p, lam))


def reduce_element(spec: GaloisRingSpec, a: Sequence[int], c: int | None = None) -> RingElement:
    if len(a) != spec.lam:
        raise GaloisRingError(f"expected {spec.lam} coefficients, got {len(a)}")
    m = spec.p ** (spec.c if c is None else c)
    return tuple(x % m for x in a)


def _check(spec: GaloisRingSpec, *xs: Sequence[int]) -> None:
    for x in xs:
        if len(x) != spec.lam:
            raise GaloisRingError(f"operand {tuple(x)} does not match {spec}")


def ring_add(spec: GaloisRingSpec, a: RingElement, b: RingElement, c: int | None = None) -> RingElement:
    _check(spec, a, b)
    m = spec.p ** (spec.c if c is None else c)
    return tuple((x + y) % m for x, y in zip(a, b))


def ring_neg(spec: GaloisRingSpec, a: RingElement, c: int | None = None) -> RingElement:
    _check(spec, a)
    m = spec.p ** (spec.c if c is None else c)
    return tuple((-x) % m for x in a)


def ring_sub(spec: GaloisRingSpec, a: RingElement, b: RingElement, c: int | None = None) -> RingElement:
    return ring_add(spec, a, ring_neg(spec, b, c), c)


def ring_mul(spec: GaloisRingSpec, a: RingElement, b: RingElement, c: int | None = None) -> RingElement:
    """Product of a and b; ``c`` optionally lowers the working precision."""
    _check(spec, a, b)
    m = spec.p ** (spec.c if c is None else c)
    prod = [0] * (2 * spec.lam - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    r = _poly_mod(prod, spec.modulus, m)
    return tuple(r + [0] * (spec.lam - len(r)))


def ring_pow(spec: GaloisRingSpec, a: RingElement, e: int, c: int | None = None) -> RingElement:
    result = spec.one
    base = a
    while e:
        if e & 1:
            result = ring_mul(spec, result, base, c)
        base = ring_mul(spec, base, base, c)
        e >>= 1
    return reduce_element(spec, result, c)


def is_unit(spec: GaloisRingSpec, a: RingElement) -> bool:
    _check(spec, a)
    return any(x % spec.p for x in a)


def ring_inverse(spec: GaloisRingSpec, a: RingElement) -> RingElement:
    """Inverse by inversion in the residue field followed by Newton lifting."""
    if not is_unit(spec, a):
        raise GaloisRingError(f"{a} is not a unit in {spec}")
    q = spec.p ** spec.lam
    b = ring_pow(spec, a, q - 2, c=1) if q > 2 else reduce_element(spec, a, c=1)
    two = spec.element(2)
    precision = 1
    while precision < spec.c:
        b = ring_mul(spec, b, ring_sub(spec, two, ring_mul(spec, a, b)))
        precision *= 2
    assert ring_mul(spec, a, b) == spec.one
    return b


def elements_of(spec: GaloisRingSpec) -> list[RingElement]:
    return spec.elements()


def element_index(spec: GaloisRingSpec, a: RingElement) -> int:
    k = 0
    for x in a:
        k = k * spec.char + x
    return k


# -- Hensel embedding into a finite local ring -------------------------------

def _eval_poly(S: "FiniteCommRing", coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = S.add(S.mul(acc, x), S.int_element(a))
    return acc


def embed_into_local_ring(spec: GaloisRingSpec, S: "FiniteCommRing") -> dict[RingElement, int]:
    """Unital ring homomorphism GR -> S, as a table from ring elements to S indices.

    The generator is sent to a root of the modulus found by scanning S for an
    approximate root and refining it with Newton steps x <- x - g(x)/g'(x).
    """
    info = S.local_info()
    if not info.is_local:
        raise GaloisRingError("target ring is not local")
    if info.p != spec.p or S.characteristic() != spec.char:
        raise GaloisRingError(
            f"characteristic mismatch: {S.characteristic()} versus {spec.char}")
    if info.lam % spec.lam:
        raise GaloisRingError(f"lambda={spec.lam} does not divide residue degree {info.lam}")
    g = spec.modulus
    dg = [k * g[k] for k in range(1, len(g))]
    for start in range(S.size):
        if _eval_poly(S, g, start) in info.maximal_ideal:
            break
    else:
        raise GaloisRingError("no root of the modulus in the residue field")
    xi = start
    for _ in range(S.size):
        val = _eval_poly(S, g, xi)
        if val == 0:
            break
        u = S.inverse(_eval_poly(S, dg, xi))
        xi = S.sub(xi, S.mul(val, u))
    else:  # pragma: no cover - nilpotency of the maximal ideal bounds the loop
        raise GaloisRingError("Newton iteration did not terminate")

    powers = [S.one]
    for _ in range(1, spec.lam):
        powers.append(S.mul(powers[-1], xi))
    table: dict[RingElement, int] = {}
    for a in spec.elements():
        acc = 0
        for coeff, pw in zip(a, powers):
            acc = S.add(acc, S.int_multiple(coeff, pw))
        table[a] = acc

    if table[spec.one] != S.one:
        raise GaloisRingError("embedding is not unital")
    elems = spec.elements()
    for a in elems:
        for b in elems:
            if table[ring_add(spec, a, b)] != S.add(table[a], table[b]) or \
                    table[ring_mul(spec, a, b)] != S.mul(table[a], table[b]):
                raise GaloisRingError(f"embedding fails on the pair {a}, {b}")
    return table
