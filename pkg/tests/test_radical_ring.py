import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modbrace.brace_core import brace_to_radical_ring, two_sided_check
from modbrace.galois_ring import construct_galois_ring
from modbrace.radical_ring import (
    NilpotentRing, RadicalRingError, adjoint_circle, brace_from_radical_ring,
    corollary_radring_check, quasi_inverse, validate_nilpotent_ring,
)


def upper_triangular(p):
    """Strictly upper triangular 3x3 matrices over Z/p: a noncommutative nilpotent ring."""
    # basis e12, e13, e23 with e12 e23 = e13
    z = [0, 0, 0]
    mul = [[z, z, [0, 1, 0]], [z, z, z], [z, z, z]]
    return NilpotentRing([p, p, p], mul, name="UT3")


RINGS = [
    NilpotentRing.zero([2, 4]),
    NilpotentRing.multiples(8, 2),
    NilpotentRing.multiples(27, 3),
    NilpotentRing.multiples(16, 2),
    NilpotentRing.from_galois_ideal(construct_galois_ring(3, 2, 3), 1),
    NilpotentRing.from_galois_ideal(construct_galois_ring(2, 2, 3), 1),
    NilpotentRing.product(NilpotentRing.multiples(8, 2), NilpotentRing.multiples(9, 3)),
    upper_triangular(2),
    upper_triangular(3),
]


def test_validation_examples():
    assert validate_nilpotent_ring(NilpotentRing.zero([3, 3])).index == 2
    rep = validate_nilpotent_ring(NilpotentRing.multiples(8, 2))
    assert rep.valid and rep.index == 3
    assert [len(t) for t in rep.chain] == [4, 2, 1]
    rep = validate_nilpotent_ring(NilpotentRing.from_galois_ideal(construct_galois_ring(3, 2, 3), 1))
    assert rep.valid and rep.commutative


def test_rejects_non_nilpotent():
    unital = NilpotentRing([4], [[[1]]])  # Z/4 itself
    assert not validate_nilpotent_ring(unital).valid
    with pytest.raises(RadicalRingError):
        brace_from_radical_ring(unital)


def test_rejects_non_associative():
    z = [0, 0, 0]
    # g0 g0 = g1 and g0 g1 = g2, so (g0 g0) g0 = 0 while g0 (g0 g0) = g2
    bad = NilpotentRing([2, 2, 2], [[[0, 1, 0], [0, 0, 1], z], [z, z, z], [z, z, z]])
    rep = validate_nilpotent_ring(bad)
    assert not rep.valid and "associativity" in rep.violations[0]


def test_adjoint_brace_examples(two_z8):
    zero = brace_from_radical_ring(NilpotentRing.zero([2, 2]))
    assert not zero.star_table.any()
    assert two_z8.circle_stats == {1: 1, 2: 3}
    assert adjoint_circle(NilpotentRing.multiples(8, 2), 1, 1) == 0


def test_galois_adjoint_brace(galois_brace):
    assert galois_brace.additive_stats == {1: 1, 3: 8, 9: 72}
    assert galois_brace.is_d_brace and galois_brace.module.ring.lam == 2


def test_quasi_inverse_series():
    n = NilpotentRing.multiples(16, 2)
    for x in range(n.size):
        assert adjoint_circle(n, x, quasi_inverse(n, x)) == 0


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.name or str(r.orders))
def test_round_trip(ring):
    b = brace_from_radical_ring(ring)
    assert two_sided_check(b)
    assert np.array_equal(brace_to_radical_ring(b).mul_table, ring.mul_table)
    ys = np.arange(ring.size)
    assert np.array_equal(b.module.add[b.gamma_table, b.module.neg[ys][None, :]], ring.mul_table)


def test_noncommutative_accepted_but_not_compared():
    ring = upper_triangular(2)
    assert not ring.commutative
    assert brace_from_radical_ring(ring).is_two_sided
    with pytest.raises(RadicalRingError):
        corollary_radring_check(ring)


def test_radring_sharpness():
    rep = corollary_radring_check(NilpotentRing.multiples(8, 2))
    assert rep.rank_d == 1 and not rep.hypothesis and not rep.stats_equal
    assert rep.additive_stats == {1: 1, 2: 1, 4: 2} and rep.circle_stats == {1: 1, 2: 3}


def test_radring_galois_gain():
    rep = corollary_radring_check(NilpotentRing.from_galois_ideal(construct_galois_ring(3, 2, 3), 1))
    assert (rep.rank_d, rep.rank_z) == (1, 2)
    assert rep.hypothesis and not rep.z_hypothesis
    assert rep.stats_equal and rep.isomorphism is not None


def test_radring_zero_ring():
    rep = corollary_radring_check(NilpotentRing.zero([3]))
    assert rep.stats_equal and rep.isomorphism is not None


def test_json_round_trip():
    ring = NilpotentRing.multiples(27, 3)
    assert np.array_equal(NilpotentRing.from_json(ring.to_json()).mul_table, ring.mul_table)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(RINGS), st.data())
def test_star_is_product(ring, data):
    b = brace_from_radical_ring(ring)
    x = data.draw(st.integers(0, ring.size - 1))
    y = data.draw(st.integers(0, ring.size - 1))
    assert b.star_table[x, y] == ring.mul_table[x, y]
    assert b.circle_table[x, y] == adjoint_circle(ring, x, y)
