import numpy as np
import pytest

from modbrace.finite_ring import (
    FiniteCommRing, RingAction, RingError, is_local, padic_structure, peirce_module_split,
    primitive_orthogonal_idempotents, quotient_by_annihilator, validate_ring,
)
from modbrace.galois_ring import construct_galois_ring
from modbrace.module_core import FiniteModule


def test_validate_ring():
    assert validate_ring(FiniteCommRing.zmod(12)).valid
    assert validate_ring(FiniteCommRing.from_galois_ring(construct_galois_ring(3, 2, 2))).valid


def test_validate_rejects_bad_unity():
    bad = FiniteCommRing([4], [[[1]]], [2])
    assert not validate_ring(bad).valid


def test_idempotents_z12():
    assert primitive_orthogonal_idempotents(FiniteCommRing.zmod(12)) == [4, 9]


def test_idempotents_local():
    assert primitive_orthogonal_idempotents(FiniteCommRing.zmod(9)) == [1]


def test_idempotents_field_product():
    A = FiniteCommRing.product(FiniteCommRing.zmod(2), FiniteCommRing.zmod(3))
    idem = primitive_orthogonal_idempotents(A)
    assert sorted(A.element(e) for e in idem) == [(0, 1), (1, 0)]


def test_is_local():
    info = is_local(FiniteCommRing.zmod(9))
    assert info.is_local and info.generators == (3,) and (info.p, info.lam) == (3, 1)
    assert not is_local(FiniteCommRing.zmod(6)).is_local
    info = is_local(FiniteCommRing.from_polynomial(4, [1, 1, 1]))
    assert info.is_local and (info.p, info.lam) == (2, 2)


def test_annihilator_quotient():
    mod = FiniteModule([8])
    A, act = quotient_by_annihilator(RingAction.integer(mod, 64))
    assert A.size == 8 and act.is_faithful()


def test_peirce_split_z12():
    pieces = peirce_module_split(RingAction.regular(FiniteCommRing.zmod(12)))
    assert {pc.idempotent: pc.elements for pc in pieces} == {
        4: frozenset({0, 4, 8}), 9: frozenset({0, 3, 6, 9})}


def test_padic_structure_galois():
    spec = construct_galois_ring(3, 2, 2)
    ps = padic_structure(RingAction.regular(FiniteCommRing.from_galois_ring(spec)))
    assert ps.common_lambda == 2
    assert ps.summands[0].spec.modulus == spec.modulus


def test_padic_structure_mixed_residue_degrees():
    A = FiniteCommRing.product(FiniteCommRing.from_galois_ring(construct_galois_ring(2, 2, 1)),
                               FiniteCommRing.from_galois_ring(construct_galois_ring(2, 4, 1)))
    ps = padic_structure(RingAction.regular(A))
    assert sorted(s.lam for s in ps.summands) == [2, 4]
    assert ps.common_lambda == 2
    assert ps.common_shape.exponents == (1, 1, 1)


def test_action_validation():
    mod = FiniteModule([4])
    act = RingAction(FiniteCommRing.zmod(4), mod, [[[1]]])
    assert act.validate().valid
    with pytest.raises(RingError):
        RingAction(FiniteCommRing.zmod(4), mod, [[[1], [0]]])


def test_ring_json_round_trip():
    A = FiniteCommRing.from_polynomial(4, [3, 1, 1])
    B = FiniteCommRing.from_json(A.to_json())
    assert np.array_equal(A.mul_table, B.mul_table)
