import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modbrace.galois_ring import construct_galois_ring
from modbrace.module_core import (
    FiniteModule, ModuleMap, ModuleMapError, ModuleShape, SizeBoundError, abelian_isomorphism,
    elem_add, elem_neg, enumerate_automorphisms, invariant_factors_from_orders, omega_subgroup,
    order_statistics, rank_accounting, scalar_mul, times_p_image,
)


def brute_force_aut_count(moduli):
    """Count bijective additive maps by scanning all images of the generators."""
    mod = FiniteModule(moduli)
    count = 0
    for imgs in itertools.product(range(mod.size), repeat=len(moduli)):
        mat = mod.coords[list(imgs)].T
        if any(((d * mat[:, j]) % mod.mod_array).any() for j, d in enumerate(moduli)):
            continue
        perm = mod.index_of(mod.coords @ mat.T)
        if len(np.unique(perm)) == mod.size:
            count += 1
    return count


@pytest.mark.parametrize("p,lam,exps,expected", [
    (2, 1, (1, 1), 6), (2, 1, (2,), 2), (2, 1, (2, 2), 96), (2, 1, (2, 1), 8),
    (2, 1, (1, 1, 1), 168), (3, 1, (2,), 6), (3, 1, (1, 1), 48),
])
def test_automorphism_counts(p, lam, exps, expected):
    shape = ModuleShape.create(p, lam, exps)
    assert len(enumerate_automorphisms(shape)) == expected
    assert expected == brute_force_aut_count(shape.flat_moduli)


def test_d_linear_automorphisms():
    shape = ModuleShape.create(3, 2, (2,))
    assert len(enumerate_automorphisms(shape, "D")) == 72  # units of GR(3,2,2)
    shape = ModuleShape.create(2, 2, (1, 1))
    assert len(enumerate_automorphisms(shape, "D")) == 180  # GL(2, 4)


def test_automorphisms_sorted_identity_first():
    auts = enumerate_automorphisms(ModuleShape.create(2, 1, (2, 1)))
    assert np.array_equal(auts[0].perm, np.arange(8))


def test_rank_accounting():
    assert rank_accounting(ModuleShape.create(3, 2, (2,))) == (1, 2)
    assert rank_accounting(ModuleShape.create(2, 3, (1, 1))) == (2, 6)


def test_shape_sorts_exponents():
    s = ModuleShape.create(2, 1, (1, 3, 2))
    assert s.exponents == (3, 2, 1)
    assert s.order == 64


def test_shape_json_round_trip():
    s = ModuleShape.create(3, 2, (2, 1))
    assert ModuleShape.from_json(s.to_json()) == s


def test_omega_and_p_multiples():
    s = ModuleShape.create(2, 1, (2, 1))
    assert len(omega_subgroup(s, 1)) == 4
    assert len(omega_subgroup(s, 2)) == 8
    assert len(times_p_image(s)) == 2


def test_order_statistics():
    assert order_statistics(FiniteModule([8]).add) == {1: 1, 2: 1, 4: 2, 8: 4}
    assert order_statistics(FiniteModule([2, 2]).add) == {1: 1, 2: 3}


def test_invariant_factors():
    mod = FiniteModule([4, 6])
    assert invariant_factors_from_orders(mod.orders) == [12, 2]


def test_abelian_isomorphism():
    f = abelian_isomorphism(FiniteModule([6]).add, FiniteModule([2, 3]).add)
    a1, a2 = FiniteModule([6]).add, FiniteModule([2, 3]).add
    assert np.array_equal(f[a1], a2[f[:, None], f[None, :]])
    assert abelian_isomorphism(FiniteModule([4]).add, FiniteModule([2, 2]).add) is None


def test_size_bound(monkeypatch):
    monkeypatch.setenv("MODBRACE_MAX_ORDER", "16")
    with pytest.raises(SizeBoundError):
        FiniteModule([32])


def test_hom_condition_enforced():
    s = ModuleShape.create(2, 1, (2, 1))
    with pytest.raises(ModuleMapError):
        ModuleMap(s, ((1, 1), (0, 1)))  # Z/2 -> Z/4 by 1 is not well defined


def test_scalar_action_gaussian_style():
    s = ModuleShape.create(3, 2, (2,))
    xi = s.ring.generator
    x = s.element(5)
    assert scalar_mul(s, xi, scalar_mul(s, xi, x)) == elem_neg(s, x)  # xi^2 = -1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1, (2, 1)), (3, 2, (1,)), (2, 2, (2, 1))]), st.data())
def test_element_arithmetic(shape_args, data):
    s = ModuleShape.create(*shape_args)
    k = st.integers(0, s.order - 1)
    x, y, z = (s.element(data.draw(k)) for _ in range(3))
    assert elem_add(s, x, y) == elem_add(s, y, x)
    assert elem_add(s, elem_add(s, x, y), z) == elem_add(s, x, elem_add(s, y, z))
    assert s.index(elem_add(s, x, elem_neg(s, x))) == 0


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_map_composition(data):
    s = ModuleShape.create(2, 1, (2, 1))
    auts = enumerate_automorphisms(s)
    f = data.draw(st.sampled_from(auts))
    g = data.draw(st.sampled_from(auts))
    fg = f.compose(g)
    for k in range(s.order):
        x = s.element(k)
        assert fg.apply(x) == f.apply(g.apply(x))


def test_submodule_and_quotient():
    mod = FiniteModule([8])
    sub, embed = mod.submodule({0, 2, 4, 6})
    assert sub.moduli == (4,)
    q, proj = mod.quotient({0, 4})
    assert q.size == 4 and proj[4] == 0 and proj[1] == proj[5]


def test_gr_ring_scalars_commute():
    spec = construct_galois_ring(2, 2, 2)
    s = ModuleShape(spec, (2, 1))
    xi = s.module.scalars["xi"]
    assert s.module.is_additive(xi)
