import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modbrace.brace_core import (
    D_BRACE, NOT_GAMMA, Z_BRACE, Brace, BraceError, DocumentError, GammaFunction,
    brace_from_circle, brace_from_document, brace_to_document, brace_to_radical_ring, circle,
    circle_inverse, classify_subset, direct_product, find_isomorphism, peirce_split_brace,
    quotient_brace, restrict_brace, restrict_scalars, star, two_sided_check, verify_gamma,
    zero_brace,
)
from modbrace.cli import gaussian_brace
from modbrace.finite_ring import FiniteCommRing, RingAction
from modbrace.galois_ring import construct_galois_ring, embed_into_local_ring
from modbrace.module_core import FiniteModule, ModuleShape, module_automorphisms
from modbrace.radical_ring import NilpotentRing, brace_from_radical_ring
from modbrace.series import subgroups_of

from conftest import enumerated

# In the 2Z/8Z brace the element with index k stands for 2k.
TWO, FOUR, SIX = 1, 2, 3


def test_trivial_is_d_brace():
    mod = ModuleShape.create(3, 2, (2, 1)).module
    assert verify_gamma(mod, GammaFunction.trivial(mod.size)).kind == D_BRACE


def test_two_z8_classification(two_z8):
    rep = verify_gamma(two_z8.module, two_z8.gamma)
    assert rep.is_gamma
    bare = FiniteModule(two_z8.module.moduli)
    assert verify_gamma(bare, two_z8.gamma).kind == D_BRACE  # Z-linearity is automatic


def test_gaussian_is_s_brace():
    b = gaussian_brace()
    rep = verify_gamma(b.module, b.gamma)
    assert rep.kind == D_BRACE and rep.linear_over == {"i": True}
    x = b.module.index([1, 0, 0, 0])
    assert np.array_equal(b.gamma_table[x], b.module.neg)


def test_z_brace_when_not_linear():
    # gamma_x = (-1)^{x_0} on Z/4 x Z/4 is linear over a scalar acting by swapping coordinates;
    # conjugating by a non-scalar automorphism breaks linearity but keeps the brace.
    mod = FiniteModule((4, 4))
    mod.scalars["swap"] = mod.index_of(mod.coords[:, ::-1])
    idx = mod.coords[:, 0] % 2
    rep = verify_gamma(mod, GammaFunction([np.arange(16), mod.index_of(np.stack(
        [mod.coords[:, 0], (-mod.coords[:, 1]) % 4], axis=1))], idx))
    assert rep.kind == Z_BRACE and rep.counterexample is not None


def test_tampered_gamma_fails(two_z8):
    tables = two_z8.gamma_table.copy()
    tables[TWO] = np.arange(4)
    rep = verify_gamma(two_z8.module, GammaFunction.from_tables(tables))
    assert rep.kind == NOT_GAMMA and rep.counterexample is not None


def test_non_additive_table_fails():
    mod = FiniteModule([4])
    tables = np.tile(np.arange(4), (4, 1))
    tables[1] = [0, 2, 1, 3]
    rep = verify_gamma(mod, GammaFunction.from_tables(tables))
    assert rep.kind == NOT_GAMMA and "additive" in rep.reason


def test_circle_and_star(two_z8):
    assert circle(two_z8, TWO, TWO) == 0
    assert star(two_z8, TWO, TWO) == FOUR
    assert circle_inverse(two_z8, TWO) == TWO
    for x in range(4):
        assert star(two_z8, x, 0) == 0 and star(two_z8, 0, x) == 0


def test_trivial_operations():
    b = Brace.trivial(FiniteModule([2, 4]))
    assert np.array_equal(b.circle_table, b.module.add)
    assert not b.star_table.any()


def test_brace_from_circle_round_trip(two_z8):
    b = brace_from_circle(two_z8.module, two_z8.circle_table)
    assert np.array_equal(b.gamma_table, two_z8.gamma_table)
    mod = FiniteModule([3, 3])
    assert brace_from_circle(mod, mod.add).kind == D_BRACE


def test_brace_from_circle_rejects_reindexed_cyclic():
    mod = FiniteModule([4])
    swap = np.array([0, 2, 1, 3])
    table = swap[mod.add[swap[:, None], swap[None, :]]]
    with pytest.raises(BraceError):
        brace_from_circle(mod, table)


def test_direct_product(two_z8):
    z2 = Brace.trivial(ModuleShape.create(2, 1, (1,)).module)
    prod = direct_product(two_z8, z2)
    assert prod.size == 8 and prod.circle_stats == {1: 1, 2: 7}
    assert prod.additive_stats == {1: 1, 2: 3, 4: 4}
    again = direct_product(two_z8, zero_brace(two_z8.module))
    assert find_isomorphism(again, two_z8) is not None


def test_trivial_times_trivial():
    a = Brace.trivial(FiniteModule([2]))
    b = Brace.trivial(FiniteModule([3]))
    assert direct_product(a, b).circle_is_abelian
    assert not direct_product(a, b).star_table.any()


def test_product_ring_mismatch():
    a = Brace.trivial(ModuleShape.create(2, 2, (1,)).module)
    b = Brace.trivial(ModuleShape.create(3, 2, (1,)).module)
    with pytest.raises(BraceError):
        direct_product(a, b)


def test_classify_subsets(two_z8):
    assert classify_subset(two_z8, {0}).ideal
    c = classify_subset(two_z8, {0, FOUR})
    assert c.ideal and c.submodule
    assert not classify_subset(two_z8, {0, TWO}).additive_subgroup
    triv = Brace.trivial(FiniteModule([2, 4]))
    for x in range(triv.size):
        assert classify_subset(triv, triv.module.span([x])).ideal


def test_quotients(two_z8):
    q, proj = quotient_brace(two_z8, {0, FOUR})
    assert q.size == 2 and not q.star_table.any()
    assert quotient_brace(two_z8, range(4))[0].size == 1
    same, _ = quotient_brace(two_z8, {0})
    assert np.array_equal(same.gamma_table, two_z8.gamma_table)


def test_quotient_rejects_non_ideal():
    b = enumerated(2, 1, (2, 1), "Z").braces[-1]
    bad = [S for S in subgroups_of(b, range(b.size)) if not classify_subset(b, S).ideal]
    assert bad
    for S in bad:
        with pytest.raises(BraceError):
            quotient_brace(b, S)


def test_left_ideal_need_not_be_ideal():
    found = [(b, S) for b in enumerated(2, 1, (2, 1), "Z").braces for S in subgroups_of(b, range(8))
             if classify_subset(b, S).left_ideal and not classify_subset(b, S).ideal]
    assert len(found) == 16


def test_find_isomorphism_cases(two_z8):
    f = find_isomorphism(two_z8, two_z8)
    assert np.array_equal(f, np.arange(4))
    assert find_isomorphism(Brace.trivial(FiniteModule([4])), Brace.trivial(FiniteModule([2, 2]))) is None
    assert find_isomorphism(two_z8, Brace.trivial(FiniteModule([4]))) is None


def test_find_isomorphism_relabelled():
    b = enumerated(2, 1, (2, 1), "Z").braces[7]
    auts = module_automorphisms(b.module)
    relabelled = Brace(b.module, b.gamma.relabel(auts[5]))
    f = find_isomorphism(b, relabelled)
    assert f is not None
    assert np.array_equal(f[b.circle_table], relabelled.circle_table[f[:, None], f[None, :]])


def test_two_sided_and_radical_ring(two_z8):
    assert two_sided_check(two_z8)
    ring = brace_to_radical_ring(two_z8)
    assert np.array_equal(ring.mul_table, NilpotentRing.multiples(8, 2).mul_table)
    zero = brace_to_radical_ring(Brace.trivial(FiniteModule([3, 3])))
    assert not zero.mul_table.any()


def test_one_sided_conversion_fails():
    for b in enumerated(2, 1, (1, 1, 1), "Z").braces:
        if not two_sided_check(b):
            with pytest.raises(BraceError):
                brace_to_radical_ring(b)
            return
    pytest.fail("no one-sided brace of order 8 found")


def test_gaussian_two_sided_recorded():
    assert gaussian_brace().is_two_sided is True


def test_restrict_scalars_identity(galois_brace):
    spec = galois_brace.module.ring
    phi = {e: e for e in spec.elements()}
    out = restrict_scalars(galois_brace, phi, spec)
    assert np.array_equal(out.gamma_table, galois_brace.gamma_table)


def test_restrict_scalars_to_prime_ring(galois_brace):
    spec = galois_brace.module.ring
    base = construct_galois_ring(spec.p, 1, spec.c)
    phi = {e: tuple(e) + (0,) * (spec.lam - 1) for e in base.elements()}
    out = restrict_scalars(galois_brace, phi, base)
    assert out.is_d_brace and not out.module.scalars


def test_restrict_scalars_through_local_embedding():
    S = FiniteCommRing.from_polynomial(4, [3, 1, 1])
    act = RingAction.regular(S)
    mod = act.module
    minus = mod.neg.copy()
    b = Brace(mod, GammaFunction([np.arange(mod.size), minus], mod.coords[:, 0] % 2))
    spec = construct_galois_ring(2, 2, 2)
    phi = embed_into_local_ring(spec, S)
    out = restrict_scalars(b, phi, spec, action=act)
    assert out.is_d_brace


def test_restrict_scalars_rejects_non_hom(galois_brace):
    spec = galois_brace.module.ring
    phi = {e: spec.one for e in spec.elements()}
    with pytest.raises(BraceError):
        restrict_scalars(galois_brace, phi, spec)


def test_peirce_split_local(two_z8):
    rep = peirce_split_brace(two_z8, RingAction.integer(two_z8.module, 8))
    assert len(rep.summands) == 1 and rep.summands[0].order == 4


def test_peirce_split_sylow():
    mod = FiniteModule([12])
    rep = peirce_split_brace(Brace.trivial(mod), RingAction.integer(mod, 12))
    assert sorted(s.order for s in rep.summands) == [3, 4]
    assert rep.all_ideals and all(rep.conditions.values())


def test_radical_ring_decomposition():
    n = NilpotentRing.product(NilpotentRing.multiples(8, 2), NilpotentRing.multiples(9, 3))
    b = brace_from_radical_ring(n)
    rep = peirce_split_brace(b, RingAction.integer(b.module, 12))
    assert rep.all_ideals and rep.conditions_agree and rep.conditions["i"]
    assert rep.product.circle_stats == b.circle_stats


def test_document_round_trip(galois_brace):
    doc = json.loads(json.dumps(brace_to_document(galois_brace)))
    back = brace_from_document(doc)
    assert np.array_equal(back.gamma_table, galois_brace.gamma_table)
    g = gaussian_brace()
    back = brace_from_document(json.dumps(brace_to_document(g)))
    assert back.is_d_brace and set(back.module.scalars) == {"i"}


def test_malformed_documents():
    with pytest.raises(DocumentError):
        brace_from_document({"module": {"moduli": [4]}, "gamma": [0, 0, 0], "registry": [[[1]]]})
    with pytest.raises(DocumentError):
        brace_from_document({"module": {"moduli": [4]}, "gamma": [0] * 4, "registry": [[[2]]]})
    with pytest.raises(DocumentError):
        brace_from_document({"gamma": []})


# -- properties over the enumerated corpus --------------------------------------------------

SHAPES = [(2, 1, (2,), "Z"), (2, 1, (1, 1), "Z"), (2, 1, (3,), "Z"), (2, 1, (2, 1), "Z"),
          (3, 1, (2,), "Z"), (3, 1, (1, 1), "Z"), (2, 1, (4,), "Z")]


def _draw_brace(data):
    shape = data.draw(st.sampled_from(SHAPES))
    braces = enumerated(*shape).braces
    return data.draw(st.sampled_from(braces))


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_gamma_is_hom_from_circle_group(data):
    b = _draw_brace(data)
    T, C = b.gamma_table, b.circle_table
    n = b.size
    composed = T[np.arange(n)[:, None, None], T[None, :, :]]  # gamma_x gamma_y
    assert np.array_equal(T[C], composed)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_star_identities(data):
    b = _draw_brace(data)
    add, S = b.module.add, b.star_table
    n = b.size
    x, y, z = (np.arange(n)[:, None, None], np.arange(n)[None, :, None], np.arange(n)[None, None, :])
    lhs = S[add[add[x, y], S[x, y]], z]
    rhs = add[add[S[x, z], S[y, z]], S[x, S[y, z]]]
    assert np.array_equal(lhs, rhs)
    assert np.array_equal(S[x, add[y, z]], add[S[x, y], S[x, z]])


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_left_brace_axiom(data):
    b = _draw_brace(data)
    add, neg, C = b.module.add, b.module.neg, b.circle_table
    n = b.size
    x, y, z = (np.arange(n)[:, None, None], np.arange(n)[None, :, None], np.arange(n)[None, None, :])
    assert np.array_equal(C[x, add[y, z]], add[add[C[x, y], neg[x]], C[x, z]])


def test_scalar_identity_for_module_braces(galois_brace):
    mod = galois_brace.module
    S = galois_brace.star_table
    for s in mod.scalars.values():
        assert np.array_equal(s[S], S[:, s])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_submodule_subbraces_restrict(data):
    b = _draw_brace(data)
    x = data.draw(st.integers(0, b.size - 1))
    H = b.module.span([x])
    c = classify_subset(b, H)
    assert c.consistent
    if c.r_subbrace:
        sub, _ = restrict_brace(b, H)
        assert verify_gamma(sub.module, sub.gamma).is_gamma


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_isomorphism_implies_equal_stats(data):
    b1, b2 = _draw_brace(data), _draw_brace(data)
    if b1.size == b2.size and find_isomorphism(b1, b2) is not None:
        assert b1.additive_stats == b2.additive_stats
        assert b1.circle_stats == b2.circle_stats


def test_equivalence_exhaustive_z4():
    """Every table of automorphisms of Z/4: gamma function iff the circle is a brace."""
    mod = FiniteModule([4])
    auts = module_automorphisms(mod)
    for choice in itertools.product(range(len(auts)), repeat=3):
        tables = np.stack([auts[0]] + [auts[c] for c in choice])
        rep = verify_gamma(mod, GammaFunction.from_tables(tables))
        C = mod.add[np.arange(4)[:, None], tables]
        group = all(sorted(row) == list(range(4)) for row in C) and \
            all(sorted(col) == list(range(4)) for col in C.T)
        assoc = np.array_equal(C[C[:, :, None], np.arange(4)[None, None, :]],
                               C[np.arange(4)[:, None, None], C[None, :, :]])
        assert rep.is_gamma == (group and assoc)
