"""Group arithmetic, tables, and subgroup machinery."""
from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

import _oracles as oracles
from cayleyham.groups import (
    CapExceeded,
    Cyclic,
    Dihedral,
    DirectProduct,
    GroupError,
    ImagesAction,
    MatrixAction,
    Semidirect,
    UnitAction,
    canonical_generators,
    center,
    check_element,
    commutator,
    conjugate,
    derived_subgroup,
    element_order,
    enumerate_elements,
    generated_subgroup,
    group_order,
    identity,
    inverse,
    is_generating,
    is_minimal_generating,
    is_normal,
    multiply,
    normal_closure,
    sylow_subgroup,
    table_for,
    table_group,
)
from cayleyham.spectext import G150_ABELIAN_QUOT, G150_D6

Z5SQ = DirectProduct((Cyclic(5), Cyclic(5)))

# handy named elements of the two order-150 presets
F = ((1, 0), (0, 0))
T = ((0, 1), (0, 0))
FT = ((1, 1), (0, 0))
V10 = ((0, 0), (1, 0))
V01 = ((0, 0), (0, 1))
X = (1, (0, (0, 0)))
Y = (0, (1, (0, 0)))
XV1 = (1, (0, (1, 0)))


def test_cyclic_arithmetic():
    z6 = Cyclic(6)
    assert group_order(z6) == 6
    assert identity(z6) == 0
    assert multiply(z6, 4, 5) == 3
    assert inverse(z6, 2) == 4
    assert element_order(z6, 2) == 3
    assert enumerate_elements(z6) == [0, 1, 2, 3, 4, 5]


def test_dihedral_flip_rotation_convention():
    d6 = Dihedral(6)
    assert group_order(d6) == 6
    assert d6.n == 3
    # reflections compose to the rotation by the *difference* of mirror angles
    assert multiply(d6, (1, 1), (1, 2)) == (0, 1)
    assert multiply(d6, (1, 0), (0, 1)) == (1, 1)
    assert multiply(d6, (0, 1), (1, 0)) == (1, 2)
    assert inverse(d6, (1, 2)) == (1, 2)
    assert inverse(d6, (0, 1)) == (0, 2)
    assert all(element_order(d6, (1, r)) == 2 for r in range(3))


def test_direct_product_componentwise():
    spec = DirectProduct((Cyclic(4), Dihedral(6)))
    a = (3, (1, 2))
    b = (2, (0, 1))
    assert multiply(spec, a, b) == (1, (1, 0))
    assert inverse(spec, a) == (1, (1, 2))
    assert group_order(spec) == 24


def test_semidirect_acts_on_the_right():
    # translations move through a flip or rotation by the acting matrix
    g = ((1, 0), (1, 0))
    h = ((0, 0), (0, 1))
    assert multiply(G150_D6, g, h) == ((1, 0), (1, 1))
    # conjugating the translation (1,0) by the rotation t applies C = [[2,1],[3,2]]
    assert conjugate(G150_D6, V10, T) == ((0, 0), (2, 1))
    # conjugating the translation (1,0) by y applies M = [[0,1],[4,4]]
    y75 = (1, ((0, 0)))
    spec75 = Semidirect(Cyclic(3), Z5SQ, MatrixAction(5, (((0, 1), (4, 4)),)))
    assert conjugate(spec75, (0, (1, 0)), (1, (0, 0))) == (0, (0, 1))
    del y75


def test_preset_element_orders():
    assert element_order(G150_D6, F) == 2
    assert element_order(G150_D6, T) == 3
    assert element_order(G150_D6, FT) == 2
    assert element_order(G150_D6, multiply(G150_D6, F, V10)) == 10
    assert element_order(G150_D6, multiply(G150_D6, F, V01)) == 2
    assert element_order(G150_ABELIAN_QUOT, X) == 2
    assert element_order(G150_ABELIAN_QUOT, Y) == 3
    assert element_order(G150_ABELIAN_QUOT, XV1) == 10


def test_unit_action_semidirect():
    spec = Semidirect(Cyclic(6), Cyclic(25), UnitAction((24,)))
    assert multiply(spec, (1, 3), (1, 4)) == (2, 3 * 24 % 25 + 4 - 25)
    assert multiply(spec, (0, 1), (1, 0)) == (1, 24)
    assert element_order(spec, (1, 0)) == 6


def test_images_action_semidirect():
    # Z3 permuting the nonzero vectors of Z2 x Z2 cyclically
    a4 = Semidirect(Cyclic(3), DirectProduct((Cyclic(2), Cyclic(2))),
                    ImagesAction((((0, 1), (1, 1)),)))
    assert group_order(a4) == 12
    assert conjugate(a4, (0, (1, 0)), (1, (0, 0))) == (0, (0, 1))
    assert element_order(a4, (1, (0, 0))) == 3
    assert max(element_order(a4, g) for g in enumerate_elements(a4)) == 3


def test_check_element_rejects_bad_shapes():
    with pytest.raises(GroupError):
        check_element(Cyclic(6), 6)
    with pytest.raises(GroupError):
        check_element(Dihedral(6), (2, 0))
    with pytest.raises(GroupError):
        check_element(G150_D6, ((1, 0), (5, 0)))
    with pytest.raises(GroupError):
        check_element(DirectProduct((Cyclic(2), Cyclic(2))), (1, 1, 1))


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_elements(Cyclic(10_001))


def test_table_group_validation():
    with pytest.raises(GroupError, match="identity"):
        table_group("bad", [[1, 0], [0, 1]])
    with pytest.raises(GroupError, match="permutation"):
        table_group("bad", [[0, 1], [1, 1]])
    # smallest loop with two-sided identity that is not associative
    loop = [[0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 3, 4, 0, 1],
            [3, 4, 1, 2, 0],
            [4, 2, 0, 1, 3]]
    with pytest.raises(GroupError, match="associative"):
        table_group("bad", loop)


def test_table_for_matches_left_regular_oracle():
    for spec in (Cyclic(12), Dihedral(10), G150_D6):
        tbl = table_for(spec)
        perms, elements = oracles.left_regular(spec)
        assert list(elements) == list(tbl.elements)
        for i, g in enumerate(elements):
            assert tuple(int(x) for x in tbl.mul[i]) == perms[g]
        for i in range(tbl.n):
            assert int(tbl.mul[i][tbl.inv[i]]) == 0
            assert int(tbl.order[i]) == element_order(spec, tbl.elements[i])


def test_generated_subgroup_and_closure_oracle():
    sub = generated_subgroup(G150_D6, [T, V10])
    assert sub.order == 75
    assert frozenset(sub.members) == oracles.closure_naive(G150_D6, [T, V10])
    assert generated_subgroup(G150_D6, []).order == 1
    assert generated_subgroup(G150_D6, [multiply(G150_D6, F, V10)]).order == 10


def test_generating_and_minimality():
    assert is_generating(G150_D6, [F, T, V01])
    assert not is_generating(G150_D6, [F, T])
    # ft and a translation generate, so adding t is redundant
    assert is_generating(G150_D6, [FT, V10, T])
    assert not is_minimal_generating(G150_D6, [FT, V10, T])
    assert is_minimal_generating(Cyclic(6), [1])
    assert not is_minimal_generating(Cyclic(6), [1, 2])


def test_center_and_derived_subgroup():
    assert center(G150_D6).order == 1
    assert derived_subgroup(G150_D6).order == 75
    assert center(G150_ABELIAN_QUOT).order == 2
    assert derived_subgroup(G150_ABELIAN_QUOT).order == 25
    assert center(Dihedral(12)).order == 2
    assert derived_subgroup(Cyclic(30)).order == 1


def test_sylow_subgroups_of_order_150():
    for spec in (G150_D6, G150_ABELIAN_QUOT):
        p5 = sylow_subgroup(spec, 5)
        assert p5.order == 25
        assert is_normal(spec, p5)
        assert sylow_subgroup(spec, 3).order == 3
        assert sylow_subgroup(spec, 2).order == 2
    with pytest.raises(GroupError):
        sylow_subgroup(G150_D6, 7)


def test_normal_closure():
    d6 = Dihedral(6)
    assert normal_closure(d6, [(1, 0)]).order == 6
    assert normal_closure(d6, [(0, 1)]).order == 3
    assert normal_closure(G150_D6, [T]).order == 75
    assert is_normal(G150_D6, normal_closure(G150_D6, [F]))


def test_commutator_convention():
    a, b = (1, 1), (0, 1)
    d8 = Dihedral(8)
    expected = multiply(d8, multiply(d8, inverse(d8, a), inverse(d8, b)),
                        multiply(d8, a, b))
    assert commutator(d8, a, b) == expected
    assert commutator(Cyclic(9), 2, 5) == 0


def test_canonical_generators_generate():
    for spec in (Cyclic(8), Dihedral(10), G150_D6, G150_ABELIAN_QUOT):
        gens = canonical_generators(spec)
        assert is_generating(spec, gens)


def test_small_group_zoo_is_complete_and_distinct():
    zoo = oracles.small_group_zoo()
    assert len(zoo) == 42
    by_order: dict = {}
    for _, spec in zoo:
        by_order.setdefault(group_order(spec), []).append(spec)
    expected = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2,
                10: 2, 11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14}
    assert {k: len(v) for k, v in by_order.items()} == expected
    for specs in by_order.values():
        for s1, s2 in itertools.combinations(specs, 2):
            assert not _isomorphic(s1, s2)


def _fingerprint(spec):
    tbl = table_for(spec)
    orders = tuple(sorted(int(k) for k in tbl.order))
    return (orders, center(spec).order, derived_subgroup(spec).order)


def _isomorphic(s1, s2) -> bool:
    if _fingerprint(s1) != _fingerprint(s2):
        return False
    t1, t2 = table_for(s1), table_for(s2)
    n = t1.n
    by_order: dict = {}
    for j in range(n):
        by_order.setdefault(int(t2.order[j]), []).append(j)

    def extend(phi, known):
        i = len(phi)
        if i == n:
            return True
        if i in known:
            j = known[i]
            if j in phi.values():
                return False
            cands = [j]
        else:
            cands = [j for j in by_order.get(int(t1.order[i]), [])
                     if j not in phi.values()]
        for j in cands:
            trial = dict(phi)
            trial[i] = j
            ok = True
            grown = dict(known)
            for a in list(trial):
                for b in list(trial):
                    c1 = int(t1.mul[a][b])
                    c2 = int(t2.mul[trial[a]][trial[b]])
                    if c1 in trial:
                        if trial[c1] != c2:
                            ok = False
                            break
                    elif c1 in grown:
                        if grown[c1] != c2:
                            ok = False
                            break
                    else:
                        grown[c1] = c2
                if not ok:
                    break
            if ok and extend(trial, grown):
                return True
        return False

    return extend({0: 0}, {})


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_group_axioms_hold_on_sampled_specs(data):
    spec = data.draw(st.sampled_from(
        [s for _, s in oracles.small_group_zoo() if group_order(s) > 1]))
    els = enumerate_elements(spec)
    g = data.draw(st.sampled_from(els))
    h = data.draw(st.sampled_from(els))
    k = data.draw(st.sampled_from(els))
    e = identity(spec)
    assert multiply(spec, multiply(spec, g, h), k) == \
        multiply(spec, g, multiply(spec, h, k))
    assert multiply(spec, g, e) == g
    assert multiply(spec, e, g) == g
    assert multiply(spec, g, inverse(spec, g)) == e
    assert inverse(spec, multiply(spec, g, h)) == \
        multiply(spec, inverse(spec, h), inverse(spec, g))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_element_order_divides_group_order(data):
    spec = data.draw(st.sampled_from([s for _, s in oracles.small_group_zoo()]))
    g = data.draw(st.sampled_from(enumerate_elements(spec)))
    assert group_order(spec) % element_order(spec, g) == 0


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_conjugation_preserves_order(data):
    spec = data.draw(st.sampled_from(
        [Dihedral(12), G150_D6, Semidirect(Cyclic(4), Cyclic(5), UnitAction((2,)))]))
    els = enumerate_elements(spec)
    g = data.draw(st.sampled_from(els))
    x = data.draw(st.sampled_from(els))
    assert element_order(spec, conjugate(spec, g, x)) == element_order(spec, g)
    assert commutator(spec, g, x) == multiply(
        spec, inverse(spec, g), conjugate(spec, g, x))
