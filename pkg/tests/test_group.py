from __future__ import annotations

import itertools

import numpy as np
import pytest

from icayley.constructors import builtin, cyclic, dihedral, direct_product, elem_abelian, family_a
from icayley.errors import NotAGroup, NotPGroup, SizeCeilingError
from icayley.group import (
    FiniteGroup,
    OrderProfile,
    Subgroup,
    center,
    centralizer,
    closure,
    derived_subgroup,
    exponent,
    frattini_pgroup,
    group_from_table,
    is_special_2group,
    lower_central_series,
    nilpotency_class,
    normalizer,
    o_p,
    omega1,
    order_profile,
    prime_power_base,
    sylow,
)


def naive_orders(G):
    out = []
    for a in range(G.n):
        k, x = 1, a
        while x != 0:
            x = int(G.table[x, a])
            k += 1
        out.append(k)
    return out


def naive_center(G):
    return {a for a in range(G.n) if all(G.table[a, b] == G.table[b, a] for b in range(G.n))}


def test_identity_and_inverses():
    for G in (cyclic(7), dihedral(5), builtin("Q8"), builtin("A4")):
        for a in range(G.n):
            assert G.mul(a, 0) == a == G.mul(0, a)
            assert G.mul(a, int(G.inv[a])) == 0
        assert list(G.ord) == naive_orders(G)


def test_rejects_non_latin_square():
    T = np.array([[0, 1], [1, 1]])
    with pytest.raises(NotAGroup):
        group_from_table(T)


def test_rejects_non_associative_loop():
    # Latin square with identity 0 that is not associative (a loop of order 5)
    T = np.array([
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ])
    with pytest.raises(NotAGroup):
        group_from_table(T)


def test_identity_relocated_to_zero():
    # Z3 written with identity at index 2
    T = np.array([[1, 2, 0], [2, 0, 1], [0, 1, 2]])
    G = group_from_table(T, labels=["a", "b", "e"])
    assert G.labels[0] == "e"
    assert np.array_equal(G.table[0], np.arange(3))
    assert order_profile(G) == {1: 1, 3: 2}


def test_size_ceiling():
    with pytest.raises(SizeCeilingError):
        cyclic(40_000)


def test_closure_and_cap():
    G = dihedral(8)
    H = closure(G, [2])  # rotation r
    assert H.order == 8
    assert closure(G, [2, 1], cap=10) is None
    assert closure(G, [2, 1]).order == 16


def test_closure_is_a_subgroup():
    G = builtin("S4")
    for seed in itertools.combinations(range(1, G.n), 2):
        H = closure(G, seed)
        m = set(H.members)
        assert all(int(G.table[a, b]) in m for a in m for b in m)
        assert G.n % H.order == 0


def test_center_matches_naive():
    for G in (builtin("Q8"), builtin("H16"), dihedral(6), builtin("S4"), family_a(1, 1)):
        assert set(center(G).members) == naive_center(G)


def test_derived_and_frattini():
    Q = builtin("Q8")
    assert derived_subgroup(Q).order == 2
    assert frattini_pgroup(Q) == center(Q)
    assert derived_subgroup(builtin("S4")).order == 12
    assert derived_subgroup(builtin("A4")).order == 4
    with pytest.raises(NotPGroup):
        frattini_pgroup(builtin("A4"))


def test_nilpotency_class():
    assert nilpotency_class(cyclic(6)) == 1
    assert nilpotency_class(builtin("Q8")) == 2
    assert nilpotency_class(dihedral(8)) == 3
    assert nilpotency_class(builtin("S4")) is None
    assert lower_central_series(dihedral(8))[-1].order == 1


def test_sylow_and_core():
    S4 = builtin("S4")
    assert sylow(S4, 2).order == 8
    assert sylow(S4, 3).order == 3
    assert o_p(S4, 2).order == 4
    assert o_p(S4, 3).order == 1
    A = family_a(1, 0)  # Dic(Z6), normal Sylow 3
    assert o_p(A, 3).order == 3


def test_centralizer_normalizer():
    D = dihedral(4)
    r = 2
    assert centralizer(D, [r]).order == 4
    H = closure(D, [r])
    assert normalizer(D, H).order == 8
    assert H.is_normal()
    refl = closure(D, [1])
    assert not refl.is_normal()
    assert normalizer(D, refl).order == 4


def test_special_reports():
    assert is_special_2group(builtin("Q8")).verdict
    assert is_special_2group(elem_abelian(2, 3)).verdict
    assert not is_special_2group(builtin("H16")).verdict
    assert not is_special_2group(cyclic(4)).verdict
    with pytest.raises(NotPGroup):
        is_special_2group(cyclic(6))


def test_order_profile_and_exponent():
    assert order_profile(builtin("Q8")) == {1: 1, 2: 1, 4: 6}
    assert exponent(direct_product(cyclic(4), cyclic(6))) == 12
    assert OrderProfile.from_orders([1, 2, 2]) == {1: 1, 2: 2}
    assert omega1(builtin("Q8")).order == 2


def test_subgroup_as_group_and_lagrange():
    G = builtin("S4")
    H = sylow(G, 2)
    Hg = H.as_group()
    assert Hg.n == 8 and order_profile(Hg) == order_profile(H)
    with pytest.raises(NotAGroup):
        Subgroup(G, (0, 1, 2, 3, 4))


def test_prime_power_base():
    assert prime_power_base(64) == 2
    assert prime_power_base(27) == 3
    assert prime_power_base(12) is None
    assert prime_power_base(1) is None


def test_sampled_associativity_catches_bad_large_table():
    G = cyclic(600)
    T = np.array(G.table)
    # swap two entries in many rows so rows stay permutations but associativity breaks
    T[1:300, [5, 6]] = T[1:300, [6, 5]]
    with pytest.raises(NotAGroup):
        FiniteGroup.build(T)


def test_tiny_tables():
    assert group_from_table(np.array([[0]])).n == 1
    # identity sits at index 1 here; after relabelling this is Z2
    G = group_from_table(np.array([[1, 0], [0, 1]]))
    assert G.n == 2 and order_profile(G) == {1: 1, 2: 1}
    assert closure(cyclic(6), []).members == (0,)
