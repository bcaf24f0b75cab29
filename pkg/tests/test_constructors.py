from __future__ import annotations

import numpy as np
import pytest

from icayley.constructors import (
    CTPresentation,
    builtin,
    central_type_group,
    cyclic,
    dicyclic,
    dihedral,
    direct_power,
    direct_product,
    distinguished_automorphism,
    elem_abelian,
    family_a,
    family_b,
    family_c,
    family_d,
    perm_from_cycles,
    perm_group,
    semidirect_product,
    su3_sylow2,
    u_group,
    w_group,
)
from icayley.errors import (
    BadAction,
    BadData,
    BadUGroup,
    NoUniqueInvolution,
    NotAbelian,
    OrderMismatch,
    SizeCeilingError,
    UnknownName,
)
from icayley.fields import GF2kField
from icayley.group import center, exponent, is_special_2group, omega1, order_profile
from icayley.morphisms import AutomorphismMap, automorphism_from_images, fix, isomorphic_bruteforce


def test_basic_orders():
    assert cyclic(1).n == 1
    assert dihedral(1).n == 2
    assert elem_abelian(3, 2).n == 9
    assert direct_power(cyclic(2), 0).n == 1
    with pytest.raises(BadData):
        cyclic(0)
    with pytest.raises(BadData):
        elem_abelian(4, 2)


def test_direct_product_indexing():
    A, B = cyclic(3), cyclic(4)
    G = direct_product(A, B)
    for a1 in range(3):
        for b1 in range(4):
            for a2 in range(3):
                for b2 in range(4):
                    want = ((a1 + a2) % 3) * 4 + (b1 + b2) % 4
                    assert G.mul(a1 * 4 + b1, a2 * 4 + b2) == want


def test_dihedral_relations():
    D = dihedral(5)
    r, s = 2, 1
    assert D.ord[r] == 5 and D.ord[s] == 2
    assert D.conj(r, s) == int(D.inv[r])


def test_perm_group_orders():
    assert builtin("A4").n == 12
    assert builtin("S4").n == 24
    S3 = perm_group([perm_from_cycles([(0, 1)], 3), perm_from_cycles([(0, 1, 2)], 3)])
    assert isomorphic_bruteforce(S3, dihedral(3))
    with pytest.raises(BadData):
        perm_from_cycles([(0, 1), (1, 2)], 3)


def test_dicyclic():
    assert isomorphic_bruteforce(dicyclic(cyclic(4)), builtin("Q8"))
    D = dicyclic(cyclic(6))
    assert order_profile(D) == {1: 1, 2: 1, 3: 2, 4: 6, 6: 2}
    with pytest.raises(NotAbelian):
        dicyclic(dihedral(3))
    with pytest.raises(NoUniqueInvolution):
        dicyclic(elem_abelian(2, 2))


def test_semidirect_checks_action_order():
    Z7 = cyclic(7)
    alpha = automorphism_from_images(Z7, [1], [2])  # order 3
    G = semidirect_product(Z7, alpha, 3)
    assert G.n == 21 and not G.is_abelian
    with pytest.raises(OrderMismatch):
        semidirect_product(Z7, alpha, 2)


# central-type groups, checked against independent constructions and relations

def test_q8_h16_h32_heis_match_independent_models():
    assert isomorphic_bruteforce(builtin("Q8"), dicyclic(cyclic(4)))
    Z4 = cyclic(4)
    assert isomorphic_bruteforce(builtin("H16"), semidirect_product(Z4, AutomorphismMap(Z4, Z4.inv), 4))
    K = direct_product(cyclic(4), cyclic(2))  # a = index 2, c = index 1
    beta = automorphism_from_images(K, [2, 1], [3, 1])  # a -> ac, c -> c
    assert isomorphic_bruteforce(builtin("H32"), semidirect_product(K, beta, 4))
    E = elem_abelian(3, 2)  # y = index 3, z = index 1
    gamma = automorphism_from_images(E, [3, 1], [4, 1])  # y -> yz
    assert isomorphic_bruteforce(builtin("Heis27"), semidirect_product(E, gamma, 3))


def _gen(G, name):
    return G.labels.index(name)


def test_h32star_relations():
    G = builtin("H32star")
    a, b, c = (_gen(G, x) for x in "abc")
    sq = lambda x: G.mul(x, x)
    assert G.n == 32 and exponent(G) == 4
    assert sq(c) == sq(a)
    assert G.mul(a, b) == G.mul(b, a)
    assert G.conj(a, c) == G.mul(int(G.inv[a]), sq(b))
    assert G.conj(b, c) == int(G.inv[b])


def test_h64_relations_and_structure():
    G = builtin("H64")
    a, b, c, d = (_gen(G, x) for x in "abcd")
    sq = lambda x: G.mul(x, x)
    assert sq(c) == G.mul(sq(a), sq(b))
    assert G.mul(a, b) == G.mul(b, a)
    assert G.conj(a, c) == int(G.inv[a])
    assert G.conj(b, c) == G.mul(sq(a), int(G.inv[b]))
    assert sq(d) == sq(a)
    assert G.conj(a, d) == G.mul(int(G.inv[a]), sq(b))
    assert G.conj(b, d) == int(G.inv[b])
    assert G.mul(c, d) == G.mul(d, c)
    assert is_special_2group(G).verdict and center(G).order == 4


def test_k256_relations_and_action():
    G = builtin("K256")
    a, b, c, d = (_gen(G, x) for x in "abcd")
    pw = G.power
    assert G.conj(a, b) == pw(a, 3) and G.conj(c, d) == pw(c, 3)
    assert G.commutator(a, c) == 0 == G.commutator(b, d)
    a2c2 = G.mul(pw(a, 2), pw(c, 2))
    assert G.commutator(a, d) == a2c2 == G.commutator(b, c)
    z = distinguished_automorphism(G)
    assert (z(a), z(c), z(b), z(d)) == (c, int(G.inv[G.mul(a, c)]), d, int(G.inv[G.mul(b, d)]))
    assert z.order == 3 and fix(z).order == 1


def test_k1024_relations_and_action():
    G = builtin("K1024")
    a, b, c, d, u, v = (_gen(G, x) for x in "abcduv")
    assert G.n == 1024
    assert G.commutator(a, b) == u and G.commutator(c, d) == v
    assert G.commutator(a, c) == 0 == G.commutator(b, d)
    assert G.commutator(a, d) == G.mul(u, v) == G.commutator(b, c)
    for x in (a, b, c, d, u, v):
        assert G.commutator(u, x) == 0 == G.commutator(v, x)
    z = distinguished_automorphism(G)
    assert z(u) == v and z(v) == G.mul(u, v)
    assert omega1(G) == center(G) and center(G).order == 64


def test_u_group_relations():
    for n in (1, 2, 3):
        U = u_group(n)
        gens = U.gens[: 2 * n]
        a = gens[0::2]
        b = gens[1::2]
        for i in range(n):
            assert U.ord[a[i]] == 4 and U.power(a[i], 2) == U.power(b[i], 2)
            assert U.conj(a[i], b[i]) == int(U.inv[a[i]])
        for i in range(n - 1):
            c = U.commutator(a[i], b[i + 1])
            assert U.ord[c] == 2 and c == U.commutator(a[i + 1], b[i])
            assert U.commutator(a[i], a[i + 1]) == 0 == U.commutator(b[i], b[i + 1])
        phi = distinguished_automorphism(U)
        for i in range(n):
            assert phi(a[i]) == b[i]
            assert phi(b[i]) == U.mul(b[i], int(U.inv[a[i]]))


def test_su3_against_matrix_model():
    S = su3_sylow2(1)
    A, B, F = S._cache["su3_coords"]
    bar = lambda x: F.pow(x, 8)

    def matmul(m1, m2):
        out = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                acc = 0
                for k in range(3):
                    acc ^= F.mul(m1[i][k], m2[k][j])
                out[i][j] = acc
        return out

    def mat(i):
        a, b = int(A[i]), int(B[i])
        return [[1, a, b], [0, 1, bar(a)], [0, 0, 1]]

    rng = np.random.default_rng(5)
    for i, j in rng.integers(0, S.n, size=(300, 2)):
        assert matmul(mat(i), mat(j)) == mat(S.mul(int(i), int(j)))
    lam = F.cube_root_of_unity()
    li = F.inverse(lam)
    zinv, zmat = [[li, 0, 0], [0, 1, 0], [0, 0, li]], [[lam, 0, 0], [0, 1, 0], [0, 0, lam]]
    z = distinguished_automorphism(S)
    for i in range(0, S.n, 7):
        assert matmul(matmul(zinv, mat(i)), zmat) == mat(z(i))


def test_su3_size_gate():
    with pytest.raises(SizeCeilingError):
        su3_sylow2(2)


def test_builtin_names():
    assert builtin("U(2)").n == 128
    assert builtin("W(2)").n == 64
    with pytest.raises(UnknownName):
        builtin("M11")


def test_w_group_structure():
    W = w_group(2)
    z = 1
    assert W.ord[z] == 4
    for w in range(0, W.n, 4):
        assert W.conj(w, z) == int(W.inv[w])


def test_family_orders():
    assert family_a(1, 0).n == 12
    assert family_a(2, 3).n == 4 * 9 * 8
    assert family_b(None, None, 1).fingerprint() == builtin("A4").fingerprint()
    assert family_b(cyclic(3), None, 2).n == 3 * 3 * 16
    assert family_c("H64").n == 192
    assert family_d("U(1)", 0).n == 24
    assert family_d("U(2)", 1).n == 768


def test_family_b_rejects_bad_inputs():
    with pytest.raises(BadUGroup):
        family_b(cyclic(9), None, 1)
    with pytest.raises(BadUGroup):
        family_b(cyclic(2), None, 1)
    Z3 = cyclic(3)
    with pytest.raises(BadAction):
        family_b(Z3, AutomorphismMap(Z3, Z3.inv), 1)
    with pytest.raises(BadData):
        family_b(Z3, None, 0)


def test_family_name_errors():
    with pytest.raises(UnknownName):
        family_c("K512")
    with pytest.raises(UnknownName):
        family_d("H64", 0)


def test_ct_validation():
    with pytest.raises(BadData):
        CTPresentation(4, 1, 1, ((1,),))
    with pytest.raises(BadData):
        CTPresentation(2, 2, 1, ((1,),))
    with pytest.raises(BadData):
        CTPresentation(2, 2, 1, ((1,), (1,)), {(1, 0): (1,)})
    with pytest.raises(BadData):
        CTPresentation(2, 1, 1, ((2,),))


def test_ct_paranoid_mode():
    from icayley.constructors import ct_k256

    G = central_type_group(ct_k256(), paranoid=True)
    assert G.n == 256


def test_gf64_default_modulus_used():
    S = su3_sylow2(1)
    assert S.meta["gf2k"] == GF2kField.default(6).describe()
