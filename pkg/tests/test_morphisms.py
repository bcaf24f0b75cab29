from __future__ import annotations

import itertools

import numpy as np
import pytest
from corpus import reference

from icayley.constructors import (
    builtin,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    distinguished_automorphism,
    elem_abelian,
    u_group,
    w_group,
)
from icayley.errors import BudgetExceeded, NotAHomomorphism, NotBijective, NotPGroup, OrderMismatch, SizeCeilingError
from icayley.group import center, closure, omega1
from icayley.morphisms import (
    CANONICAL,
    AutomorphismMap,
    automorphism_from_images,
    automorphism_group,
    check_fpf_identities,
    find_isomorphism,
    find_order3_fpf,
    fix,
    hom_from_images,
    identify_allowed,
    is_fixed_point_free,
    isomorphic_bruteforce,
    minimal_generating_set,
    verify_frobenius,
    word_tree,
)


def brute_aut_count(G) -> int:
    """Count bijections fixing 0 that preserve the table (tiny groups only)."""
    T = G.table
    count = 0
    for rest in itertools.permutations(range(1, G.n)):
        p = np.array((0,) + rest)
        if np.array_equal(p[T], T[p[:, None], p[None, :]]):
            count += 1
    return count


@pytest.mark.parametrize("G", [cyclic(5), cyclic(6), elem_abelian(2, 2), dihedral(3), builtin("Q8"), dihedral(4),
                               direct_product(cyclic(2), cyclic(4))])
def test_aut_count_matches_bruteforce(G):
    assert len(automorphism_group(G)) == brute_aut_count(G)


def test_known_aut_orders():
    # |GL(3,2)|, Aut(A4) = S4, Aut(S4) = S4, Euler phi(16)
    assert len(automorphism_group(elem_abelian(2, 3))) == 168
    assert len(automorphism_group(builtin("A4"))) == 24
    assert len(automorphism_group(builtin("S4"))) == 24
    assert len(automorphism_group(cyclic(16))) == 8


def test_aut_group_closed():
    auts = automorphism_group(builtin("H16"))
    s = set(auts)
    assert AutomorphismMap.identity(builtin("H16")) in s
    for a in auts[::5]:
        assert a.inverse() in s
        for b in auts[::7]:
            assert a.compose(b) in s


def test_automorphism_maps_are_multiplicative():
    G = builtin("H32star")
    T = G.table
    for a in automorphism_group(G)[::17]:
        p = a.perm
        assert np.array_equal(p[T], T[p[:, None], p[None, :]])


def test_hom_examples():
    Z4 = cyclic(4)
    inv = automorphism_from_images(Z4, [1], [3])
    assert inv.order == 2
    with pytest.raises(NotBijective):
        automorphism_from_images(Z4, [1], [2])
    Q = builtin("Q8")
    i, j = Q.gens[:2]
    assert automorphism_from_images(Q, [i, j], [j, i]).order == 2


def test_non_homomorphism_has_witness():
    Z4, Z2 = cyclic(4), cyclic(2)
    with pytest.raises(NotAHomomorphism) as exc:
        hom_from_images(dihedral(3), [1, 2], Z4, [2, 1])
    a, b = exc.value.witness
    assert 0 <= a < 6 and 0 <= b < 6
    h = hom_from_images(Z4, [1], Z2, [1])
    assert h.kernel().order == 2 and not h.is_injective()


def test_word_tree_reconstructs_elements():
    G = builtin("S4")
    gens = minimal_generating_set(G)
    order, parent, genpos = word_tree(G, gens)
    assert sorted(order) == list(range(G.n))
    for v in order[1:]:
        assert G.mul(int(parent[v]), gens[genpos[v]]) == v


def test_minimal_generating_set_sizes():
    assert len(minimal_generating_set(elem_abelian(2, 4))) == 4
    assert len(minimal_generating_set(builtin("Q8"))) == 2
    assert closure(builtin("H64"), minimal_generating_set(builtin("H64"))).order == 64


def test_budget_exceeded_carries_partial():
    with pytest.raises(BudgetExceeded) as exc:
        automorphism_group(elem_abelian(2, 3), budget=20)
    assert exc.value.partial >= 0


def test_aut_ceiling():
    with pytest.raises(SizeCeilingError):
        automorphism_group(builtin("K1024"))


def test_fpf_examples():
    V = elem_abelian(2, 2)
    phi = find_order3_fpf(V)
    assert phi is not None and phi.order == 3 and is_fixed_point_free(phi)
    assert verify_frobenius(V, phi, 3)
    Z4 = cyclic(4)
    rep = verify_frobenius(Z4, AutomorphismMap(Z4, Z4.inv), 2)
    assert not rep and rep.offending == ((1, 2),)
    with pytest.raises(OrderMismatch):
        verify_frobenius(V, phi, 2)
    with pytest.raises(NotPGroup):
        find_order3_fpf(cyclic(6))
    assert find_order3_fpf(cyclic(4)) is None


def test_fix_examples():
    G = builtin("H16")
    assert fix(AutomorphismMap.identity(G)).order == G.n
    U = u_group(2)
    assert fix(distinguished_automorphism(U)) == center(U)
    assert center(U).order == 8


def test_w2_has_no_fpf_order3_by_full_enumeration():
    W = w_group(2)
    auts = automorphism_group(W, budget=10**7, override_size=True)
    order3 = [a for a in auts if a.order == 3]
    assert len(order3) > 0
    assert not any(is_fixed_point_free(a) for a in order3)
    assert find_order3_fpf(W) is None


def test_fpf_identities_on_all_small_cases():
    for G in (elem_abelian(2, 2), elem_abelian(2, 4), builtin("Q8"), cyclic(9), elem_abelian(3, 2)):
        for a in automorphism_group(G):
            if a.order in (2, 3) and is_fixed_point_free(a):
                assert check_fpf_identities(a) is None
                if a.order == 2:
                    assert G.is_abelian


def test_fpf_identity_check_reports_violation():
    G = cyclic(7)
    a = automorphism_from_images(G, [1], [2])  # order 3, fpf, but x*2x*4x = 7x = 1 holds in Z7
    assert check_fpf_identities(a) is None
    Q = builtin("Q8")
    i, j = Q.gens[:2]
    ij = Q.mul(i, j)
    rot = automorphism_from_images(Q, [i, j], [j, ij])
    assert rot.order == 3 and not is_fixed_point_free(rot)
    assert check_fpf_identities(rot) is not None


def test_frobenius_dichotomy():
    # fixed-point-free action: <u, u^z> is Z4 x Z4; action fixing Omega1: Q8
    G = builtin("H64")
    phi = find_order3_fpf(G)
    z4z4 = direct_product(cyclic(4), cyclic(4)).fingerprint()
    for u in range(G.n):
        if G.ord[u] == 4:
            assert closure(G, (u, phi(u))).fingerprint() == z4z4
    U = u_group(2)
    psi = distinguished_automorphism(U)
    assert fix(psi) == omega1(U)
    q8 = builtin("Q8").fingerprint()
    for u in range(U.n):
        if U.ord[u] == 4:
            assert closure(U, (u, psi(u))).fingerprint() == q8


def test_isomorphism_examples():
    assert isomorphic_bruteforce(dicyclic(cyclic(4)), builtin("Q8"))
    assert not isomorphic_bruteforce(dihedral(4), builtin("Q8"))
    assert isomorphic_bruteforce(cyclic(6), direct_product(cyclic(2), cyclic(3)))
    iso = find_isomorphism(cyclic(6), direct_product(cyclic(2), cyclic(3)))
    assert iso is not None and len(set(iso.tolist())) == 6


def test_identify_allowed_examples():
    A4 = builtin("A4")
    assert identify_allowed(closure(A4, [A4.involutions[0]])).tag == "Z2"
    three = next(v for v in range(A4.n) if A4.ord[v] == 3)
    assert identify_allowed(closure(A4, [A4.involutions[0], three])).tag == "A4"
    D8 = dihedral(4)
    assert identify_allowed(closure(D8, [1, 2])).tag == "OTHER"


def test_identify_allowed_matches_bruteforce_on_order_up_to_16():
    from corpus import equivalence_corpus

    refs = {tag: reference(tag) for tag in CANONICAL}
    for _, G in equivalence_corpus():
        if G.n > 16:
            continue
        tag = identify_allowed(G).tag
        for t, R in refs.items():
            assert (tag == t) == (R.n == G.n and isomorphic_bruteforce(G, R))


def test_order3_subgroups_of_aut_h64_are_conjugate():
    G = builtin("H64")
    auts = automorphism_group(G, budget=10**8, override_size=True)
    assert len(auts) == 15360

    def subgroup(perm):
        return frozenset((perm.tobytes(), perm[perm].tobytes()))

    subs = {subgroup(a.perm) for a in auts if a.order == 3}
    assert len(subs) == 16
    rep = next(a for a in auts if a.order == 3)
    assert is_fixed_point_free(rep)
    orbit = {subgroup(g.perm[rep.perm[g.inverse().perm]]) for g in auts}
    assert orbit == subs
