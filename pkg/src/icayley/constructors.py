"""Group builders: generic combinators, class-2 central-type groups, and the
named groups and families (a)-(d).

Index conventions are fixed so tables are reproducible: tuples are indexed
lexicographically (first coordinate most significant) and the identity is
always index 0.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    BadAction,
    BadData,
    BadUGroup,
    ClosureTooLarge,
    FixedPointMismatch,
    NoFpfFound,
    NoUniqueInvolution,
    NotAbelian,
    OrderMismatch,
    SizeCeilingError,
    UnknownName,
)
from .fields import GF2kField
from .group import (
    SIZE_CEILING,
    FiniteGroup,
    center,
    closure,
    exponent,
    is_prime,
    omega1,
    prime_power_base,
)
from .morphisms import (
    CANONICAL,
    AutomorphismMap,
    automorphism_from_images,
    find_order3_fpf,
    fix,
    verify_frobenius,
)


def _ceiling(n: int, what: str) -> None:
    if n > SIZE_CEILING:
        raise SizeCeilingError(f"{what}: order {n} exceeds ceiling {SIZE_CEILING}")


def distinguished_automorphism(G: FiniteGroup) -> AutomorphismMap:
    """The automorphism a builder attached to G (SU3 z, U(n) phi, kernel actions)."""
    try:
        return G._cache["distinguished"]
    except KeyError:
        raise UnknownName("group carries no distinguished automorphism") from None


def _attach(G: FiniteGroup, phi: AutomorphismMap) -> FiniteGroup:
    G._cache["distinguished"] = phi
    return G


# generic combinators ------------------------------------------------------------

def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise BadData(f"cyclic({n}): n must be >= 1")
    _ceiling(n, "cyclic")
    ar = np.arange(n)
    table = (ar[:, None] + ar[None, :]) % n
    return FiniteGroup.build(table, gens=[1] if n > 1 else [], meta={"recipe": f"cyclic({n})"})


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n; element r^i s^e has index 2i + e."""
    if n < 1:
        raise BadData(f"dihedral({n}): n must be >= 1")
    _ceiling(2 * n, "dihedral")
    i = np.arange(n).repeat(2)
    e = np.tile([0, 1], n)
    # (r^i s^e)(r^j s^f) = r^(i + (-1)^e j) s^(e+f)
    sign = 1 - 2 * e[:, None]
    ni = (i[:, None] + sign * i[None, :]) % n
    ne = (e[:, None] + e[None, :]) % 2
    gens = [2, 1] if n > 1 else [1]
    return FiniteGroup.build(2 * ni + ne, gens=gens, meta={"recipe": f"dihedral({n})"})


def elem_abelian(p: int, k: int) -> FiniteGroup:
    if not is_prime(p) or k < 0:
        raise BadData(f"elem_abelian({p}, {k}) needs p prime and k >= 0")
    N = p**k
    _ceiling(N, "elem_abelian")
    digits = _digits(N, [p] * k)
    w = p ** np.arange(k - 1, -1, -1) if k else np.zeros(0, dtype=np.int64)
    table = np.zeros((N, N), dtype=np.int64)
    for t in range(k):
        table += ((digits[:, t][:, None] + digits[:, t][None, :]) % p) * w[t]
    gens = [int(x) for x in w]
    return FiniteGroup.build(table, gens=gens, meta={"recipe": f"ea({p},{k})"})


def _digits(N: int, radices: Sequence[int]) -> np.ndarray:
    """Row x holds the mixed-radix digits of x, most significant first."""
    out = np.zeros((N, len(radices)), dtype=np.int64)
    rest = np.arange(N)
    for t in range(len(radices) - 1, -1, -1):
        out[:, t] = rest % radices[t]
        rest //= radices[t]
    return out


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """A x B with (a, b) at index a*|B| + b."""
    N = A.n * B.n
    _ceiling(N, "direct_product")
    TA = A.table.astype(np.int64)
    TB = B.table.astype(np.int64)
    table = (TA[:, None, :, None] * B.n + TB[None, :, None, :]).reshape(N, N)
    gens = [g * B.n for g in A.gens] + list(B.gens)
    labels = None
    if A.labels is not None and B.labels is not None:
        labels = [f"({a},{b})" for a in A.labels for b in B.labels]
    return FiniteGroup.build(table, gens=gens, labels=labels)


def direct_power(A: FiniteGroup, k: int) -> FiniteGroup:
    """A^k expanded left to right: ((A x A) x A) ..."""
    if k < 0:
        raise BadData("direct power exponent must be >= 0")
    if k == 0:
        return cyclic(1)
    out = A
    for _ in range(k - 1):
        out = direct_product(out, A)
    return out


def perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> tuple[int, ...]:
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            img[a] = b
    if sorted(img) != list(range(degree)):
        raise BadData(f"cycles {cycles} do not define a permutation")
    return tuple(img)


def perm_group(gens: Sequence[Sequence[int]]) -> FiniteGroup:
    """Closure of permutations given as image tuples; p*q applies p first."""
    if not gens:
        return cyclic(1)
    degree = max(len(g) for g in gens)
    pg = []
    for g in gens:
        g = tuple(g) + tuple(range(len(g), degree))
        if sorted(g) != list(range(degree)):
            raise BadData(f"{g} is not a permutation of 0..{degree - 1}")
        pg.append(g)
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    head = 0
    while head < len(elems):
        p = elems[head]
        head += 1
        for g in pg:
            q = tuple(g[x] for x in p)
            if q not in index:
                if len(elems) >= SIZE_CEILING:
                    raise ClosureTooLarge(f"permutation closure exceeds {SIZE_CEILING}")
                index[q] = len(elems)
                elems.append(q)
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(elems):
        for j, q in enumerate(elems):
            table[i, j] = index[tuple(q[x] for x in p)]
    gen_idx = [index[g] for g in pg if g != ident]
    labels = [_cycle_label(p) for p in elems]
    return FiniteGroup.build(table, gens=gen_idx, labels=labels)


def _cycle_label(p: Sequence[int]) -> str:
    seen = set()
    out = []
    for s in range(len(p)):
        if s in seen or p[s] == s:
            continue
        cyc = [s]
        seen.add(s)
        x = p[s]
        while x != s:
            cyc.append(x)
            seen.add(x)
            x = p[x]
        out.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def dicyclic(A: FiniteGroup) -> FiniteGroup:
    """Dic(A) = <A, x | x^2 = t, a^x = a^-1>; (a, e) at index 2a + e."""
    if not A.is_abelian:
        raise NotAbelian("dicyclic needs an abelian group")
    if A.n <= 2:
        raise BadData("dicyclic needs |A| > 2")
    invs = A.involutions
    if len(invs) != 1:
        raise NoUniqueInvolution(f"A has {len(invs)} involutions, need exactly one")
    t = invs[0]
    _ceiling(2 * A.n, "dicyclic")
    T = A.table.astype(np.int64)
    inv = A.inv.astype(np.int64)
    ab = T
    ab_inv = T[:, inv]  # a * b^-1
    ab_inv_t = T[ab_inv, t]
    N = 2 * A.n
    table = np.empty((A.n, 2, A.n, 2), dtype=np.int64)
    table[:, 0, :, 0] = 2 * ab
    table[:, 0, :, 1] = 2 * ab + 1
    table[:, 1, :, 0] = 2 * ab_inv + 1
    table[:, 1, :, 1] = 2 * ab_inv_t
    gens = [2 * g for g in A.gens] + [1]
    return FiniteGroup.build(table.reshape(N, N), gens=gens)


def semidirect_product(K: FiniteGroup, alpha: AutomorphismMap, m: int) -> FiniteGroup:
    """K x| <z> with z of order m; (k, i) at index k*m + i and
    (k, i)(l, j) = (k * alpha^i(l), i + j mod m)."""
    if alpha.group is not K:
        raise BadData("automorphism belongs to a different group")
    if m < 1:
        raise BadData("m must be >= 1")
    if not alpha.power(m).is_identity():
        raise OrderMismatch(f"alpha^{m} is not the identity")
    N = K.n * m
    _ceiling(N, "semidirect_product")
    KT = K.table.astype(np.int64)
    pows = [np.arange(K.n)]
    for _ in range(1, m):
        pows.append(alpha.perm[pows[-1]].astype(np.int64))
    stack = np.stack([KT[:, ap] for ap in pows])  # [i, k, l] = k * alpha^i(l)
    ij = (np.arange(m)[:, None] + np.arange(m)[None, :]) % m
    table = stack.transpose(1, 0, 2)[:, :, :, None] * m + ij[None, :, None, :]
    gens = [g * m for g in K.gens] + ([1] if m > 1 else [])
    return FiniteGroup.build(table.reshape(N, N), gens=gens)


def inversion_automorphism(A: FiniteGroup) -> AutomorphismMap:
    if not A.is_abelian:
        raise NotAbelian("inversion is an automorphism only of abelian groups")
    return AutomorphismMap(A, A.inv)


# central-type (class 2) presentations ------------------------------------------------

@dataclass(frozen=True)
class CTPresentation:
    """Class-2 p-group data: x_1..x_m non-central, z_1..z_s central of order p.

    ``sq[i]`` is the exponent vector of x_i^p over the z's; ``comm[(i, j)]``
    (0-based, i < j) is the vector c with x_j x_i = x_i x_j z^c.
    """

    p: int
    m: int
    s: int
    sq: tuple[tuple[int, ...], ...]
    comm: Mapping[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    x_names: tuple[str, ...] | None = None
    z_names: tuple[str, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise BadData(f"p={self.p} is not prime")
        if self.m < 0 or self.s < 0:
            raise BadData("m and s must be non-negative")
        if len(self.sq) != self.m or any(len(v) != self.s for v in self.sq):
            raise BadData("sq must hold m vectors of length s")
        for (i, j), v in self.comm.items():
            if not (0 <= i < j < self.m) or len(v) != self.s:
                raise BadData(f"bad commutator entry {(i, j)}: {v}")
        for v in list(self.sq) + list(self.comm.values()):
            if any(not (0 <= c < self.p) for c in v):
                raise BadData(f"vector {v} has entries outside Z_{self.p}")
        if self.x_names is not None and len(self.x_names) != self.m:
            raise BadData("x_names must have m entries")
        if self.z_names is not None and len(self.z_names) != self.s:
            raise BadData("z_names must have s entries")

    @property
    def order(self) -> int:
        return self.p ** (self.m + self.s)

    def comm_vec(self, i: int, j: int) -> tuple[int, ...]:
        return tuple(self.comm.get((i, j), (0,) * self.s))


def central_type_group(ct: CTPresentation, *, paranoid: bool = False) -> FiniteGroup:
    """Normal forms x^e z^v multiplied in closed form.

    (e, v)(f, w) = (e + f, v + w + sum_{i<j} e_j f_i comm[i][j] + sum_i carry_i sq[i])
    with carry_i = (e_i + f_i) // p, all mod p.
    """
    p, m, s = ct.p, ct.m, ct.s
    N = ct.order
    _ceiling(N, "central_type_group")
    dig = _digits(N, [p] * (m + s))
    E, V = dig[:, :m], dig[:, m:]
    w = p ** np.arange(m + s - 1, -1, -1)
    table = np.zeros((N, N), dtype=np.int64)
    carries = []
    for i in range(m):
        es = E[:, i][:, None] + E[:, i][None, :]
        table += (es % p) * w[i]
        carries.append(es >= p)
    for t in range(s):
        M = np.zeros((m, m), dtype=np.int64)
        for (i, j), vec in ct.comm.items():
            M[j, i] = vec[t]
        val = V[:, t][:, None] + V[:, t][None, :] + E @ M @ E.T
        for i in range(m):
            if ct.sq[i][t]:
                val = val + carries[i] * ct.sq[i][t]
        table += (val % p) * w[m + t]
    x_gens = [int(w[i]) for i in range(m)]
    gens = list(x_gens)
    span = _span_of(table, gens)
    for t in range(s):
        zt = int(w[m + t])
        if zt not in span:
            gens.append(zt)
            span = _span_of(table, gens)
    labels = _ct_labels(ct, dig)
    G = FiniteGroup.build(table, gens=gens, labels=labels)
    if paranoid:
        rng = np.random.default_rng(0xC7)
        a, b, c = rng.integers(0, N, size=(3, 100_000))
        T = G.table
        if (T[T[a, b], c] != T[a, T[b, c]]).any():
            raise BadData("central-type table failed the associativity re-check")
    return G


def _span_of(table: np.ndarray, gens: Sequence[int]) -> set[int]:
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                v = int(table[u, g])
                if v not in members:
                    members.add(v)
                    nxt.append(v)
        frontier = nxt
    return members


def _ct_labels(ct: CTPresentation, dig: np.ndarray) -> list[str] | None:
    if ct.x_names is None:
        return None
    names = list(ct.x_names) + list(ct.z_names or [f"z{t + 1}" for t in range(ct.s)])
    out = []
    for row in dig:
        parts = [nm if e == 1 else f"{nm}^{e}" for nm, e in zip(names, row) if e]
        out.append(".".join(parts) or "1")
    return out


def _unit(s: int, *hot: int) -> tuple[int, ...]:
    v = [0] * s
    for h in hot:
        v[h] ^= 1
    return tuple(v)


def ct_q8() -> CTPresentation:
    return CTPresentation(2, 2, 1, ((1,), (1,)), {(0, 1): (1,)}, ("i", "j"), ("-1",))


def ct_h16() -> CTPresentation:
    # a^4 = b^4 = 1, a^b = a^-1
    return CTPresentation(2, 2, 2, (_unit(2, 0), _unit(2, 1)), {(0, 1): _unit(2, 0)},
                          ("a", "b"), ("a2", "b2"))


def ct_h32() -> CTPresentation:
    # a^4 = b^4 = c^2 = 1, [a, b] = c central
    return CTPresentation(2, 2, 3, (_unit(3, 0), _unit(3, 1)), {(0, 1): _unit(3, 2)},
                          ("a", "b"), ("a2", "b2", "c"))


def ct_h32star() -> CTPresentation:
    # c^2 = a^2, [a, b] = 1, a^c = a^-1 b^2, b^c = b^-1
    return CTPresentation(2, 3, 2, (_unit(2, 0), _unit(2, 1), _unit(2, 0)),
                          {(0, 2): _unit(2, 0, 1), (1, 2): _unit(2, 1)},
                          ("a", "b", "c"), ("a2", "b2"))


def ct_h64() -> CTPresentation:
    # c^2 = a^2 b^2, a^c = a^-1, b^c = a^2 b^-1, d^2 = a^2, a^d = a^-1 b^2, b^d = b^-1, [c, d] = 1
    return CTPresentation(
        2, 4, 2, (_unit(2, 0), _unit(2, 1), _unit(2, 0, 1), _unit(2, 0)),
        {(0, 2): _unit(2, 0), (1, 2): _unit(2, 0, 1), (0, 3): _unit(2, 0, 1), (1, 3): _unit(2, 1)},
        ("a", "b", "c", "d"), ("a2", "b2"),
    )


def ct_k256() -> CTPresentation:
    # a^b = a^3, c^d = c^3, [a, c] = [b, d] = 1, [a, d] = [b, c] = a^2 c^2
    return CTPresentation(
        2, 4, 4, tuple(_unit(4, i) for i in range(4)),
        {(0, 1): _unit(4, 0), (2, 3): _unit(4, 2), (0, 3): _unit(4, 0, 2), (1, 2): _unit(4, 0, 2)},
        ("a", "b", "c", "d"), ("a2", "b2", "c2", "d2"),
    )


def ct_k1024() -> CTPresentation:
    # [a, b] = u, [c, d] = v, [a, c] = [b, d] = 1, [a, d] = [b, c] = uv; u, v central
    return CTPresentation(
        2, 4, 6, tuple(_unit(6, i) for i in range(4)),
        {(0, 1): _unit(6, 4), (2, 3): _unit(6, 5), (0, 3): _unit(6, 4, 5), (1, 2): _unit(6, 4, 5)},
        ("a", "b", "c", "d"), ("a2", "b2", "c2", "d2", "u", "v"),
    )


def ct_u(n: int) -> CTPresentation:
    """U(n): generators a_i, b_i (ordered a_1, b_1, a_2, b_2, ...), central a_i^2 and c_j."""
    if n < 1:
        raise BadData("U(n) needs n >= 1")
    m, s = 2 * n, 2 * n - 1
    sq = []
    for i in range(n):
        sq += [_unit(s, i), _unit(s, i)]  # a_i^2 = b_i^2
    comm = {}
    for i in range(n):
        comm[(2 * i, 2 * i + 1)] = _unit(s, i)  # a_i^{b_i} = a_i^-1
    for j in range(n - 1):
        c = _unit(s, n + j)
        comm[(2 * j, 2 * (j + 1) + 1)] = c   # [a_j, b_{j+1}] = c_j
        comm[(2 * j + 1, 2 * (j + 1))] = c   # [a_{j+1}, b_j] = c_j
    xn = tuple(f"{ab}{i + 1}" for i in range(n) for ab in "ab")
    zn = tuple([f"a{i + 1}^2" for i in range(n)] + [f"c{j + 1}" for j in range(n - 1)])
    return CTPresentation(2, m, s, tuple(sq), comm, xn, zn)


def ct_heis27() -> CTPresentation:
    return CTPresentation(3, 2, 1, ((0,), (0,)), {(0, 1): (1,)}, ("x", "y"), ("z",))


# named groups ------------------------------------------------------------------------

def u_group(n: int) -> FiniteGroup:
    """U(n) with its order-3 automorphism a_i -> b_i, b_i -> b_i a_i^-1 attached."""
    return _u_group(n)


@lru_cache(maxsize=None)
def _u_group(n: int) -> FiniteGroup:
    G = central_type_group(ct_u(n)).with_meta(recipe=f"u({n})")
    gens = list(G.gens[: 2 * n])
    images = []
    for i in range(n):
        a, b = gens[2 * i], gens[2 * i + 1]
        images += [b, G.mul(b, int(G.inv[a]))]
    return _attach(G, automorphism_from_images(G, gens, images))


def w_group(m: int) -> FiniteGroup:
    """(Z4)^m x| <z>, z of order 4 inverting every element of (Z4)^m."""
    if m < 1:
        raise BadData("W(m) needs m >= 1")
    W = direct_power(cyclic(4), m)
    return semidirect_product(W, inversion_automorphism(W), 4).with_meta(recipe=f"builtin(W({m}))")


def _kernel_with_action(ct: CTPresentation, recipe: str) -> FiniteGroup:
    G = central_type_group(ct).with_meta(recipe=recipe)
    a, b, c, d = G.gens[:4]
    ac, bd = G.mul(a, c), G.mul(b, d)
    images = [c, d, int(G.inv[ac]), int(G.inv[bd])]
    return _attach(G, automorphism_from_images(G, [a, b, c, d], images))


# Images of the H64 generators a, b, c, d under the first order-3 fixed-point-free
# automorphism found by find_order3_fpf (fills in on first use if cleared).
_H64_FPF_IMAGES: tuple[int, ...] | None = (51, 32, 13, 8)


def _h64_cache_file() -> Path | None:
    root = os.environ.get("ICAYLEY_CACHE_DIR")
    return Path(root) / "h64_fpf_images.txt" if root else None


def _h64_images_from_cache() -> tuple[int, ...] | None:
    path = _h64_cache_file()
    if path is None or not path.exists():
        return None
    return tuple(int(v) for v in path.read_text().split())


def _h64_images_to_cache(images: Sequence[int]) -> None:
    path = _h64_cache_file()
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(" ".join(map(str, images)) + "\n")


def h64_fpf() -> AutomorphismMap:
    G = builtin("H64")
    return distinguished_automorphism(G)


def _h64() -> FiniteGroup:
    global _H64_FPF_IMAGES
    G = central_type_group(ct_h64()).with_meta(recipe="builtin(H64)")
    gens = list(G.gens[:4])
    if _H64_FPF_IMAGES is None:
        _H64_FPF_IMAGES = _h64_images_from_cache()
    if _H64_FPF_IMAGES is None:
        phi = find_order3_fpf(G)
        if phi is None:
            raise NoFpfFound("H64 admits no order-3 fixed-point-free automorphism")
        _H64_FPF_IMAGES = tuple(phi(g) for g in gens)
        _h64_images_to_cache(_H64_FPF_IMAGES)
    return _attach(G, automorphism_from_images(G, gens, _H64_FPF_IMAGES))


_BUILTINS = {
    "Q8": lambda: central_type_group(ct_q8()),
    "H16": lambda: central_type_group(ct_h16()),
    "H32": lambda: central_type_group(ct_h32()),
    "H32star": lambda: central_type_group(ct_h32star()),
    "H64": _h64,
    "K256": lambda: _kernel_with_action(ct_k256(), "builtin(K256)"),
    "K1024": lambda: _kernel_with_action(ct_k1024(), "builtin(K1024)"),
    "Heis27": lambda: central_type_group(ct_heis27()),
    "A4": lambda: perm_group([perm_from_cycles([(0, 1), (2, 3)], 4), perm_from_cycles([(0, 1, 2)], 4)]),
    "S4": lambda: perm_group([perm_from_cycles([(0, 1)], 4), perm_from_cycles([(0, 1, 2, 3)], 4)]),
    "D8": lambda: dihedral(4),
    "D12": lambda: dihedral(6),
}
BUILTIN_NAMES = tuple(_BUILTINS) + ("U(n)", "W(m)")
_INDEXED = re.compile(r"^(U|W|SU3)\(?(\d+)\)?$")


def builtin(name: str) -> FiniteGroup:
    return _builtin(name.strip())


@lru_cache(maxsize=None)
def _builtin(name: str) -> FiniteGroup:
    mt = _INDEXED.match(name)
    if mt:
        kind, k = mt.group(1), int(mt.group(2))
        if kind == "U":
            return u_group(k)
        if kind == "W":
            return w_group(k)
        return su3_sylow2(k)
    try:
        G = _BUILTINS[name]()
    except KeyError:
        raise UnknownName(f"unknown builtin group {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None
    if "recipe" not in G.meta:
        G = G.with_meta(recipe=f"builtin({name})")
    return G


# SU(3, q) Sylow 2-subgroup ---------------------------------------------------------

def su3_sylow2(n: int, *, override_size: bool = False) -> FiniteGroup:
    """Pairs (a, b) in GF(q^2)^2, q = 2^(2n+1), with a*abar = b + bbar, where
    xbar = x^q; (a, b)(c, d) = (a + c, b + d + a*cbar).  The automorphism
    (a, b) -> (lambda^-1 a, b) induced by Diag(lambda, 1, lambda) is attached."""
    if n < 1:
        raise BadData("su3_sylow2 needs n >= 1")
    if n > 1 and not override_size:
        raise SizeCeilingError(f"su3_sylow2({n}) has order 2^{6 * n + 3}; pass override_size=True")
    return _su3(n)


@lru_cache(maxsize=None)
def _su3(n: int) -> FiniteGroup:
    q = 2 ** (2 * n + 1)
    F = GF2kField.default(2 * (2 * n + 1))
    size = F.size
    mul = np.array([[F.mul(x, y) for y in range(size)] for x in range(size)], dtype=np.int64)
    bar = np.array([F.pow(x, q) for x in range(size)], dtype=np.int64)
    pairs = [(a, b) for a in range(size) for b in range(size) if mul[a, bar[a]] == b ^ bar[b]]
    N = len(pairs)
    _ceiling(N, "su3_sylow2")
    A = np.array([a for a, _ in pairs], dtype=np.int64)
    B = np.array([b for _, b in pairs], dtype=np.int64)
    lookup = np.full(size * size, -1, dtype=np.int64)
    lookup[A * size + B] = np.arange(N)
    na = A[:, None] ^ A[None, :]
    nb = B[:, None] ^ B[None, :] ^ mul[A[:, None], bar[A][None, :]]
    table = lookup[na * size + nb]
    meta = {"recipe": f"su3({n})", "gf2k": F.describe(), "q": str(q)}
    G = FiniteGroup.build(table, meta=meta)
    lam = F.cube_root_of_unity()
    lam_inv = F.inverse(lam)
    za = mul[lam_inv, A]
    perm = lookup[za * size + B]
    G._cache["su3_coords"] = (A, B, F)
    return _attach(G, AutomorphismMap(G, perm))


# families of the classification ------------------------------------------------------

def family_a(m: int, n: int) -> FiniteGroup:
    """Dic(Z_3^m x Z_2) x Z_2^n."""
    if m < 1 or n < 0:
        raise BadData("family_a needs m >= 1, n >= 0")
    _ceiling(4 * 3**m * 2**n, "family_a")
    core = dicyclic(direct_product(elem_abelian(3, m), cyclic(2)))
    G = direct_product(core, elem_abelian(2, n)) if n else core
    return G.with_meta(recipe=f"famA({m},{n})")


def _block_action(nblocks: int) -> np.ndarray:
    """On (Z2^2)^k: each block (x, y) -> (y, x + y), i.e. a -> b -> ab."""
    k = 2 * nblocks
    N = 2**k
    dig = _digits(N, [2] * k)
    out = dig.copy()
    for i in range(nblocks):
        x, y = dig[:, 2 * i], dig[:, 2 * i + 1]
        out[:, 2 * i] = y
        out[:, 2 * i + 1] = (x + y) % 2
    w = 2 ** np.arange(k - 1, -1, -1)
    return out @ w


def family_b(U: FiniteGroup | None = None, u_aut: AutomorphismMap | None = None, n_blocks: int = 1) -> FiniteGroup:
    """(U x V) x| <z>, V = (Z2^2)^n_blocks with z acting a -> b -> ab per block."""
    if U is None:
        U = cyclic(1)
    if n_blocks < 1:
        raise BadData("family_b needs at least one block")
    if U.n > 1 and (prime_power_base(U.n) != 3 or exponent(U) != 3):
        raise BadUGroup("U must be trivial or a 3-group of exponent 3")
    if u_aut is None:
        u_aut = AutomorphismMap.identity(U)
    if u_aut.group is not U:
        raise BadAction("u_aut is not an automorphism of U")
    if not u_aut.power(3).is_identity():
        raise BadAction("u_aut^3 must be the identity")
    V = elem_abelian(2, 2 * n_blocks)
    K = direct_product(U, V)
    vperm = _block_action(n_blocks)
    perm = (u_aut.perm.astype(np.int64)[:, None] * V.n + vperm[None, :]).reshape(-1)
    G = semidirect_product(K, AutomorphismMap(K, perm), 3)
    z = 1
    u_elems = [int(u) * V.n * 3 for u in range(U.n)]
    if exponent(closure(G, u_elems + [z])) != 3:
        raise BadUGroup("<U, z> does not have exponent 3")
    for i in range(n_blocks):
        a = 2 ** (2 * n_blocks - 1 - 2 * i)
        b = a // 2
        block = closure(G, [a * 3, b * 3, z])
        if block.fingerprint() != CANONICAL["A4"]:
            raise BadAction(f"block {i} with z does not generate A4")
    return G


def family_c(kernel_name: str) -> FiniteGroup:
    """Frobenius group K x| <z> of order 3|K| for K in {H64, K256, K1024}."""
    if kernel_name not in ("H64", "K256", "K1024"):
        raise UnknownName(f"unknown family (c) kernel {kernel_name!r}")
    K = builtin(kernel_name)
    phi = distinguished_automorphism(K)
    if phi.order != 3 or not verify_frobenius(K, phi, 3):
        raise NoFpfFound(f"action on {kernel_name} is not a fixed-point-free automorphism of order 3")
    return semidirect_product(K, phi, 3).with_meta(recipe=f"famC({kernel_name})")


def family_d(core_name: str, m: int = 0) -> FiniteGroup:
    """(U x| <z>) x Z2^m with C_U(z) = Omega_1(U) = Z(U)."""
    mt = _INDEXED.match(core_name.strip())
    if not mt or mt.group(1) not in ("U", "SU3"):
        raise UnknownName(f"unknown family (d) core {core_name!r}")
    U = builtin(core_name.strip())
    phi = distinguished_automorphism(U)
    if not (fix(phi) == center(U) == omega1(U)):
        raise FixedPointMismatch("fix(z), Z(U) and Omega_1(U) differ")
    G = semidirect_product(U, phi, 3)
    if m:
        G = direct_product(G, elem_abelian(2, m))
    label = f"{mt.group(1)}({mt.group(2)})"
    return G.with_meta(recipe=f"famD({label},{m})")


__all__ = [
    "cyclic", "dihedral", "elem_abelian", "direct_product", "direct_power", "perm_group",
    "perm_from_cycles", "dicyclic", "semidirect_product", "inversion_automorphism",
    "CTPresentation", "central_type_group", "builtin", "BUILTIN_NAMES", "u_group", "w_group",
    "su3_sylow2", "family_a", "family_b", "family_c", "family_d", "distinguished_automorphism",
    "h64_fpf", "ct_q8", "ct_h16", "ct_h32", "ct_h32star", "ct_h64", "ct_k256", "ct_k1024",
    "ct_u", "ct_heis27",
]
