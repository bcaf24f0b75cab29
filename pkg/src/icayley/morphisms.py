"""Homomorphisms from generator images and backtracking searches over them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BadData,
    BudgetExceeded,
    NotAHomomorphism,
    NotBijective,
    NotGenerating,
    NotPGroup,
    OrderMismatch,
    SizeCeilingError,
)
from .group import (
    FiniteGroup,
    OrderProfile,
    Subgroup,
    closure,
    frattini_pgroup,
    order_profile,
    prime_power_base,
)

AUT_CEILING = 256
FPF_CEILING = 2048
ISO_CEILING = 64
DEFAULT_BUDGET = 5_000_000


class AutomorphismMap:
    """A permutation of element indices, certified multiplicative on all pairs."""

    def __init__(self, group: FiniteGroup, perm, *, certify: bool = True):
        perm = np.asarray(perm, dtype=np.int32)
        if certify:
            _certify(group, group, perm, bijective=True)
        perm.flags.writeable = False
        self.group = group
        self.perm = perm

    @classmethod
    def identity(cls, group: FiniteGroup) -> "AutomorphismMap":
        return cls(group, np.arange(group.n), certify=False)

    def __call__(self, x: int) -> int:
        return int(self.perm[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AutomorphismMap):
            return NotImplemented
        return self.group is other.group and np.array_equal(self.perm, other.perm)

    def __hash__(self) -> int:
        return hash(self.perm.tobytes())

    def __repr__(self) -> str:
        return f"AutomorphismMap(n={self.group.n}, order={self.order})"

    def compose(self, other: "AutomorphismMap") -> "AutomorphismMap":
        """x -> self(other(x))."""
        return AutomorphismMap(self.group, self.perm[other.perm], certify=False)

    def inverse(self) -> "AutomorphismMap":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.group.n, dtype=np.int32)
        return AutomorphismMap(self.group, inv, certify=False)

    def power(self, k: int) -> "AutomorphismMap":
        k %= self.order
        out = np.arange(self.group.n, dtype=np.int32)
        for _ in range(k):
            out = self.perm[out]
        return AutomorphismMap(self.group, out, certify=False)

    @cached_property
    def order(self) -> int:
        ar = np.arange(self.group.n)
        cur = self.perm.copy()
        k = 1
        while not np.array_equal(cur, ar):
            cur = self.perm[cur]
            k += 1
        return k

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.group.n)))

    def images_of(self, xs: Sequence[int]) -> list[int]:
        return [int(self.perm[x]) for x in xs]


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(int(x) for x in np.flatnonzero(self.images == 0)))

    def is_injective(self) -> bool:
        return len(np.unique(self.images)) == self.source.n


def _certify(G: FiniteGroup, H: FiniteGroup, img: np.ndarray, *, bijective: bool) -> None:
    if img.shape != (G.n,):
        raise BadData("image list has the wrong length")
    if bijective and (G.n != H.n or len(np.unique(img)) != G.n):
        raise NotBijective("map is not a bijection")
    lhs = img[G.table]
    rhs = H.table[img[:, None], img[None, :]]
    bad = lhs != rhs
    if bad.any():
        a, b = (int(v) for v in np.argwhere(bad)[0])
        raise NotAHomomorphism(f"f({a}*{b}) != f({a})*f({b})", witness=(a, b))


# word decomposition ---------------------------------------------------------

def word_tree(G: FiniteGroup, gens: Sequence[int]) -> tuple[list[int], np.ndarray, np.ndarray]:
    """Breadth-first spanning tree of G over right multiplication by ``gens``.

    Returns (bfs order, parent, generator position); element v equals
    parent[v] * gens[genpos[v]].  Cached per (group, gens).
    """
    key = ("words", tuple(int(g) for g in gens))
    hit = G._cache.get(key)
    if hit is not None:
        return hit
    n = G.n
    parent = np.full(n, -1, dtype=np.int64)
    genpos = np.full(n, -1, dtype=np.int64)
    seen = bytearray(n)
    seen[0] = 1
    order = [0]
    flat = G._flat
    gl = [int(g) for g in gens]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        base = u * n
        for i, g in enumerate(gl):
            v = flat[base + g]
            if not seen[v]:
                seen[v] = 1
                parent[v] = u
                genpos[v] = i
                order.append(v)
    if len(order) != n:
        raise NotGenerating(f"generators reach {len(order)} of {n} elements")
    out = (order, parent, genpos)
    G._cache[key] = out
    return out


def hom_from_images(
    G: FiniteGroup, gens: Sequence[int], H: FiniteGroup, images: Sequence[int], *, bijective: bool = False,
) -> Homomorphism | AutomorphismMap:
    """Extend gens -> images to a map G -> H and verify it on every pair.

    Raises NotAHomomorphism (with a witness pair) if the extension is not
    multiplicative, NotBijective if ``bijective`` is requested and fails.
    """
    if len(gens) != len(images):
        raise BadData("gens and images differ in length")
    order, parent, genpos = word_tree(G, gens)
    img = np.zeros(G.n, dtype=np.int32)
    hflat = H._flat
    nH = H.n
    ims = [int(y) for y in images]
    for v in order[1:]:
        img[v] = hflat[int(img[parent[v]]) * nH + ims[genpos[v]]]
    _certify(G, H, img, bijective=bijective)
    if bijective and G is H:
        return AutomorphismMap(G, img, certify=False)
    return Homomorphism(G, H, img)


def automorphism_from_images(G: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> AutomorphismMap:
    return hom_from_images(G, gens, G, images, bijective=True)


# partial maps for backtracking ----------------------------------------------

class _PartialMap:
    """Injective partial homomorphism on a growing subgroup, with undo."""

    def __init__(self, G: FiniteGroup, H: FiniteGroup, *, forbid_fixed: bool = False):
        self.G, self.H = G, H
        self.fwd = [-1] * G.n
        self.used = bytearray(H.n)
        self.fwd[0] = 0
        self.used[0] = 1
        self.domain = [0]
        self.gens: list[int] = []
        self.imgs: list[int] = []
        self.forbid_fixed = forbid_fixed
        self.nodes = 0

    def mark(self) -> tuple[int, int]:
        return len(self.domain), len(self.gens)

    def undo(self, mark: tuple[int, int]) -> None:
        dlen, glen = mark
        fwd, used = self.fwd, self.used
        for v in self.domain[dlen:]:
            used[fwd[v]] = 0
            fwd[v] = -1
        del self.domain[dlen:]
        del self.gens[glen:]
        del self.imgs[glen:]

    def extend(self, g: int, y: int) -> bool:
        """Add generator g with image y; False (and state unchanged) on conflict."""
        self.nodes += 1
        fwd = self.fwd
        if fwd[g] != -1:
            return fwd[g] == y
        mark = self.mark()
        n, nH = self.G.n, self.H.n
        flat, hflat = self.G._flat, self.H._flat
        used, domain = self.used, self.domain
        forbid = self.forbid_fixed
        self.gens.append(g)
        self.imgs.append(y)
        frontier = []

        def assign(v: int, w: int) -> bool:
            fv = fwd[v]
            if fv == -1:
                if used[w] or (forbid and v == w):
                    return False
                fwd[v] = w
                used[w] = 1
                domain.append(v)
                frontier.append(v)
                return True
            return fv == w

        for u in list(domain):
            if not assign(flat[u * n + g], hflat[fwd[u] * nH + y]):
                self.undo(mark)
                return False
        pairs = list(zip(self.gens, self.imgs))
        while frontier:
            cur = frontier[:]
            frontier.clear()
            for u in cur:
                base, hbase = u * n, fwd[u] * nH
                for gi, yi in pairs:
                    if not assign(flat[base + gi], hflat[hbase + yi]):
                        self.undo(mark)
                        return False
        return True

    def complete(self) -> bool:
        return len(self.domain) == self.G.n

    def as_array(self) -> np.ndarray:
        return np.asarray(self.fwd, dtype=np.int32)


# generating sets ---------------------------------------------------------------

def minimal_generating_set(G: FiniteGroup) -> list[int]:
    """Burnside basis for p-groups (lift of a basis of G/Phi(G)); greedy otherwise."""
    if G.n == 1:
        return []
    if prime_power_base(G.n) is not None:
        phi = list(frattini_pgroup(G).members)
        chosen: list[int] = []
        span = closure(G, phi)
        for x in range(G.n):
            if x not in span:
                chosen.append(x)
                span = closure(G, phi + chosen)
        return chosen
    chosen = []
    span = G.trivial()
    for x in sorted(range(G.n), key=lambda v: (-int(G.ord[v]), v)):
        if x not in span:
            chosen.append(x)
            span = closure(G, chosen)
            if span.order == G.n:
                break
    return chosen


def class_sizes(G: FiniteGroup) -> np.ndarray:
    T = G.table
    cent = (T == T.T).sum(axis=1)
    return G.n // cent


# automorphism group --------------------------------------------------------------

def iter_automorphisms(G: FiniteGroup, budget: int = DEFAULT_BUDGET,
                       gens: Sequence[int] | None = None) -> Iterator[AutomorphismMap]:
    """Yield all automorphisms, lexicographic on generator-image tuples."""
    gens = list(gens) if gens is not None else minimal_generating_set(G)
    use_classes = G.n > 32
    cs = class_sizes(G) if use_classes else None
    cands = []
    for g in gens:
        ok = G.ord == G.ord[g]
        if use_classes:
            ok &= cs == cs[g]
        cands.append([int(y) for y in np.flatnonzero(ok)])
    pm = _PartialMap(G, G)
    found = 0

    def rec(i: int):
        nonlocal found
        if pm.nodes > budget:
            raise BudgetExceeded(f"search budget {budget} exhausted after {found} automorphisms", partial=found)
        if i == len(gens):
            if pm.complete():
                found += 1
                yield AutomorphismMap(G, pm.as_array())
            return
        for y in cands[i]:
            mark = pm.mark()
            if pm.extend(gens[i], y):
                yield from rec(i + 1)
                pm.undo(mark)

    yield from rec(0)


def automorphism_group(G: FiniteGroup, budget: int = DEFAULT_BUDGET, *, override_size: bool = False) -> list[AutomorphismMap]:
    if G.n > AUT_CEILING and not override_size:
        raise SizeCeilingError(f"automorphism_group limited to order {AUT_CEILING}")
    return list(iter_automorphisms(G, budget))


# fixed-point-free order-3 search -------------------------------------------------

def find_order3_fpf(G: FiniteGroup, budget: int = DEFAULT_BUDGET, *, override_size: bool = False) -> AutomorphismMap | None:
    """First fixed-point-free automorphism of order 3 in deterministic order, or None.

    The next generator x is always the smallest element outside the current
    domain.  Its image y must have the same order, commute with x and differ
    from it; the image of y is then forced to (x y)^-1, since
    x * phi(x) * phi^2(x) = 1 for such automorphisms.
    """
    if G.n & (G.n - 1):
        raise NotPGroup("find_order3_fpf expects a 2-group")
    if G.n > FPF_CEILING and not override_size:
        raise SizeCeilingError(f"find_order3_fpf limited to order {FPF_CEILING}")
    if G.n == 1:
        return None
    pm = _PartialMap(G, G, forbid_fixed=True)
    T, inv, ordv = G.table, G.inv, G.ord
    in_dom = pm.fwd

    def rec() -> AutomorphismMap | None:
        if pm.nodes > budget:
            raise BudgetExceeded(f"fpf search budget {budget} exhausted", partial=0)
        if pm.complete():
            phi = AutomorphismMap(G, pm.as_array())
            if phi.order == 3 and check_fpf_identities(phi) is None:
                return phi
            return None
        x = next(v for v in range(G.n) if in_dom[v] == -1)
        row, col = T[x], T[:, x]
        for y in np.flatnonzero((ordv == ordv[x]) & (row == col)):
            y = int(y)
            if y == x or pm.used[y]:
                continue
            forced = int(inv[T[x, y]])
            mark = pm.mark()
            if pm.extend(x, y) and pm.extend(y, forced):
                res = rec()
                if res is not None:
                    return res
            pm.undo(mark)
        return None

    return rec()


def check_fpf_identities(phi: AutomorphismMap) -> tuple[str, int] | None:
    """Check the identities forced on a fixed-point-free automorphism.

    Order 3: x phi(x) phi^2(x) = 1 and [x, phi(x)] = 1.  Order 2:
    phi(x) = x^-1.  Returns the first violation as (rule, x), else None.
    """
    G = phi.group
    T, inv = G.table, G.inv
    ar = np.arange(G.n)
    p1 = phi.perm
    if phi.order == 3:
        p2 = p1[p1]
        bad = T[T[ar, p1], p2] != 0
        if bad.any():
            return ("x*phi(x)*phi^2(x)=1", int(np.flatnonzero(bad)[0]))
        bad = T[ar, p1] != T[p1, ar]
        if bad.any():
            return ("[x,phi(x)]=1", int(np.flatnonzero(bad)[0]))
    elif phi.order == 2:
        bad = p1 != inv
        if bad.any():
            return ("phi(x)=x^-1", int(np.flatnonzero(bad)[0]))
    return None


# fixed points / Frobenius ---------------------------------------------------------

def fix(phi: AutomorphismMap) -> Subgroup:
    return Subgroup(phi.group, tuple(int(x) for x in np.flatnonzero(phi.perm == np.arange(phi.group.n))))


def is_fixed_point_free(phi: AutomorphismMap) -> bool:
    return fix(phi).order == 1


@dataclass(frozen=True)
class FrobeniusReport:
    verdict: bool
    offending: tuple[tuple[int, int], ...]

    def __bool__(self) -> bool:
        return self.verdict


def verify_frobenius(K: FiniteGroup, phi: AutomorphismMap, m: int) -> FrobeniusReport:
    """Every phi^i (0 < i < m) must be fixed-point-free."""
    if not phi.power(m).is_identity():
        raise OrderMismatch(f"phi^{m} is not the identity")
    offending = []
    cur = AutomorphismMap.identity(K)
    for i in range(1, m):
        cur = phi.compose(cur)
        fixed = fix(cur).members
        if len(fixed) > 1:
            offending.append((i, fixed[1]))
    return FrobeniusReport(not offending, tuple(offending))


# isomorphism --------------------------------------------------------------------

def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> np.ndarray | None:
    if G.n != H.n:
        return None
    if G.n == 1:
        return np.zeros(1, dtype=np.int32)
    gens = minimal_generating_set(G)
    cands = [[int(y) for y in np.flatnonzero(H.ord == G.ord[g])] for g in gens]
    pm = _PartialMap(G, H)

    def rec(i: int) -> bool:
        if i == len(gens):
            return pm.complete()
        for y in cands[i]:
            mark = pm.mark()
            if pm.extend(gens[i], y):
                if rec(i + 1):
                    return True
            pm.undo(mark)
        return False

    if rec(0):
        img = pm.as_array()
        _certify(G, H, img, bijective=True)
        return img
    return None


def isomorphic_bruteforce(G: FiniteGroup, H: FiniteGroup) -> bool:
    if max(G.n, H.n) > ISO_CEILING:
        raise SizeCeilingError(f"isomorphic_bruteforce limited to order {ISO_CEILING}")
    return find_isomorphism(G, H) is not None


# fingerprints of the (P) targets ----------------------------------------------------

def _fp(order: int, abelian: bool, prof: dict[int, int]) -> tuple:
    return (order, abelian, OrderProfile(tuple(sorted(prof.items()))))


CANONICAL = {
    "Z2": _fp(2, True, {1: 1, 2: 1}),
    "Z2xZ2": _fp(4, True, {1: 1, 2: 3}),
    "Z4": _fp(4, True, {1: 1, 2: 1, 4: 2}),
    "Z6": _fp(6, True, {1: 1, 2: 1, 3: 2, 6: 2}),
    "Z2xZ4": _fp(8, True, {1: 1, 2: 3, 4: 4}),
    "Z2xZ6": _fp(12, True, {1: 1, 2: 3, 3: 2, 6: 6}),
    "A4": _fp(12, False, {1: 1, 2: 3, 3: 8}),
    "D6": _fp(6, False, {1: 1, 2: 3, 3: 2}),
}
ALLOWED_TAGS = frozenset(CANONICAL) - {"D6"}
_BY_FP = {fp: tag for tag, fp in CANONICAL.items()}


@dataclass(frozen=True)
class IsoClass:
    tag: str
    fingerprint: tuple

    @property
    def allowed(self) -> bool:
        return self.tag in ALLOWED_TAGS


def fingerprint(H) -> tuple:
    return H.fingerprint()


def identify_allowed(H) -> IsoClass:
    """Match (order, abelian?, order profile) against the canonical table."""
    fp = H.fingerprint()
    return IsoClass(_BY_FP.get(fp, "OTHER"), fp)


__all__ = [
    "AutomorphismMap", "Homomorphism", "hom_from_images", "automorphism_from_images",
    "word_tree", "minimal_generating_set", "automorphism_group", "iter_automorphisms",
    "find_order3_fpf", "check_fpf_identities", "fix", "is_fixed_point_free",
    "verify_frobenius", "FrobeniusReport", "find_isomorphism", "isomorphic_bruteforce",
    "identify_allowed", "IsoClass", "CANONICAL", "ALLOWED_TAGS", "order_profile",
]
