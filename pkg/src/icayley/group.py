"""Finite groups given by a Cayley table, and exact subgroup computations.

Elements are the indices ``0..n-1`` with the identity at index 0.  Every
structural operation returns a :class:`Subgroup`, a sorted tuple of member
indices tied to its parent group.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NotAGroup, NotPGroup, SizeCeilingError

SIZE_CEILING = 32_768
WARN_ABOVE = 4_096
FULL_ASSOCIATIVITY_LIMIT = 512
ASSOCIATIVITY_SAMPLES = 10_000
DEFAULT_SEED = 0xC41E9


_seed = DEFAULT_SEED


def set_default_seed(seed: int) -> None:
    """Seed used by sampled associativity checks when none is passed explicitly."""
    global _seed
    _seed = int(seed)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(p: int) -> bool:
    return p >= 2 and _prime_factors(p) == [p]


def prime_power_base(n: int) -> int | None:
    """Return p if n = p^k with k >= 1, else None."""
    fs = _prime_factors(n)
    return fs[0] if len(fs) == 1 else None


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


@dataclass(frozen=True)
class OrderProfile:
    """Multiset element-order -> count, stored as a sorted tuple of pairs."""

    items: tuple[tuple[int, int], ...]

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "OrderProfile":
        counts: dict[int, int] = {}
        for o in orders:
            counts[int(o)] = counts.get(int(o), 0) + 1
        return cls(tuple(sorted(counts.items())))

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def __getitem__(self, order: int) -> int:
        return self.as_dict().get(order, 0)

    def total(self) -> int:
        return sum(c for _, c in self.items)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, OrderProfile):
            return self.items == other.items
        if isinstance(other, Mapping):
            return self.as_dict() == {int(k): int(v) for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.items)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{o}:{c}" for o, c in self.items) + "}"


class FiniteGroup:
    """Immutable finite group on element indices ``0..n-1``.

    Use :func:`group_from_table` for untrusted tables; constructors in this
    package build through :meth:`FiniteGroup.build`, which runs the same
    validation minus identity relocation.
    """

    def __init__(
        self,
        table: np.ndarray,
        gens: Sequence[int] | None = None,
        labels: Sequence[str] | None = None,
        meta: Mapping[str, str] | None = None,
    ):
        table = np.ascontiguousarray(table, dtype=np.int32)
        table.flags.writeable = False
        self.table = table
        self.n = int(table.shape[0])
        self.labels = tuple(labels) if labels is not None else None
        self.meta = MappingProxyType(dict(meta or {}))
        self._flat = memoryview(table.reshape(-1))
        self._cache: dict = {}
        inv = np.argmax(table == 0, axis=1).astype(np.int32)
        inv.flags.writeable = False
        self.inv = inv
        self.ord = _element_orders(table)
        self.gens = tuple(int(g) for g in gens) if gens is not None else _greedy_gens(self)

    @classmethod
    def build(cls, table, gens=None, labels=None, meta=None, *, seed: int | None = None) -> "FiniteGroup":
        """Construct and validate a table whose identity already sits at index 0."""
        if seed is None:
            seed = _seed
        table = np.asarray(table, dtype=np.int32)
        _check_shape(table)
        _check_latin(table)
        ar = np.arange(table.shape[0])
        if not (np.array_equal(table[0], ar) and np.array_equal(table[:, 0], ar)):
            raise NotAGroup("index 0 is not the identity")
        _check_associative(table, seed)
        G = cls(table, gens=gens, labels=labels, meta=meta)
        if gens is not None and len(closure(G, G.gens)) != G.n:
            raise NotAGroup("generators do not generate the table")
        return G

    # basic arithmetic -------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return self._flat[a * self.n + b]

    def power(self, a: int, k: int) -> int:
        k %= int(self.ord[a])
        out = 0
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        inv = self.inv
        return self.mul(self.mul(int(inv[a]), int(inv[b])), self.mul(a, b))

    def conj(self, a: int, g: int) -> int:
        """a^g = g^-1 a g."""
        return self.mul(self.mul(int(self.inv[g]), a), g)

    def power_map(self, k: int) -> np.ndarray:
        """Array whose entry x is x^k."""
        T = self.table
        res = np.zeros(self.n, dtype=np.int32)
        base = np.arange(self.n, dtype=np.int32)
        while k:
            if k & 1:
                res = T[res, base]
            base = T[base, base]
            k >>= 1
        return res

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    @property
    def order(self) -> int:
        return self.n

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        name = self.meta.get("recipe", "")
        return f"FiniteGroup(n={self.n}{', ' + name if name else ''})"

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def involutions(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.flatnonzero(self.ord == 2))

    def with_meta(self, **kv: str) -> "FiniteGroup":
        meta = dict(self.meta)
        meta.update(kv)
        G = FiniteGroup.__new__(FiniteGroup)
        G.__dict__.update(self.__dict__)
        G.meta = MappingProxyType(meta)
        G._cache = self._cache
        return G

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.n)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))

    def fingerprint(self) -> tuple:
        return (self.n, self.is_abelian, order_profile(self))


def _check_shape(table: np.ndarray) -> None:
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise NotAGroup("table must be a non-empty square matrix")
    n = table.shape[0]
    if n > SIZE_CEILING:
        raise SizeCeilingError(f"order {n} exceeds ceiling {SIZE_CEILING}")
    if table.min() < 0 or table.max() >= n:
        raise NotAGroup("entries out of range")


def _check_latin(table: np.ndarray) -> None:
    ar = np.arange(table.shape[0])
    if not (np.sort(table, axis=1) == ar).all():
        raise NotAGroup("a row is not a permutation (Latin square check)")
    if not (np.sort(table, axis=0) == ar[:, None]).all():
        raise NotAGroup("a column is not a permutation (Latin square check)")


def _check_associative(table: np.ndarray, seed: int) -> None:
    n = table.shape[0]
    if n <= FULL_ASSOCIATIVITY_LIMIT:
        for a in range(n):
            left = table[table[a]]  # (a b) c over all b, c
            right = table[a][table]  # a (b c)
            if not np.array_equal(left, right):
                b, c = np.argwhere(left != right)[0]
                raise NotAGroup(f"not associative at ({a}, {b}, {c})")
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, ASSOCIATIVITY_SAMPLES))
        bad = table[table[a, b], c] != table[a, table[b, c]]
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise NotAGroup(f"not associative at ({a[i]}, {b[i]}, {c[i]})")


def _element_orders(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    ar = np.arange(n)
    ordv = np.zeros(n, dtype=np.int64)
    cur = ar.copy()
    k = 1
    while True:
        hit = (cur == 0) & (ordv == 0)
        ordv[hit] = k
        if (ordv > 0).all():
            break
        cur = table[cur, ar]
        k += 1
        if k > n:
            raise NotAGroup("element without finite order")
    ordv.flags.writeable = False
    return ordv


def _greedy_gens(G: FiniteGroup) -> tuple[int, ...]:
    gens: list[int] = []
    members: set[int] = {0}
    for x in range(G.n):
        if x not in members:
            gens.append(x)
            members = _closure_set(G, gens, None)
    return tuple(gens)


def group_from_table(
    table, labels: Sequence[str] | None = None, meta: Mapping[str, str] | None = None,
    *, seed: int | None = None,
) -> FiniteGroup:
    """Validate an arbitrary Cayley table, moving the identity to index 0."""
    T = np.asarray(table, dtype=np.int64)
    _check_shape(T)
    _check_latin(T)
    n = T.shape[0]
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(T[e], ar) and np.array_equal(T[:, e], ar)]
    if not ids:
        raise NotAGroup("no two-sided identity element")
    e = ids[0]
    if e != 0:
        sigma = ar.copy()
        sigma[0], sigma[e] = e, 0  # new index i is old element sigma[i]
        T = sigma[T[np.ix_(sigma, sigma)]]  # sigma is an involution, so sigma^-1 = sigma
        if labels is not None:
            labels = [labels[int(s)] for s in sigma]
    return FiniteGroup.build(T, labels=labels, meta=meta, seed=seed)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]
    _set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_set", frozenset(self.members))
        if self.parent.n % len(self.members):
            raise NotAGroup(f"subgroup order {len(self.members)} does not divide {self.parent.n}")

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Subgroup):
            return self.parent is other.parent and self.members == other.members
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.members)

    def __le__(self, other: "Subgroup") -> bool:
        return self._set <= other._set

    def __lt__(self, other: "Subgroup") -> bool:
        return self._set < other._set

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, tuple(sorted(self._set & other._set)))

    def as_set(self) -> frozenset:
        return self._set

    def is_abelian(self) -> bool:
        m = np.asarray(self.members)
        sub = self.parent.table[np.ix_(m, m)]
        return bool(np.array_equal(sub, sub.T))

    def is_normal(self) -> bool:
        G = self.parent
        m = np.asarray(self.members)
        ar = np.arange(G.n)
        conj = G.table[G.table[G.inv[:, None], m[None, :]], ar[:, None]]
        return bool(np.isin(conj, m).all())

    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone group, member k becoming index k."""
        G = self.parent
        m = np.asarray(self.members)
        lookup = np.full(G.n, -1, dtype=np.int64)
        lookup[m] = np.arange(len(m))
        sub = lookup[G.table[np.ix_(m, m)]]
        labels = [G.labels[i] for i in m] if G.labels is not None else None
        return FiniteGroup(sub, labels=labels)

    def fingerprint(self) -> tuple:
        return (self.order, self.is_abelian(), order_profile(self))


# closures ---------------------------------------------------------------

def _closure_set(G: FiniteGroup, seed: Iterable[int], cap: int | None) -> set[int] | None:
    n = G.n
    flat = G._flat
    members: set[int] = {0}
    gens: list[int] = []
    for s in seed:
        s = int(s)
        if s in members:
            continue
        gens.append(s)
        # old members only need the new generator; new members need all of them
        frontier = []
        for u in list(members):
            v = flat[u * n + s]
            if v not in members:
                members.add(v)
                frontier.append(v)
        while frontier:
            if cap is not None and len(members) > cap:
                return None
            nxt = []
            for u in frontier:
                base = u * n
                for g in gens:
                    v = flat[base + g]
                    if v not in members:
                        members.add(v)
                        nxt.append(v)
            frontier = nxt
    if cap is not None and len(members) > cap:
        return None
    return members


def closure(G: FiniteGroup, seed: Iterable[int], cap: int | None = None) -> Subgroup | None:
    """Smallest subgroup containing ``seed``; ``None`` once it grows past ``cap``."""
    s = _closure_set(G, seed, cap)
    if s is None:
        return None
    return Subgroup(G, tuple(sorted(s)))


def _warn_size(G: FiniteGroup, what: str) -> None:
    if G.n > WARN_ABOVE:
        warnings.warn(f"{what} on a group of order {G.n} (> {WARN_ABOVE}) may be slow", stacklevel=3)


def _members(H) -> np.ndarray:
    if isinstance(H, FiniteGroup):
        return np.arange(H.n)
    return np.asarray(list(H), dtype=np.int64)


def commutator_values(G: FiniteGroup, A, B) -> np.ndarray:
    """Distinct values of [a, b] for a in A, b in B."""
    a = _members(A)
    b = _members(B)
    T, inv = G.table, G.inv
    left = T[inv[a][:, None], inv[b][None, :]]
    right = T[a[:, None], b[None, :]]
    return np.unique(T[left, right])


def commutator_subgroup(G: FiniteGroup, A, B) -> Subgroup:
    return closure(G, commutator_values(G, A, B).tolist())


def center(G: FiniteGroup) -> Subgroup:
    _warn_size(G, "center")
    T = G.table
    mask = (T == T.T).all(axis=1)
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(mask)))


def centralizer(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    T = G.table
    mask = np.ones(G.n, dtype=bool)
    for s in S:
        mask &= T[:, s] == T[s, :]
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(mask)))


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    T = G.table
    h = np.asarray(H.members)
    ar = np.arange(G.n)
    conj = T[T[G.inv[:, None], h[None, :]], ar[:, None]]  # row g: g^-1 h g
    inside = np.zeros(G.n, dtype=bool)
    inside[h] = True
    mask = inside[conj].all(axis=1)
    return Subgroup(G, tuple(int(x) for x in np.flatnonzero(mask)))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    _warn_size(G, "derived_subgroup")
    return commutator_subgroup(G, G, G)


def omega1(G: FiniteGroup) -> Subgroup:
    """Subgroup generated by the elements of order at most 2."""
    return closure(G, G.involutions)


def frattini_pgroup(G: FiniteGroup) -> Subgroup:
    """Frattini subgroup of a p-group, computed as G' G^p."""
    p = prime_power_base(G.n)
    if G.n == 1:
        return G.trivial()
    if p is None:
        raise NotPGroup(f"order {G.n} is not a prime power")
    seeds = list(derived_subgroup(G).members) + np.unique(G.power_map(p)).tolist()
    return closure(G, seeds)


def _is_p_element(o: int, p: int) -> bool:
    while o % p == 0:
        o //= p
    return o == 1


def sylow(G: FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown by normalizer climbing from the smallest p-element."""
    target = p_part(G.n, p)
    if target == 1:
        return G.trivial()
    p_elts = [x for x in range(1, G.n) if _is_p_element(int(G.ord[x]), p)]
    P = closure(G, [p_elts[0]])
    while P.order < target:
        N = normalizer(G, P)
        y = next(x for x in p_elts if x in N and x not in P)
        P = closure(G, list(P.members) + [y])
    return P


def _right_coset_reps(G: FiniteGroup, H: Subgroup) -> list[int]:
    covered = np.zeros(G.n, dtype=bool)
    h = np.asarray(H.members)
    reps = []
    for g in range(G.n):
        if not covered[g]:
            reps.append(g)
            covered[G.table[h, g]] = True
    return reps


def conjugate(G: FiniteGroup, H: Subgroup, g: int) -> Subgroup:
    """g^-1 H g."""
    h = np.asarray(H.members)
    vals = G.table[G.table[G.inv[g], h], g]
    return Subgroup(G, tuple(sorted(int(v) for v in vals)))


def o_p(G: FiniteGroup, p: int) -> Subgroup:
    """Largest normal p-subgroup: the core of a Sylow p-subgroup."""
    S = sylow(G, p)
    if S.order == 1:
        return S
    N = normalizer(G, S)
    core = set(S.members)
    for g in _right_coset_reps(G, N):
        core &= conjugate(G, S, g).as_set()
        if len(core) == 1:
            break
    return Subgroup(G, tuple(sorted(core)))


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    """G = g_1 >= g_2 >= ... until it stabilizes (last two entries equal if non-nilpotent)."""
    series = [G.whole()]
    while series[-1].order > 1:
        nxt = commutator_subgroup(G, series[-1], G)
        series.append(nxt)
        if nxt.order == series[-2].order:
            break
    return series


def nilpotency_class(G: FiniteGroup) -> int | None:
    """Nilpotency class, or None if G is not nilpotent."""
    series = lower_central_series(G)
    if series[-1].order > 1:
        return None
    return len(series) - 1


def exponent(G) -> int:
    orders = _orders_of(G)
    return math.lcm(*(int(o) for o in set(orders)))


def _orders_of(H) -> np.ndarray:
    if isinstance(H, FiniteGroup):
        return H.ord
    return H.parent.ord[np.asarray(H.members)]


def order_profile(H) -> OrderProfile:
    return OrderProfile.from_orders(_orders_of(H).tolist())


@dataclass(frozen=True)
class SpecialReport:
    verdict: bool
    derived: Subgroup
    frattini: Subgroup
    center: Subgroup
    elementary_abelian: bool

    def __bool__(self) -> bool:
        return self.verdict


def is_special_2group(G: FiniteGroup) -> SpecialReport:
    if G.n & (G.n - 1):
        raise NotPGroup(f"order {G.n} is not a power of 2")
    D, F, Z = derived_subgroup(G), frattini_pgroup(G), center(G)
    elem_ab = G.is_abelian and exponent(G) <= 2
    if elem_ab:
        return SpecialReport(True, D, F, Z, True)
    ok = D == F == Z and exponent(Z) <= 2
    return SpecialReport(ok, D, F, Z, False)
