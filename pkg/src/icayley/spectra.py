"""Exact integrality of 3-valent Cayley graphs by nullity summation.

Eigenvalues of a 3-regular graph lie in [-3, 3], so the graph is integral
exactly when the rational nullities of A - kI, k = -3..3, add up to the
number of vertices.  Nullities come from fraction-free elimination over
Python integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BadData, SizeCeilingError
from .group import FiniteGroup, closure

SPECTRAL_CEILING = 256
EIGEN_RANGE = tuple(range(-3, 4))


@dataclass(frozen=True)
class ConnectionSet:
    group: FiniteGroup
    members: tuple[int, int, int]

    def __post_init__(self):
        G = self.group
        m = tuple(sorted(int(v) for v in self.members))
        object.__setattr__(self, "members", m)
        if len(set(m)) != 3 or 0 in m:
            raise BadData(f"{m} is not three distinct non-identity elements")
        if any(int(G.inv[v]) not in m for v in m):
            raise BadData(f"{m} is not closed under inversion")

    def __str__(self) -> str:
        return ",".join(map(str, self.members))


def enumerate_3_subsets(G: FiniteGroup) -> list[ConnectionSet]:
    """Every inverse-closed 3-subset: three involutions, or {t, g, g^-1} with o(g) > 2."""
    invs = G.involutions
    pairs = [g for g in range(1, G.n) if G.ord[g] > 2 and g < G.inv[g]]
    sets = [tuple(c) for c in itertools.combinations(invs, 3)]
    sets += [tuple(sorted((t, g, int(G.inv[g])))) for t in invs for g in pairs]
    sets.sort()
    return [ConnectionSet(G, s) for s in sets]


def cayley_adjacency(G: FiniteGroup, X: ConnectionSet) -> np.ndarray:
    """A[g, h] = 1 iff h g^-1 in X, i.e. h = x g (edges {g, xg})."""
    A = np.zeros((G.n, G.n), dtype=np.int64)
    g = np.arange(G.n)
    for x in X.members:
        A[g, G.table[x, g]] = 1
    return A


def integer_nullity(M) -> int:
    """n - rank over Q, by Bareiss elimination with first-nonzero pivots."""
    rows = [[int(v) for v in r] for r in np.asarray(M).tolist()]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    rank = 0
    prev = 1
    for c in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        p = prow[c]
        for i in range(rank + 1, n_rows):
            row = rows[i]
            f = row[c]
            if f:
                rows[i] = [(a * p - f * b) // prev for a, b in zip(row, prow)]
            elif p != prev:
                rows[i] = [a * p // prev for a in row]
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return n_cols - rank


@dataclass(frozen=True)
class SpectrumReport:
    n: int
    X: tuple[int, ...]
    multiplicities: dict
    integral: bool

    @property
    def nullity_sum(self) -> int:
        return sum(self.multiplicities.values())

    def nonzero(self) -> dict[int, int]:
        return {k: m for k, m in self.multiplicities.items() if m}

    def line(self) -> str:
        ms = " ".join(str(self.multiplicities[k]) for k in EIGEN_RANGE)
        X = ",".join(map(str, self.X))
        return f"spectrum n={self.n} X={X} m[-3..3]={ms} integral={str(self.integral).lower()}"


def integral_spectrum_3valent(
    G: FiniteGroup, X: ConnectionSet, *, ceiling: int = SPECTRAL_CEILING,
    override_size: bool = False, split: bool = True,
) -> SpectrumReport:
    """Multiplicities of the integers -3..3 in the spectrum of Cay(G, X).

    With ``split`` the graph is reduced to one component: components are the
    right cosets of <X>, all isomorphic to Cay(<X>, X) by right translation,
    so each nullity is [G:<X>] times the nullity on <X>.
    """
    if G.n > ceiling and not override_size:
        raise SizeCeilingError(f"spectral check limited to order {ceiling}")
    if split:
        H = closure(G, X.members)
        Hg = H.as_group()
        pos = {v: i for i, v in enumerate(H.members)}
        A = cayley_adjacency(Hg, ConnectionSet(Hg, tuple(pos[v] for v in X.members)))
        copies = G.n // H.order
    else:
        A = cayley_adjacency(G, X)
        copies = 1
    size = A.shape[0]
    eye = np.eye(size, dtype=np.int64)
    mult = {k: copies * integer_nullity(A - k * eye) for k in EIGEN_RANGE}
    return SpectrumReport(G.n, X.members, mult, sum(mult.values()) == G.n)


@dataclass(frozen=True)
class SpectralVerdict:
    member: bool
    reason: str
    checked: int
    witness: SpectrumReport | None = None

    def __bool__(self) -> bool:
        return self.member


def in_a3_spectral(G: FiniteGroup, *, ceiling: int = SPECTRAL_CEILING, override_size: bool = False) -> SpectralVerdict:
    """A3 by definition: some 3-valent Cayley graph exists and all of them are integral."""
    if G.n > ceiling and not override_size:
        raise SizeCeilingError(f"spectral A3 check limited to order {ceiling}")
    sets = enumerate_3_subsets(G)
    if not sets:
        return SpectralVerdict(False, "no 3-valent Cayley graph", 0)
    for i, X in enumerate(sets):
        rep = integral_spectrum_3valent(G, X, ceiling=ceiling, override_size=override_size)
        if not rep.integral:
            return SpectralVerdict(False, f"Cay(G, {{{X}}}) is not integral", i + 1, rep)
    return SpectralVerdict(True, f"all {len(sets)} connection sets integral", len(sets))


__all__ = [
    "ConnectionSet", "enumerate_3_subsets", "cayley_adjacency", "integer_nullity",
    "SpectrumReport", "integral_spectrum_3valent", "SpectralVerdict", "in_a3_spectral",
    "SPECTRAL_CEILING",
]
