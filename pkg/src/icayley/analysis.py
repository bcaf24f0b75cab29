"""Decision procedures on finite groups: property (P), A3 membership via the
structural criterion, minimal non-abelian census, Q8-freeness, family
certificates and the lemma battery for (P)-groups.

Reports print as ``check <name> pass|fail|no-witness [detail]`` lines followed
by one ``summary {...}`` JSON line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionViolated, SizeCeilingError, UnknownName
from .group import (
    FiniteGroup,
    OrderProfile,
    Subgroup,
    center,
    closure,
    commutator_subgroup,
    derived_subgroup,
    exponent,
    frattini_pgroup,
    nilpotency_class,
    o_p,
    omega1,
    order_profile,
    p_part,
    sylow,
)
from .morphisms import CANONICAL, identify_allowed

PROPERTY_P_CAP = 13
MINNONAB_CEILING = 4096

MINNONAB_TAGS = {
    "Q8": (8, False, OrderProfile(((1, 1), (2, 1), (4, 6)))),
    "H16": (16, False, OrderProfile(((1, 1), (2, 3), (4, 12)))),
    "H32": (32, False, OrderProfile(((1, 1), (2, 7), (4, 24)))),
}
SL23 = (24, False, OrderProfile(((1, 1), (2, 1), (3, 8), (4, 6), (6, 8))))


# reports ----------------------------------------------------------------------

@dataclass
class Check:
    name: str
    status: str  # "pass", "fail" or "no-witness"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def line(self) -> str:
        out = f"check {self.name} {self.status}"
        return f"{out} {self.detail}" if self.detail else out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    facts: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = "", *, missing: bool = False) -> bool:
        status = "pass" if ok else ("no-witness" if missing else "fail")
        self.checks.append(Check(name, status, detail))
        return ok

    @property
    def accepted(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self) -> bool:
        return self.accepted

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def summary(self) -> dict:
        return {
            "report": self.title,
            "accepted": self.accepted,
            "checks": {c.name: c.status for c in self.checks},
            **self.facts,
        }

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks] + ["summary " + json.dumps(self.summary(), sort_keys=True)]

    def text(self) -> str:
        return "\n".join(self.lines())


# property (P) -----------------------------------------------------------------

@dataclass(frozen=True)
class PropertyPReport:
    verdict: bool
    even_order: bool
    witness: tuple | None  # (x, y, fingerprint, tag)
    pairs: int
    distinct: int

    def __bool__(self) -> bool:
        return self.verdict

    def line(self) -> str:
        if self.verdict:
            return f"check property-p pass pairs={self.pairs} distinct={self.distinct} even_order={self.even_order}"
        x, y, fp, tag = self.witness
        return f"check property-p fail x={x} y={y} <x,y>={tag} order={fp[0]}"


def has_property_p(G: FiniteGroup, cap: int = PROPERTY_P_CAP) -> PropertyPReport:
    """For every involution x and every y, <x, y> must be one of the allowed groups.

    Every allowed group has order <= 12, so a closure growing past ``cap``
    is already a witness.  Verdicts are cached by member set; the first
    failing pair in (x, y) lexicographic order is reported.
    """
    seen: dict[tuple, bool] = {}
    pairs = 0
    for x in G.involutions:
        for y in range(G.n):
            pairs += 1
            H = closure(G, (x, y), cap=cap - 1)
            if H is None:
                full = closure(G, (x, y))
                return PropertyPReport(False, True, (x, y, full.fingerprint(), "OTHER"), pairs, len(seen))
            ok = seen.get(H.members)
            if ok is None:
                ok = identify_allowed(H).allowed
                seen[H.members] = ok
            if not ok:
                cls = identify_allowed(H)
                return PropertyPReport(False, True, (x, y, cls.fingerprint, cls.tag), pairs, len(seen))
    return PropertyPReport(True, G.n % 2 == 0, None, pairs, len(seen))


@dataclass(frozen=True)
class A3Verdict:
    member: bool
    reason: str
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.member


def in_a3_theorem(G: FiniteGroup) -> A3Verdict:
    """Membership via the structural criterion: G = D6, or |G| even with (P)."""
    if G.fingerprint() == CANONICAL["D6"]:
        return A3Verdict(True, "clause (i): G is D6")
    if G.n % 2:
        return A3Verdict(False, "odd order: no inverse-closed 3-subset exists")
    if G.n == 2:
        # Z2 has (P) but a single non-identity element, so no 3-subset
        return A3Verdict(False, "order 2: no 3-valent Cayley graph exists")
    rep = has_property_p(G)
    if rep.verdict:
        return A3Verdict(True, "clause (ii): even order and property (P)")
    return A3Verdict(False, "property (P) fails", rep.witness)


# minimal non-abelian subgroups ---------------------------------------------------

def _tag_minnonab(H: Subgroup) -> str:
    fp = H.fingerprint()
    for tag, ref in MINNONAB_TAGS.items():
        if fp == ref:
            return tag
    return "OTHER"


def _is_minimal_nonabelian(H: Subgroup) -> bool:
    """Non-abelian, and every non-commuting pair inside generates all of H."""
    Hg = H.as_group()
    if Hg.is_abelian:
        return False
    T = Hg.table
    noncomm = np.argwhere(np.triu(T != T.T))
    for u, v in noncomm:
        # a proper subgroup fits under the cap, so any non-None result is proper and non-abelian
        if closure(Hg, (int(u), int(v)), cap=Hg.n // 2) is not None:
            return False
    return True


def minimal_nonabelian_subgroups(G: FiniteGroup, *, override_size: bool = False) -> list[tuple[Subgroup, str]]:
    """All distinct minimal non-abelian subgroups, each with a fingerprint tag."""
    if G.n > MINNONAB_CEILING and not override_size:
        raise SizeCeilingError(f"minimal_nonabelian_subgroups limited to order {MINNONAB_CEILING}")
    if G.is_abelian:
        return []
    T = G.table
    seen: dict[tuple, bool] = {}
    out = []
    for x in range(1, G.n):
        row = T[x]
        # minimal subgroups already containing x are not revisited through x
        covered = np.zeros(G.n, dtype=bool)
        for y in np.flatnonzero(row != T[:, x]):
            y = int(y)
            if y < x or covered[y]:
                continue
            H = closure(G, (x, y))
            verdict = seen.get(H.members)
            if verdict is None:
                verdict = _is_minimal_nonabelian(H)
                seen[H.members] = verdict
                if verdict:
                    out.append(H)
            if verdict:
                covered[list(H.members)] = True
    out.sort(key=lambda H: H.members)
    return [(H, _tag_minnonab(H)) for H in out]


def no_q8_check(K: FiniteGroup) -> bool:
    """True iff K has no subgroup isomorphic to Q8 (K a 2-group)."""
    if K.n & (K.n - 1):
        raise PreconditionViolated("no_q8_check expects a 2-group")
    return next(_iter_q8(K, range(K.n)), None) is None


def _iter_q8(G: FiniteGroup, within):
    """Distinct Q8 subgroups generated by non-commuting order-4 pairs with equal squares."""
    fours = [v for v in sorted(int(v) for v in within) if G.ord[v] == 4]
    sq = {v: G.mul(v, v) for v in fours}
    seen = set()
    for i, x in enumerate(fours):
        for y in fours[i + 1:]:
            if sq[x] != sq[y] or G.mul(x, y) == G.mul(y, x):
                continue
            H = closure(G, (x, y), cap=8)
            if H is not None and H.members not in seen and H.fingerprint() == MINNONAB_TAGS["Q8"]:
                seen.add(H.members)
                yield H


# family certificates -------------------------------------------------------------

def _first_of_order(G: FiniteGroup, k: int, outside: Subgroup | None = None) -> int | None:
    for v in range(G.n):
        if G.ord[v] == k and (outside is None or v not in outside):
            return v
    return None


def _conj_perm(G: FiniteGroup, z: int, members) -> dict[int, int]:
    return {int(v): G.conj(int(v), z) for v in members}


def _product_set(G: FiniteGroup, A, B) -> set[int]:
    a = np.asarray(list(A))
    b = np.asarray(list(B))
    return set(np.unique(G.table[a[:, None], b[None, :]]).tolist())


def verify_family(G: FiniteGroup, tag: str, params: tuple | None = None) -> Report:
    """Check each clause of the chosen family against G; parameters are derived when omitted."""
    checker = {"a": _verify_a, "b": _verify_b, "c": _verify_c, "d": _verify_d}.get(tag)
    if checker is None:
        raise UnknownName(f"unknown family tag {tag!r}; expected a, b, c or d")
    rep = Report(f"family-{tag}")
    checker(G, rep, params)
    return rep


def _verify_a(G: FiniteGroup, rep: Report, params) -> None:
    from .constructors import family_a

    if params is None:
        m = 0
        k = G.n
        while k % 3 == 0:
            k //= 3
            m += 1
        n = max(p_part(G.n, 2).bit_length() - 3, -1)
    else:
        m, n = params
    shape = m >= 1 and n >= 0 and G.n == 4 * 3**m * 2**n
    rep.facts.update(m=m, n=n)
    if not rep.add("order", shape, f"|G|={G.n} m={m} n={n}"):
        return
    ref = family_a(m, n)
    rep.add("fingerprint", G.fingerprint() == ref.fingerprint(), f"profile={order_profile(G)}")
    Z = center(G)
    rep.add("center-elementary", exponent(Z) <= 2 and Z.is_abelian(), f"|Z|={Z.order}")
    invs = G.involutions
    t = invs[0] if invs else None
    rep.add("involutions-central", all(v in Z for v in invs), f"first={t}")


def _verify_b(G: FiniteGroup, rep: Report, params) -> None:
    V = o_p(G, 2)
    U = o_p(G, 3)
    v_ok = V.is_abelian() and exponent(V) <= 2 and V.order > 1 and (V.order.bit_length() - 1) % 2 == 0
    rep.add("V-elementary-abelian-4^n", v_ok, f"|V|={V.order}")
    rep.add("U-exponent-3", exponent(U) in (1, 3), f"|U|={U.order}")
    rep.add("order", G.n == 3 * U.order * V.order, f"|G|={G.n} |U|={U.order} |V|={V.order}")
    UV = _product_set(G, U, V)
    rep.add("U-V-commute", all(G.mul(u, v) == G.mul(v, u) for u in U for v in V))
    z = _first_of_order(G, 3, U)
    if not rep.add("z-exists", z is not None):
        return
    rep.add("complement", z not in UV and len(UV) * 3 == G.n)
    Uz = closure(G, list(U.members) + [z])
    rep.add("U-z-exponent-3", exponent(Uz) == 3, f"|<U,z>|={Uz.order}")
    if not v_ok:
        return
    blocks = _z_blocks(G, V, z)
    n_blocks = (V.order.bit_length() - 1) // 2
    rep.facts["blocks"] = n_blocks
    found = blocks is not None
    rep.add("block-decomposition", found, f"blocks={n_blocks}", missing=True)
    if found:
        bad = [i for i, B in enumerate(blocks) if closure(G, list(B) + [z]).fingerprint() != CANONICAL["A4"]]
        rep.add("blocks-A4", not bad, f"bad={bad}" if bad else "")


def _z_blocks(G: FiniteGroup, V: Subgroup, z: int) -> list[tuple[int, ...]] | None:
    """Greedy z-invariant Klein four subgroups whose product is V."""
    span = {0}
    blocks = []
    for v in V.members:
        if v in span:
            continue
        w = G.conj(v, z)
        if w == v:
            return None
        B = closure(G, (v, w))
        if B.order != 4:
            return None
        blocks.append(B.members)
        span = _product_set(G, span, B.members)
        if len(span) == V.order:
            return blocks
    return blocks if len(span) == V.order else None


def _verify_c(G: FiniteGroup, rep: Report, params) -> None:
    K = o_p(G, 2)
    rep.add("index-3", K.order * 3 == G.n, f"|K|={K.order}")
    Kg = K.as_group()
    rep.add("kernel-exponent-4", exponent(Kg) == 4)
    cls = nilpotency_class(Kg)
    rep.add("kernel-class<=2", cls is not None and cls <= 2, f"class={cls}")
    rep.add("omega1<=center", omega1(Kg) <= center(Kg), f"|Omega1|={omega1(Kg).order} |Z|={center(Kg).order}")
    z = _first_of_order(G, 3)
    if not rep.add("complement-order-3", z is not None):
        return
    fixed = [v for v in K.members if v and G.conj(v, z) == v]
    rep.add("frobenius", not fixed, f"fixed={fixed[0]}" if fixed else "")
    rep.facts["kernel_order"] = K.order


def _verify_d(G: FiniteGroup, rep: Report, params) -> None:
    P = o_p(G, 2)
    rep.add("index-3", P.order * 3 == G.n, f"|P|={P.order}")
    z = _first_of_order(G, 3)
    if not rep.add("z-exists", z is not None):
        return
    U = commutator_subgroup(G, P, closure(G, [z]))
    Ug = U.as_group()
    ZU = _center_in(G, U)
    DU = _derived_in(G, U)
    O1 = closure(G, [v for v in U.members if G.ord[v] == 2])
    rep.facts["U_order"] = U.order
    rep.add("U-nonabelian", not Ug.is_abelian, f"|U|={U.order}")
    special = DU == ZU and _frattini_in(G, U) == ZU and exponent(ZU) <= 2
    rep.add("U-special", special, f"|Z(U)|={ZU.order}")
    CUz = Subgroup(G, tuple(v for v in U.members if G.conj(v, z) == v))
    rep.add("C_U(z)=Omega1(U)=Z(U)", CUz == O1 == ZU)
    CPz = Subgroup(G, tuple(v for v in P.members if G.conj(v, z) == v))
    Zg = center(G)
    rep.add("E-central", exponent(CPz) <= 2 and CPz <= Zg, f"|C_P(z)|={CPz.order}")
    rep.add("P=U.C_P(z)", len(_product_set(G, U, CPz)) == P.order)
    Qs = _u_blocks(G, U, ZU, z)
    rep.add("Q8-blocks", Qs is not None, f"n={len(Qs)}" if Qs else "", missing=True)
    if Qs:
        rep.facts["blocks"] = len(Qs)


def _center_in(G: FiniteGroup, H: Subgroup) -> Subgroup:
    m = np.asarray(H.members)
    sub = G.table[np.ix_(m, m)]
    mask = (sub == sub.T).all(axis=1)
    return Subgroup(G, tuple(int(v) for v in m[mask]))


def _derived_in(G: FiniteGroup, H: Subgroup) -> Subgroup:
    return commutator_subgroup(G, H, H)


def _frattini_in(G: FiniteGroup, H: Subgroup) -> Subgroup:
    sq = {G.mul(v, v) for v in H.members}
    return closure(G, list(_derived_in(G, H).members) + sorted(sq))


def _u_blocks(G: FiniteGroup, U: Subgroup, ZU: Subgroup, z: int) -> list[Subgroup] | None:
    """Greedy choice of z-invariant Q8 subgroups U_i with U = Z(U) U_1 ... U_n."""
    chosen: list[Subgroup] = []
    span = set(ZU.members)
    for Q in _iter_q8(G, U.members):
        if any(G.conj(v, z) not in Q for v in Q.members):
            continue
        if any(len(Q.as_set() & C.as_set()) > 2 for C in chosen):
            continue
        ZQ = closure(G, list(ZU.members) + list(Q.members))
        if not _normal_in(G, ZQ, U):
            continue
        if closure(G, list(Q.members) + [z]).fingerprint() != SL23:
            continue
        grown = _product_set(G, span, Q.members)
        if len(grown) == len(span):
            continue
        chosen.append(Q)
        span = grown
        if len(span) == U.order:
            return chosen
    return None


def _normal_in(G: FiniteGroup, H: Subgroup, U: Subgroup) -> bool:
    h = np.asarray(H.members)
    u = np.asarray(U.members)
    T = G.table
    conj = T[T[G.inv[u][:, None], h[None, :]], u[:, None]]
    return bool(np.isin(conj, h).all())


# lemma battery -------------------------------------------------------------------------

def lemma_suite(G: FiniteGroup, *, require_p: bool = True) -> Report:
    """Consequences of (P) checked directly on G and a Sylow 2-subgroup."""
    if require_p and not has_property_p(G).verdict:
        raise PreconditionViolated("lemma_suite needs a group with property (P)")
    rep = Report("lemmas")
    orders = set(int(o) for o in np.unique(G.ord))
    rep.add("element-orders", orders <= {1, 2, 3, 4, 6}, f"orders={sorted(orders)}")
    invs = np.asarray(G.involutions, dtype=np.int64)
    sub = G.table[np.ix_(invs, invs)] if len(invs) else np.zeros((0, 0))
    rep.add("involutions-commute", bool(np.array_equal(sub, sub.T)))
    S2 = sylow(G, 2)
    G2 = S2.as_group()
    e2 = exponent(G2)
    rep.facts["sylow2_order"] = G2.n
    rep.facts["sylow2_exponent"] = e2
    rep.add("sylow2-exponent<=4", e2 <= 4, f"exponent={e2}")
    Z2, O2 = center(G2), omega1(G2)
    rep.add("omega1<=center(G2)", O2 <= Z2)
    if G.n % 3 == 0:
        e3 = exponent(sylow(G, 3))
        rep.add("sylow3-exponent-3", e3 == 3, f"exponent={e3}")
    D2, F2 = derived_subgroup(G2), frattini_pgroup(G2)
    rep.add("derived<=frattini<=omega1<=center", D2 <= F2 <= O2 <= Z2,
            f"|G2'|={D2.order} |Phi|={F2.order} |Omega1|={O2.order} |Z|={Z2.order}")
    OG = omega1(G)
    OG2 = closure(G, [v for v in S2.members if G.ord[v] == 2])
    rep.add("omega1(G)=omega1(G2)", OG == OG2, f"|Omega1(G)|={OG.order}")
    rep.add("omega1-elementary", OG.is_abelian() and exponent(OG) <= 2)
    cls = nilpotency_class(G2)
    rep.add("sylow2-class<=2", cls is not None and cls <= 2, f"class={cls}")
    return rep


__all__ = [
    "PropertyPReport", "has_property_p", "A3Verdict", "in_a3_theorem",
    "minimal_nonabelian_subgroups", "no_q8_check", "verify_family", "lemma_suite",
    "Report", "Check", "MINNONAB_TAGS", "SL23",
]
