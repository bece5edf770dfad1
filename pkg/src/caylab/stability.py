"""Stability of Cayley graphs on abelian groups.

Ground truth compares |Aut(Cay(H,S) x K2)| with 2|Aut(Cay(H,S))|.  The double
cover is realised as Cay(G, Sa) with G = H x <a>, where the element (h, t) of G
has index 2h + t; thus a = 1 and H is the set of even indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .autsearch import automorphism_search
from .cayley import (
    ConnectionSet,
    build_cayley,
    double_cover,
    find_twins,
    graph_properties,
    lift,
    make_connection_set,
)
from .groups import AbelianGroup, GroupError, Subgroup, split_2pe, subgroup_from_members
from .isotest import muzychuk_iso
from .keys import GeneralizedMultiplier
from .sring import (
    SRing,
    a_subgroups,
    is_generalized_wreath,
    radical,
    transitivity_module,
    verify_sring,
)


class ScopeError(GroupError):
    """Input is disconnected or bipartite (trivially unstable, not analysed)."""


def _as_set(H: AbelianGroup, S) -> ConnectionSet:
    return S if isinstance(S, ConnectionSet) else make_connection_set(H, S)


@dataclass
class Criterion:
    applicable: bool
    cond1: bool = False
    witness_h: Optional[int] = None
    cond2: bool = False
    witness_multiplier: Optional[GeneralizedMultiplier] = None

    @property
    def unstable(self) -> bool:
        return self.cond1 or self.cond2

    def to_dict(self) -> dict:
        if not self.applicable:
            return {"applicable": False}
        c1 = {"holds": self.cond1}
        if self.witness_h is not None:
            c1["witness_h"] = self.witness_h
        c2 = {"holds": self.cond2}
        if self.witness_multiplier is not None:
            c2["witness_multiplier"] = list(self.witness_multiplier.m)
        return {"applicable": True, "cond1": c1, "cond2": c2}


@dataclass
class StabilityReport:
    group: str
    set: tuple[int, ...]
    connected: bool
    bipartite: bool
    aut_order: Optional[int] = None
    dc_aut_order: Optional[int] = None
    stable: Optional[bool] = None
    orbit_of_a: Optional[tuple[int, ...]] = None
    criterion: Criterion = field(default_factory=lambda: Criterion(False))
    ring: Optional[SRing] = field(default=None, repr=False)

    @property
    def in_scope(self) -> bool:
        return self.connected and not self.bipartite

    @property
    def agreement(self) -> Optional[bool]:
        if not self.in_scope:
            return None
        checks = []
        if self.orbit_of_a is not None:
            checks.append((self.orbit_of_a != (1,)) == (not self.stable))
        if self.criterion.applicable:
            checks.append(self.criterion.unstable == (not self.stable))
        return all(checks)

    def to_dict(self) -> dict:
        out = {
            "group": self.group,
            "set": list(self.set),
            "connected": self.connected,
            "bipartite": self.bipartite,
        }
        if not self.in_scope:
            out["scope"] = "out of scope (disconnected or bipartite)"
            return out
        out["aut_order"] = str(self.aut_order)
        out["dc_aut_order"] = str(self.dc_aut_order)
        out["stable"] = self.stable
        if self.orbit_of_a is not None:
            out["orbit_of_a"] = list(self.orbit_of_a)
        out["criterion"] = self.criterion.to_dict()
        out["agreement"] = self.agreement
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _require_scope(H: AbelianGroup, S: ConnectionSet):
    props = graph_properties(build_cayley(H, S))
    if not props.connected or props.bipartite:
        raise ScopeError("graph is disconnected or bipartite: out of scope (trivially unstable)")
    return props


def brute_stability(H: AbelianGroup, S) -> StabilityReport:
    """Orders of Aut(Cay(H,S)) and of the automorphism group of its double cover."""
    S = _as_set(H, S)
    _require_scope(H, S)
    aut = automorphism_search(build_cayley(H, S)).order
    _, dc = double_cover(H, S)
    dc_aut = automorphism_search(dc).order
    return StabilityReport(H.name, S.elements, True, False, aut, dc_aut, dc_aut == 2 * aut)


def sring_witness(H: AbelianGroup, S) -> tuple[SRing, tuple[int, ...]]:
    """Transitivity module of Aut(Cay(G, Sa)) over G = H x Z2 and the class of a."""
    S = _as_set(H, S)
    _require_scope(H, S)
    G, dc = double_cover(H, S)
    A = transitivity_module(G, automorphism_search(dc).group())
    return A, A.class_containing(1)


def criterion_2pe(H: AbelianGroup, S) -> Criterion:
    """The two-condition instability test for H cyclic of order 2p^e."""
    S = _as_set(H, S)
    pe = split_2pe(H.order)
    if pe is None or len(H.factors) != 1:
        raise GroupError(f"{H.name} is not cyclic of order 2p^e")
    _require_scope(H, S)
    p, e = pe
    n, b = H.order, p ** e
    crit = Criterion(True)
    S0 = [x for x in S if x % 2 == 0]
    if e > 1:
        if S0:
            rad = [h for h in radical(H, S0).members if h and h % 2 == 0]
        else:
            rad = list(range(2, n, 2))
        if rad:
            crit.cond1, crit.witness_h = True, min(rad)
    if b not in S:
        Sb = make_connection_set(H, [(x + b) % n for x in S])
        res = muzychuk_iso(H, S, Sb)
        if res.isomorphic:
            crit.cond2, crit.witness_multiplier = True, res.witness_multiplier
    return crit


def analyze(H: AbelianGroup, S, witness: bool = True, keep_ring: bool = False) -> StabilityReport:
    """Full report: brute orders, the S-ring witness and (for 2p^e) the criterion."""
    S = _as_set(H, S)
    props = graph_properties(build_cayley(H, S))
    if not props.connected or props.bipartite:
        return StabilityReport(H.name, S.elements, props.connected, props.bipartite)
    aut = automorphism_search(build_cayley(H, S)).order
    G, dc = double_cover(H, S)
    res = automorphism_search(dc)
    rep = StabilityReport(H.name, S.elements, True, False, aut, res.order, res.order == 2 * aut)
    if witness:
        A = transitivity_module(G, res.group())
        rep.orbit_of_a = A.class_containing(1)
        if keep_ring:
            rep.ring = A
    if split_2pe(H.order) is not None and len(H.factors) == 1:
        rep.criterion = criterion_2pe(H, S)
    return rep


# -- audits -----------------------------------------------------------------


def lifted_H(G: AbelianGroup) -> Subgroup:
    """H inside G = H x Z2: the even indices."""
    return subgroup_from_members(G, range(0, G.order, 2))


@dataclass
class Violation:
    theorem: str
    group: str
    set: tuple[int, ...]
    detail: str

    def key(self):
        return (self.theorem, self.group, self.set)


def wreath_witness(A: SRing) -> Optional[Subgroup]:
    """Some A-subgroup L != 1 of H with A the H/L-wreath product."""
    G = A.group
    U = lifted_H(G)
    for L in a_subgroups(A).all:
        if L.is_trivial() or not L <= U:
            continue
        if is_generalized_wreath(A, U, L):
            return L
    return None


def radical_V(A: SRing, n: int) -> tuple[int, ...]:
    """Intersection of rad(X & H_0 a) over basic sets X meeting H_0 a.

    H = Z_{2n}, H_0 = even residues of H; h in H lifts to (h, 1) = 2h + 1.
    """
    G = A.group
    H0a = G.mask([2 * h + 1 for h in range(0, 2 * n, 2)])
    V = set(range(G.order))
    for c in A.classes:
        part = [x for x in c if H0a[x]]
        if part:
            V &= set(radical(G, part).members)
    return tuple(sorted(V))


def t_shapes(n: int) -> set[tuple[int, ...]]:
    """All sets La, La u Lab, Ma u (M minus L)ab with 1 <= L < M <= H_0 in
    G = Z_{2n} x Z2 (indices 2h + t), b = n."""
    def sub(d):  # subgroup of H_0 of order d, as elements of H
        step = 2 * n // d
        return {(j * step) % (2 * n) for j in range(d)}

    divs = [d for d in range(1, n + 1) if n % d == 0]
    a = lambda hs: {2 * h + 1 for h in hs}
    ab = lambda hs: {2 * ((h + n) % (2 * n)) + 1 for h in hs}
    out = set()
    for d in divs:
        L = sub(d)
        out.add(tuple(sorted(a(L))))
        out.add(tuple(sorted(a(L) | ab(L))))
        for d2 in divs:
            if d2 > d and d2 % d == 0:
                M = sub(d2)
                out.add(tuple(sorted(a(M) | ab(M - L))))
    return out


def audit_instance(H: AbelianGroup, S, checks=("main1", "main2", "main3", "main4", "wm", "shape", "axioms"),
                   report: Optional[StabilityReport] = None) -> tuple[StabilityReport, list[Violation]]:
    """Run the requested theorem checks on one instance; returns (report, violations)."""
    S = _as_set(H, S)
    rep = report if report is not None and report.ring is not None else analyze(H, S, keep_ring=True)
    out: list[Violation] = []

    def bad(th, detail):
        out.append(Violation(th, H.name, S.elements, detail))

    if not rep.in_scope:
        return rep, out
    A = rep.ring
    unstable = not rep.stable
    if rep.dc_aut_order < 2 * rep.aut_order:
        bad("orders", f"|Aut(dc)|={rep.dc_aut_order} < 2|Aut|={2 * rep.aut_order}")
    if "axioms" in checks:
        v = verify_sring(A.group, A)
        if not v.ok:
            bad("axioms", f"transitivity module fails axiom {v.axiom}: {v.detail}")
        if not A.is_aset(range(0, A.group.order, 2)):
            bad("axioms", "H is not a union of basic sets")
        if not A.is_aset([lift(s) for s in S]):
            bad("axioms", "Sa is not a union of basic sets")
    if "main1" in checks and (rep.orbit_of_a != (1,)) != unstable:
        bad("main1", f"orbit of a {list(rep.orbit_of_a)} vs stable={rep.stable}")
    if "main4" in checks and rep.criterion.applicable and rep.criterion.unstable != unstable:
        bad("main4", f"criterion unstable={rep.criterion.unstable} vs stable={rep.stable}")
    odd = H.order % 2 == 1
    if odd and "wm" in checks and unstable and find_twins(build_cayley(H, S)) is None:
        bad("wm", "unstable without twins")
    if odd and "main2" in checks and rep.orbit_of_a != (1,) and wreath_witness(A) is None:
        bad("main2", "no H/L-wreath decomposition with L != 1")
    twice_odd_cyclic = H.is_cyclic() and H.order % 4 == 2 and H.order > 2
    if twice_odd_cyclic and rep.orbit_of_a != (1,):
        n = H.order // 2
        ab = 2 * n + 1
        if "main3" in checks:
            if rep.orbit_of_a != (1, ab) and len(radical_V(A, n)) == 1:
                bad("main3", "{a,ab} is not a basic set and V = 1")
        if "shape" in checks and len(H.factors) == 1 and rep.orbit_of_a not in t_shapes(n):
            bad("shape", f"class of a {list(rep.orbit_of_a)} has none of the three shapes")
    return rep, out


def audit_theorems(instances, checks=("main1", "main2", "main3", "main4", "wm", "shape", "axioms")):
    """instances: iterable of (H, S).  Returns (violations sorted by instance, number audited)."""
    out: list[Violation] = []
    count = 0
    for H, S in instances:
        _, v = audit_instance(H, S, checks)
        out.extend(v)
        count += 1
    out.sort(key=Violation.key)
    return out, count
