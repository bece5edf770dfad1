"""Schur rings over finite abelian groups, stored as partitions of the group.

An S-ring is represented by its basic sets.  Classes are kept sorted and
listed by least element, so class ids are reproducible.  Elements are the
integer indices of :class:`~caylab.groups.AbelianGroup`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .groups import (
    AbelianGroup,
    GroupError,
    Subgroup,
    is_subgroup,
    join,
    meet,
    primes_dividing,
    quotient_group,
    subgroup_from_members,
    subgroup_generated,
    subgroup_structure,
    trivial_subgroup,
    whole_group,
)
from .permgroup import PermGroup


class SRingError(GroupError):
    pass


def canonical_partition(P: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    classes = [tuple(sorted(set(int(x) for x in c))) for c in P]
    classes = [c for c in classes if c]
    return tuple(sorted(classes))


def _check_partition(G: AbelianGroup, classes) -> np.ndarray:
    class_of = np.full(G.order, -1, dtype=np.int64)
    for i, c in enumerate(classes):
        for x in c:
            if not 0 <= x < G.order:
                raise SRingError(f"element {x} not in {G.name}")
            if class_of[x] >= 0:
                raise SRingError(f"element {x} lies in two classes")
            class_of[x] = i
    missing = np.flatnonzero(class_of < 0)
    if len(missing):
        raise SRingError(f"element {int(missing[0])} is in no class")
    return class_of


@dataclass(frozen=True, eq=False)
class SRing:
    """A partition of ``group`` into basic sets (not necessarily verified)."""

    group: AbelianGroup
    classes: tuple[tuple[int, ...], ...]
    class_of: np.ndarray = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, SRing) and self.group == other.group and self.classes == other.classes

    def __hash__(self):
        return hash((self.group, self.classes))

    @property
    def rank(self) -> int:
        return len(self.classes)

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def class_containing(self, x: int) -> tuple[int, ...]:
        return self.classes[int(self.class_of[x])]

    @cached_property
    def indicator(self) -> np.ndarray:
        """|G| x rank 0/1 matrix: element -> class."""
        M = np.zeros((self.group.order, self.rank), dtype=np.int64)
        M[np.arange(self.group.order), self.class_of] = 1
        return M

    def is_aset(self, elems: Iterable[int]) -> bool:
        """True iff the set is a union of basic sets."""
        mask = self.group.mask(elems)
        if not mask.any():
            return True
        ids = np.unique(self.class_of[mask])
        return int(sum(len(self.classes[i]) for i in ids)) == int(mask.sum())

    def is_asubgroup(self, H: Subgroup) -> bool:
        return H.group == self.group and self.is_aset(H.members)

    def dump(self) -> str:
        return "\n".join(" ".join(str(x) for x in c) for c in self.classes)

    def __repr__(self):
        return f"SRing({self.group.name}, rank={self.rank})"


def make_sring(G: AbelianGroup, P: Iterable[Iterable[int]]) -> SRing:
    """Canonicalize a partition of G into an SRing record (axioms not checked)."""
    classes = canonical_partition(P)
    class_of = _check_partition(G, classes)
    class_of.setflags(write=False)
    return SRing(G, classes, class_of)


def full_group_ring(G: AbelianGroup) -> SRing:
    return make_sring(G, [[x] for x in range(G.order)])


def rank_two_ring(G: AbelianGroup) -> SRing:
    return make_sring(G, [[0], list(range(1, G.order))] if G.order > 1 else [[0]])


def parse_partition_dump(text: str) -> list[list[int]]:
    return [[int(t) for t in line.split()] for line in text.strip().splitlines() if line.strip()]


# -- axioms -----------------------------------------------------------------


@dataclass
class Verdict:
    ok: bool
    axiom: Optional[int] = None
    detail: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def structure_counts(A: SRing, X: Sequence[int]) -> np.ndarray:
    """C[z, j] = #{(x, y) : x in X, y in class j, x + y = z}."""
    G = A.group
    neg = G.neg_table
    M = A.indicator
    C = np.zeros_like(M)
    for x in X:
        # z - x ranges over G as z does
        C += M[G.add_table[:, neg[x]]]
    return C


def verify_sring(G: AbelianGroup, P) -> Verdict:
    """Check the three S-ring axioms for the partition P of G.

    Axiom 3 is checked as constancy of structure constants: for classes X, Y
    the number of ways to write z = x + y (x in X, y in Y) depends only on the
    class of z.
    """
    A = P if isinstance(P, SRing) else make_sring(G, P)
    if A.group != G:
        raise SRingError("partition is over a different group")
    if A.classes[int(A.class_of[0])] != (0,):
        return Verdict(False, 1, "identity is not a singleton class", (A.class_containing(0),))
    neg = G.neg_table
    for c in A.classes:
        inv = tuple(sorted(int(neg[x]) for x in c))
        if A.class_containing(inv[0]) != inv:
            return Verdict(False, 2, f"inverse of class {list(c)} is not a class", (c,))
    order = np.argsort(A.class_of, kind="stable")
    sorted_ids = A.class_of[order]
    same = sorted_ids[1:] == sorted_ids[:-1]
    for X in A.classes:
        C = structure_counts(A, X)[order]
        bad = (C[1:] != C[:-1]) & same[:, None]
        if bad.any():
            row, col = np.argwhere(bad)[0]
            z, z2 = int(order[row]), int(order[row + 1])
            Y = A.classes[col]
            return Verdict(
                False, 3,
                f"coefficient of {z} vs {z2} in {list(X)}*{list(Y)}: {int(C[row, col])} vs {int(C[row + 1, col])}",
                (X, Y, A.class_containing(z), z, z2),
            )
    return Verdict(True)


def is_sring(G: AbelianGroup, P) -> bool:
    return verify_sring(G, P).ok


# -- constructions ----------------------------------------------------------


def translation_perm(G: AbelianGroup, g: int) -> np.ndarray:
    return G.add_table[:, g].astype(np.int64)


def transitivity_module(G: AbelianGroup, P: PermGroup) -> SRing:
    """Basic sets = orbits of the stabilizer of the identity in P >= G_r."""
    if P.degree != G.order:
        raise SRingError("permutation group degree differs from the group order")
    for g in G.generators():
        if not P.contains(translation_perm(G, g)):
            raise SRingError(f"translation by {g} is not in the permutation group")
    return make_sring(G, P.stabilizer(0).orbits())


def intersect_srings(A: SRing, B: SRing) -> SRing:
    """The partition join: classes are the smallest common unions of A- and B-classes."""
    if A.group != B.group:
        raise SRingError("S-rings over different groups")
    n = A.group.order
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ring in (A, B):
        for c in ring.classes:
            r0 = find(c[0])
            for x in c[1:]:
                r = find(x)
                if r != r0:
                    parent[max(r, r0)] = min(r, r0)
                    r0 = min(r, r0)
    groups: dict[int, list[int]] = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    return make_sring(A.group, groups.values())


def refines(A: SRing, B: SRing) -> bool:
    """True iff every class of B is a union of A-classes (A is finer)."""
    return all(A.is_aset(c) for c in B.classes)


# -- radicals and subgroups -------------------------------------------------


def radical(G: AbelianGroup, X: Iterable[int]) -> Subgroup:
    X = sorted(set(int(x) for x in X))
    if not X:
        raise SRingError("radical of the empty set")
    mask = G.mask(X)
    stays = mask[G.add_table[X, :]].all(axis=0)
    return subgroup_from_members(G, np.flatnonzero(stays))


@dataclass
class ASubgroups:
    all: list[Subgroup]
    largest_odd: Subgroup
    least_even: Optional[Subgroup]

    def __iter__(self):
        return iter(self.all)

    def __len__(self):
        return len(self.all)


def a_subgroups(A: SRing) -> ASubgroups:
    """All A-subgroups: the join-closure of the subgroups generated by basic sets."""
    G = A.group
    found = {trivial_subgroup(G)}
    for c in A.classes:
        found.add(subgroup_generated(G, c))
    frontier = list(found)
    while frontier:
        nxt = []
        current = list(found)
        for H in frontier:
            for K in current:
                J = join(H, K)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    subs = sorted(found, key=lambda H: (H.order, H.members))
    odd = [H for H in subs if H.order % 2]
    largest_odd = odd[0]
    for H in odd[1:]:
        largest_odd = join(largest_odd, H)
    even = [H for H in subs if H.order % 2 == 0]
    least_even = None
    if even:
        minimal = [H for H in even if not any(K < H for K in even)]
        if len(minimal) == 1:
            least_even = minimal[0]
    return ASubgroups(subs, largest_odd, least_even)


# -- multipliers ------------------------------------------------------------


def power_map(G: AbelianGroup, X: Iterable[int], m: int) -> tuple[int, ...]:
    return tuple(sorted(set(G.scale(m, X))))


def _p_torsion(G: AbelianGroup, p: int) -> np.ndarray:
    return np.flatnonzero(G.mul_table[p % G.exponent] == 0)


def lower_p(G: AbelianGroup, X: Iterable[int], p: int) -> tuple[int, ...]:
    """X^[p]: the p-multiples p*x of those x in X whose coset x + G_p meets X
    in a number of elements not divisible by p (G_p = {y : p*y = 0})."""
    if G.order % p or p not in primes_dividing(G.order):
        raise SRingError(f"{p} is not a prime divisor of |{G.name}|")
    X = sorted(set(int(x) for x in X))
    if not X:
        return ()
    mask = G.mask(X)
    tors = _p_torsion(G, p)
    counts = mask[G.add_table[np.ix_(X, tors)]].sum(axis=1)
    keep = [x for x, c in zip(X, counts) if c % p]
    return power_map(G, keep, p)


# -- quotients and induced rings --------------------------------------------


def _require_asubgroup(A: SRing, H: Subgroup, what: str):
    if H.group != A.group or not is_subgroup(A.group, H.members):
        raise SRingError(f"{what} is not a subgroup of {A.group.name}")
    if not A.is_aset(H.members):
        raise SRingError(f"{what} is not an A-subgroup")


def quotient_sring(A: SRing, L: Subgroup, return_projection: bool = False):
    """The S-ring over G/L with basic sets X/L."""
    _require_asubgroup(A, L, "L")
    Q, proj = quotient_group(A.group, L)
    images = {tuple(sorted(set(int(q) for q in proj[list(c)]))) for c in A.classes}
    ring = make_sring(Q, images)
    return (ring, proj) if return_projection else ring


def induced_subring(A: SRing, H: Subgroup, return_embedding: bool = False):
    """The S-ring over H (as an abstract group) formed by the basic sets inside H."""
    _require_asubgroup(A, H, "H")
    K, embed = subgroup_structure(H)
    back = {int(g): i for i, g in enumerate(embed)}
    classes = [[back[x] for x in c] for c in A.classes if H.mask[c[0]]]
    ring = make_sring(K, classes)
    return (ring, embed) if return_embedding else ring


# -- product structures -----------------------------------------------------


@dataclass
class WreathResult:
    holds: bool
    nontrivial: bool
    violation: Optional[tuple[int, ...]] = None

    def __bool__(self):
        return self.holds


def is_generalized_wreath(A: SRing, U: Subgroup, L: Subgroup) -> WreathResult:
    """U/L-wreath test: every basic set outside U is a union of L-cosets."""
    _require_asubgroup(A, U, "U")
    _require_asubgroup(A, L, "L")
    if not L <= U:
        raise SRingError("L is not contained in U")
    gens = [g for g in (L.gens or L.members) if g]
    G = A.group
    for c in A.classes:
        if U.mask[c[0]]:
            continue
        mask = G.mask(c)
        for g in gens:
            if not mask[G.add_table[list(c), g]].all():
                return WreathResult(False, False, c)
    nontrivial = not L.is_trivial() and U.order != G.order
    return WreathResult(True, nontrivial)


def product_set(G: AbelianGroup, Y: Sequence[int], Z: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(x) for x in np.unique(G.add_table[np.ix_(list(Y), list(Z))]))


def is_star(A: SRing, V: Subgroup, W: Subgroup) -> bool:
    """Star product test A = A_V * A_W."""
    _require_asubgroup(A, V, "V")
    _require_asubgroup(A, W, "W")
    G = A.group
    I = meet(V, W)
    in_v = [c for c in A.classes if V.mask[c[0]]]
    in_w = [c for c in A.classes if W.mask[c[0]]]
    for c in in_w:
        if V.mask[c[0]]:
            continue
        if not I <= radical(G, c):
            return False
    products = {}
    for Y in in_v:
        for Z in in_w:
            products.setdefault(product_set(G, Y, Z), True)
    for c in A.classes:
        if V.mask[c[0]] or W.mask[c[0]]:
            continue
        if c not in products:
            return False
    return True


# -- audits -----------------------------------------------------------------


def units_mod(n: int) -> list[int]:
    from math import gcd

    return [m for m in range(1, max(n, 2)) if gcd(m, n) == 1]


def power_closure_violations(A: SRing) -> list[tuple[int, tuple[int, ...]]]:
    G = A.group
    out = []
    for m in units_mod(G.exponent):
        if m == 1:
            continue
        row = G.mul_table[m]
        for c in A.classes:
            img = tuple(sorted(int(row[x]) for x in c))
            if A.class_containing(img[0]) != img:
                out.append((m, c))
    return out


def lower_p_violations(A: SRing) -> list[tuple[int, tuple[int, ...]]]:
    G = A.group
    out = []
    for p in primes_dividing(G.order):
        for c in A.classes:
            if not A.is_aset(lower_p(G, c, p)):
                out.append((p, c))
    return out


def coset_intersection_violations(A: SRing, subgroups: Optional[Iterable[Subgroup]] = None):
    """Pairs (H, X) for which |(H + x) & X| takes two different nonzero values."""
    G = A.group
    if subgroups is None:
        subgroups = a_subgroups(A).all
    out = []
    for H in subgroups:
        coset_id = G.add_table[:, list(H.members)].min(axis=1)
        for c in A.classes:
            counts = np.bincount(coset_id[list(c)])
            vals = np.unique(counts[counts > 0])
            if len(vals) > 1:
                out.append((H, c))
    return out


def star_wreath_violations(A: SRing, subgroups: Optional[Sequence[Subgroup]] = None):
    """Pairs (V, W) where A = A_V * A_W but A is not the V/(V & W)-wreath product."""
    if subgroups is None:
        subgroups = a_subgroups(A).all
    out = []
    for V in subgroups:
        for W in subgroups:
            if is_star(A, V, W) and not is_generalized_wreath(A, V, meet(V, W)):
                out.append((V, W))
    return out
