"""Finite abelian groups as products of cyclic factors.

Elements are plain integers: the mixed-radix index of the coordinate vector,
first factor most significant, so the identity is 0 and ``Z_n`` elements are
just residues.  Coordinates are a derived view (``G.coords(x)``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

GROUP_SIZE_CAP = 1 << 20
ADD_TABLE_CAP = 4096


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AbelianGroup:
    factors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(f) for f in self.factors))

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"AbelianGroup({self.name})"

    @property
    def name(self) -> str:
        if not self.factors:
            return "1"
        if len(self.factors) == 1:
            return f"Z{self.factors[0]}"
        return "x".join(str(f) for f in self.factors)

    @cached_property
    def order(self) -> int:
        return math.prod(self.factors)

    def __len__(self):
        return self.order

    @cached_property
    def strides(self) -> np.ndarray:
        s = np.ones(len(self.factors), dtype=np.int64)
        for j in range(len(self.factors) - 2, -1, -1):
            s[j] = s[j + 1] * self.factors[j + 1]
        return s

    @cached_property
    def coords_table(self) -> np.ndarray:
        """Row x holds the coordinate vector of element x."""
        idx = np.arange(self.order, dtype=np.int64)
        f = np.array(self.factors, dtype=np.int64)
        return (idx[:, None] // self.strides[None, :]) % f[None, :]

    def coords(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.coords_table[x])

    def index(self, coords: Sequence[int]) -> int:
        f = self.factors
        return int(sum((int(c) % m) * int(s) for c, m, s in zip(coords, f, self.strides)))

    def _index_rows(self, rows: np.ndarray) -> np.ndarray:
        f = np.array(self.factors, dtype=np.int64)
        return ((rows % f) * self.strides).sum(axis=-1)

    @cached_property
    def add_table(self) -> np.ndarray:
        if self.order > ADD_TABLE_CAP:
            raise GroupError(f"add table disabled for groups of order > {ADD_TABLE_CAP}")
        c = self.coords_table
        return self._index_rows(c[:, None, :] + c[None, :, :])

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self._index_rows(-self.coords_table)

    def add(self, x: int, y: int) -> int:
        if self.order <= ADD_TABLE_CAP:
            return int(self.add_table[x, y])
        return self.index(np.add(self.coords_table[x], self.coords_table[y]))

    def neg(self, x: int) -> int:
        return int(self.neg_table[x])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, k: int, x: int) -> int:
        return self.index(int(k) * self.coords_table[x])

    @cached_property
    def mul_table(self) -> np.ndarray:
        """Row k (0 <= k < exponent) is the map x -> k*x."""
        ks = np.arange(self.exponent, dtype=np.int64)
        return self._index_rows(ks[:, None, None] * self.coords_table[None, :, :])

    def scale(self, k: int, xs: Iterable[int]) -> list[int]:
        row = self.mul_table[int(k) % self.exponent]
        return [int(row[x]) for x in xs]

    def translate(self, xs: Iterable[int], g: int) -> list[int]:
        return [self.add(x, g) for x in xs]

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.factors) if self.factors else 1

    def is_cyclic(self) -> bool:
        return len(invariant_factors(self.factors)) <= 1

    def elements(self) -> range:
        return range(self.order)

    def generators(self) -> list[int]:
        """The unit vectors of the cyclic factors."""
        return [int(s) for s in self.strides]

    @cached_property
    def orders(self) -> np.ndarray:
        f = np.array(self.factors, dtype=np.int64)
        c = self.coords_table
        per = f[None, :] // np.gcd(c, f[None, :])
        out = np.ones(self.order, dtype=np.int64)
        for j in range(per.shape[1]):
            out = np.lcm(out, per[:, j])
        return out

    def mask(self, xs: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.order, dtype=bool)
        m[list(xs)] = True
        return m


def make_group(factors: Sequence[int], cap: int = GROUP_SIZE_CAP) -> AbelianGroup:
    factors = tuple(int(f) for f in factors)
    if not factors:
        raise GroupError("need at least one cyclic factor")
    for f in factors:
        if f < 2:
            raise GroupError(f"cyclic factor must be >= 2, got {f}")
    if math.prod(factors) > cap:
        raise GroupError(f"group order {math.prod(factors)} exceeds cap {cap}")
    return AbelianGroup(factors)


def trivial_group() -> AbelianGroup:
    """The order-1 group (no factors); only produced by quotients."""
    return AbelianGroup(())


_SPEC_RE = re.compile(r"^\s*z?\s*(\d+(?:\s*x\s*\d+)*)\s*$", re.IGNORECASE)


def parse_group(spec: str) -> AbelianGroup:
    """Parse ``"Z18"`` or ``"3x9"`` (case-insensitive)."""
    m = _SPEC_RE.match(spec)
    if not m:
        raise GroupError(f"cannot parse group spec {spec!r}")
    return make_group([int(t) for t in re.split(r"\s*x\s*", m.group(1).lower())])


def element_order(G: AbelianGroup, g: int) -> int:
    return int(G.orders[g])


def mult_order(j: int, i: int) -> int:
    """Multiplicative order of j modulo i."""
    if i < 1 or math.gcd(i, j) != 1:
        raise GroupError(f"gcd({j}, {i}) != 1")
    if i == 1:
        return 1
    k, x = 1, j % i
    while x != 1:
        x = (x * j) % i
        k += 1
    return k


@dataclass(frozen=True, eq=False)
class Subgroup:
    group: AbelianGroup
    members: tuple[int, ...]
    gens: tuple[int, ...] = ()
    mask: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.mask is None:
            object.__setattr__(self, "mask", self.group.mask(self.members))

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.group == other.group and self.members == other.members

    def __hash__(self):
        return hash((self.group, self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return bool(self.mask[x])

    def __iter__(self):
        return iter(self.members)

    def __le__(self, other: "Subgroup"):
        return bool(np.all(other.mask[list(self.members)]))

    def __lt__(self, other: "Subgroup"):
        return self <= other and len(self) < len(other)

    @property
    def order(self) -> int:
        return len(self.members)

    def is_trivial(self) -> bool:
        return len(self.members) == 1

    def __repr__(self):
        if len(self.members) <= 12:
            return f"Subgroup({set(self.members)} of {self.group.name})"
        return f"Subgroup(order {len(self.members)} of {self.group.name})"


def _closure(G: AbelianGroup, gens: Iterable[int]) -> list[int]:
    seen = np.zeros(G.order, dtype=bool)
    seen[0] = True
    frontier = [0]
    gens = [g for g in gens if g != 0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if not seen[y]:
                    seen[y] = True
                    nxt.append(y)
        frontier = nxt
    return [int(x) for x in np.flatnonzero(seen)]


def subgroup_generated(G: AbelianGroup, X: Iterable[int]) -> Subgroup:
    X = sorted(set(int(x) for x in X))
    return Subgroup(G, tuple(_closure(G, X)), tuple(X))


def subgroup_from_members(G: AbelianGroup, members: Iterable[int], check: bool = False) -> Subgroup:
    """Wrap a member set that is known (or, with check=True, verified) to be a subgroup."""
    members = tuple(sorted(set(int(x) for x in members)))
    if check and not is_subgroup(G, members):
        raise GroupError(f"{list(members)} is not a subgroup of {G.name}")
    return Subgroup(G, members, members)


def is_subgroup(G: AbelianGroup, members: Iterable[int]) -> bool:
    members = set(int(x) for x in members)
    if 0 not in members:
        return False
    return all(G.sub(x, y) in members for x in members for y in members)


def trivial_subgroup(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, (0,), ())


def whole_group(G: AbelianGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)), tuple(G.generators()))


def join(A: Subgroup, B: Subgroup) -> Subgroup:
    return subgroup_generated(A.group, list(A.gens or A.members) + list(B.gens or B.members))


def meet(A: Subgroup, B: Subgroup) -> Subgroup:
    both = A.mask & B.mask
    return subgroup_from_members(A.group, np.flatnonzero(both))


def unique_subgroup_of_order(G: AbelianGroup, d: int) -> Subgroup:
    if not G.is_cyclic():
        raise GroupError(f"{G.name} is not cyclic")
    if d < 1 or G.order % d:
        raise GroupError(f"{d} does not divide {G.order}")
    members = np.flatnonzero(G.mul_table[d % G.exponent] == 0)
    return subgroup_from_members(G, members)


def all_subgroups(G: AbelianGroup) -> list[Subgroup]:
    """Every subgroup of G, sorted by (order, members).  Desk scale only."""
    found = {trivial_subgroup(G).members: trivial_subgroup(G)}
    frontier = list(found.values())
    cyclic = {subgroup_generated(G, [x]).members for x in G.elements()}
    cyclic = [subgroup_from_members(G, m) for m in cyclic]
    while frontier:
        nxt = []
        for A in frontier:
            for C in cyclic:
                if C <= A:
                    continue
                J = subgroup_generated(G, list(A.gens) + list(C.gens))
                if J.members not in found:
                    found[J.members] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda s: (len(s), s.members))


# --- integer Smith normal form --------------------------------------------


def smith_normal_form(M):
    """Return (diag, U, V, Vinv) with U @ M @ V diagonal; all unimodular."""
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    W = [[int(i == j) for j in range(n)] for i in range(n)]  # V inverse

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        W[i], W[j] = W[j], W[i]

    def add_row(dst, src, q):  # row_dst += q*row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q*col_src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        W[src] = [a - q * b for a, b in zip(W[src], W[dst])]

    diag = []
    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return diag, U, V, W
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        diag.append(A[t][t])
    return diag, U, V, W


def invariant_factors(factors: Sequence[int]) -> list[int]:
    n = len(factors)
    diag, *_ = smith_normal_form([[f if i == j else 0 for j in range(n)] for i, f in enumerate(factors)])
    return [d for d in diag if d != 1]


def quotient_group(G: AbelianGroup, L: Subgroup):
    """Return (G/L, projection) with projection an int array over G's elements."""
    if L.group != G or not is_subgroup(G, L.members):
        raise GroupError("L is not a subgroup of G")
    if L.is_trivial():
        return G, np.arange(G.order, dtype=np.int64)
    r = len(G.factors)
    rel = [[f if i == j else 0 for j in range(r)] for i, f in enumerate(G.factors)]
    rel += [list(G.coords(g)) for g in (L.gens or L.members) if g]
    diag, _, V, _ = smith_normal_form(rel)
    keep = [t for t, d in enumerate(diag) if d != 1]
    Q = AbelianGroup(tuple(diag[t] for t in keep))
    if not keep:
        return Q, np.zeros(G.order, dtype=np.int64)
    Vk = np.array(V, dtype=np.int64)[:, keep]
    qc = G.coords_table @ Vk
    proj = Q._index_rows(qc)
    return Q, proj.astype(np.int64)


def subgroup_structure(S: Subgroup):
    """Return (K, embed): an AbelianGroup K isomorphic to S and the embedding
    array mapping K's elements to S's members (as elements of the parent)."""
    G = S.group
    gens = [g for g in (S.gens or S.members) if g]
    if not gens:
        return trivial_group(), np.zeros(1, dtype=np.int64)
    k, r = len(gens), len(G.factors)
    M = [list(G.coords(g)) for g in gens]
    M += [[f if i == j else 0 for j in range(r)] for i, f in enumerate(G.factors)]
    diag, U, _, _ = smith_normal_form(M)
    kernel = [U[t][:k] for t in range(len(diag), k + r)]
    d2, _, _, W2 = smith_normal_form(kernel)
    keep = [t for t, d in enumerate(d2) if d != 1]
    K = AbelianGroup(tuple(d2[t] for t in keep))
    gm = np.array([G.coords(g) for g in gens], dtype=np.int64)
    basis = np.array(W2, dtype=np.int64)[keep] @ gm  # rows: new generators as coords
    if not keep:
        return K, np.zeros(1, dtype=np.int64)
    embed = G._index_rows(K.coords_table @ basis)
    return K, embed.astype(np.int64)


def primes_dividing(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and primes_dividing(n) == [n]


def split_2pe(n: int):
    """For n = 2 p^e with p an odd prime and e >= 1 return (p, e), else None."""
    if n % 2 or (n // 2) % 2 == 0:
        return None
    m = n // 2
    ps = primes_dividing(m)
    if len(ps) != 1:
        return None
    p, e = ps[0], 0
    while m > 1:
        m //= p
        e += 1
    return p, e
