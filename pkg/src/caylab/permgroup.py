"""Permutation groups: base and strong generating sets, orbits, stabilisers.

Permutations are int64 numpy arrays acting on the right: ``p[x]`` is the
image of x, and the product ``p * q`` (first p, then q) is ``q[p]``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def identity(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return q[p]


def inverse(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p), dtype=p.dtype)
    return inv


def is_identity(p: np.ndarray) -> bool:
    return bool(np.all(p == np.arange(len(p))))


def is_permutation(p) -> bool:
    p = np.asarray(p)
    return p.ndim == 1 and np.array_equal(np.sort(p), np.arange(len(p)))


def _first_moved(p: np.ndarray) -> int:
    return int(np.flatnonzero(p != np.arange(len(p)))[0])


def orbit_partition(n: int, gens: Iterable[np.ndarray]) -> list[tuple[int, ...]]:
    """Orbits of <gens> on 0..n-1, each sorted, listed by least element."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x, y in enumerate(g.tolist()):
            rx, ry = find(x), find(y)
            if rx != ry:
                if rx < ry:
                    parent[ry] = rx
                else:
                    parent[rx] = ry
    classes: dict[int, list[int]] = {}
    for x in range(n):
        classes.setdefault(find(x), []).append(x)
    return [tuple(c) for _, c in sorted(classes.items())]


class PermGroup:
    """Permutation group of a fixed degree stored as a BSGS.

    The default constructor runs a deterministic Schreier-Sims: the base is
    ``base_prefix`` followed by first-moved points taken in ascending order,
    and Schreier generators are scanned in sorted orbit order.
    """

    def __init__(self, degree: int, generators: Sequence = (), base_prefix: Sequence[int] = ()):
        self.degree = int(degree)
        gens = [np.asarray(g, dtype=np.int64) for g in generators]
        for g in gens:
            if g.shape != (self.degree,) or not is_permutation(g):
                raise ValueError("generator is not a permutation of the right degree")
        self.generators = [g for g in gens if not is_identity(g)]
        self.base = [int(b) for b in base_prefix]
        self.strong = list(self.generators)
        self._trans: dict[int, dict[int, np.ndarray]] = {}
        self._schreier_sims()

    @classmethod
    def from_bsgs(cls, degree: int, strong_generators: Sequence, base: Sequence[int]) -> "PermGroup":
        """Wrap a base and strong generating set that is already known to be complete."""
        self = cls.__new__(cls)
        self.degree = int(degree)
        self.strong = [np.asarray(g, dtype=np.int64) for g in strong_generators if not is_identity(np.asarray(g))]
        self.generators = list(self.strong)
        self.base = [int(b) for b in base]
        self._trans = {}
        return self

    # -- BSGS machinery ---------------------------------------------------

    def _level_gens(self, i: int) -> list[np.ndarray]:
        prefix = self.base[:i]
        return [s for s in self.strong if all(s[b] == b for b in prefix)]

    def transversal(self, i: int) -> dict[int, np.ndarray]:
        """Coset representatives u_beta (base[i] -> beta) for level i."""
        if i not in self._trans:
            gens = self._level_gens(i)
            b = self.base[i]
            T = {b: identity(self.degree)}
            frontier = [b]
            while frontier:
                nxt = []
                for x in frontier:
                    for s in gens:
                        y = int(s[x])
                        if y not in T:
                            T[y] = mul(T[x], s)
                            nxt.append(y)
                frontier = nxt
            self._trans[i] = T
        return self._trans[i]

    def strip(self, g: np.ndarray, start: int = 0):
        for lvl in range(start, len(self.base)):
            beta = int(g[self.base[lvl]])
            T = self.transversal(lvl)
            if beta not in T:
                return g, lvl
            g = mul(g, inverse(T[beta]))
        return g, len(self.base)

    def _schreier_sims(self):
        for s in self.strong:
            if all(s[b] == b for b in self.base):
                self.base.append(_first_moved(s))
        i = len(self.base) - 1
        while i >= 0:
            T = self.transversal(i)
            gens = self._level_gens(i)
            found = None
            for beta in sorted(T):
                u = T[beta]
                for s in gens:
                    sg = mul(mul(u, s), inverse(T[int(s[beta])]))
                    if is_identity(sg):
                        continue
                    h, j = self.strip(sg, i + 1)
                    if j < len(self.base) or not is_identity(h):
                        found = (h, j)
                        break
                if found:
                    break
            if found is None:
                i -= 1
                continue
            h, j = found
            if j == len(self.base):
                self.base.append(_first_moved(h))
            self.strong.append(h)
            self._trans = {k: v for k, v in self._trans.items() if k <= i}
            i = j

    # -- queries ----------------------------------------------------------

    def order(self) -> int:
        out = 1
        for i in range(len(self.base)):
            out *= len(self.transversal(i))
        return out

    def contains(self, g) -> bool:
        g = np.asarray(g, dtype=np.int64)
        if g.shape != (self.degree,) or not is_permutation(g):
            return False
        h, j = self.strip(g)
        return j == len(self.base) and is_identity(h)

    __contains__ = contains

    def orbits(self) -> list[tuple[int, ...]]:
        return orbit_partition(self.degree, self.strong)

    def orbit(self, v: int) -> tuple[int, ...]:
        for orb in self.orbits():
            if v in orb:
                return orb
        raise ValueError(v)

    def stabilizer(self, v: int) -> "PermGroup":
        v = int(v)
        if self.base and self.base[0] == v:
            src = self
        else:
            src = PermGroup(self.degree, self.strong, base_prefix=[v])
        gens = [s for s in src.strong if s[v] == v]
        return PermGroup.from_bsgs(self.degree, gens, src.base[1:])

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def group_order(P: PermGroup) -> int:
    return P.order()


def point_stabilizer(P: PermGroup, v: int) -> PermGroup:
    return P.stabilizer(v)


def orbits(P: PermGroup) -> list[tuple[int, ...]]:
    return P.orbits()
