"""Primary keys, key partitions and generalized multipliers for Z_{2p^e}.

In H = Z_{2p^e} the identity is 0, the involution is b = p^e, and H_0 (the
subgroup of order p^e) is the set of even residues.  An element y decomposes
uniquely as y = 2x + t*p^e with x mod p^e and t in {0, 1}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator

import numpy as np

from .groups import AbelianGroup, GroupError, is_prime, split_2pe


class KeySpaceError(GroupError):
    pass


@dataclass(frozen=True)
class PrimaryKey:
    p: int
    e: int
    k: tuple[int, ...]

    def __post_init__(self):
        if len(self.k) != self.e:
            raise KeySpaceError("key length must equal e")
        for i, ki in enumerate(self.k, start=1):
            if not 0 <= ki <= i - 1:
                raise KeySpaceError(f"k_{i}={ki} outside [0, {i - 1}]")
        for i in range(1, self.e):
            if self.k[i - 1] > self.k[i]:
                raise KeySpaceError("key entries must be non-decreasing")

    def __str__(self):
        return "(" + ",".join(map(str, self.k)) + ")"

    def join(self, other: "PrimaryKey") -> "PrimaryKey":
        return PrimaryKey(self.p, self.e, tuple(max(a, b) for a, b in zip(self.k, other.k)))

    def meet(self, other: "PrimaryKey") -> "PrimaryKey":
        return PrimaryKey(self.p, self.e, tuple(min(a, b) for a, b in zip(self.k, other.k)))

    def __le__(self, other):
        return all(a <= b for a, b in zip(self.k, other.k))


@dataclass(frozen=True)
class KeyLattice:
    p: int
    e: int
    keys: tuple[PrimaryKey, ...]

    def join(self, a: PrimaryKey, b: PrimaryKey) -> PrimaryKey:
        return a.join(b)

    def meet(self, a: PrimaryKey, b: PrimaryKey) -> PrimaryKey:
        return a.meet(b)

    def __iter__(self):
        return iter(self.keys)

    def __len__(self):
        return len(self.keys)


def _check_pe(p: int, e: int):
    if p % 2 == 0 or not is_prime(p):
        raise KeySpaceError(f"p={p} must be an odd prime")
    if e < 1:
        raise KeySpaceError("e must be >= 1")


def key_lattice(p: int, e: int) -> KeyLattice:
    _check_pe(p, e)
    out = []
    for k in itertools.product(*[range(i) for i in range(1, e + 1)]):
        if all(k[i - 1] <= k[i] for i in range(1, e)):
            out.append(PrimaryKey(p, e, tuple(k)))
    return KeyLattice(p, e, tuple(sorted(out, key=lambda q: q.k)))


def group_params(H: AbelianGroup) -> tuple[int, int]:
    """(p, e) for H cyclic of order 2p^e written as a single factor."""
    pe = split_2pe(H.order)
    if pe is None or len(H.factors) != 1:
        raise KeySpaceError(f"{H.name} is not Z_(2p^e) with p an odd prime")
    return pe


def p_level(n: int, y: int, p: int) -> int:
    """i such that the order of y in Z_n has p-part p^i."""
    o = n // gcd(y, n)
    i = 0
    while o % p == 0:
        o //= p
        i += 1
    return i


def key_partition(H: AbelianGroup, k: PrimaryKey) -> list[tuple[int, ...]]:
    """Classes P_{k_i} + x for x of order p^i or 2p^i; 0 and b are singletons."""
    p, e = group_params(H)
    if (k.p, k.e) != (p, e):
        raise KeySpaceError(f"key {k} is not a key for {H.name}")
    n = H.order
    seen = np.zeros(n, dtype=bool)
    classes = []
    for x in range(n):
        if seen[x]:
            continue
        i = p_level(n, x, p)
        if i == 0:
            cls = (x,)
        else:
            step = n // p ** k.k[i - 1]
            cls = tuple(sorted((x + j * step) % n for j in range(p ** k.k[i - 1])))
        seen[list(cls)] = True
        classes.append(cls)
    return sorted(classes)


def is_key_subset(H: AbelianGroup, S: Iterable[int], k: PrimaryKey) -> bool:
    mask = H.mask(S)
    return all(mask[list(c)].all() or not mask[list(c)].any() for c in key_partition(H, k))


def key_of_set(H: AbelianGroup, S: Iterable[int]) -> PrimaryKey:
    """The greatest key k for which S is a union of classes of the key partition."""
    p, e = group_params(H)
    S = sorted(set(int(x) for x in S))
    if not S:
        raise KeySpaceError("key of the empty set")
    n = H.order
    mask = H.mask(S)
    levels = np.array([p_level(n, y, p) for y in range(n)])
    c = []
    for i in range(1, e + 1):
        best = 0
        for j in range(1, i):
            step = n // p ** j
            members = np.flatnonzero(levels == i)
            # S restricted to level i must be invariant under translation by step
            if all(mask[(y + step) % n] == mask[y] for y in members):
                best = j
        c.append(best)
    k = [min(c[j] for j in range(i, e)) for i in range(e)]
    return PrimaryKey(p, e, tuple(k))


# -- multipliers ------------------------------------------------------------


@dataclass(frozen=True)
class GeneralizedMultiplier:
    m: tuple[int, ...]

    def __post_init__(self):
        if any(mi <= 0 for mi in self.m):
            raise KeySpaceError("multiplier entries must be positive")

    def __str__(self):
        return "(" + ",".join(map(str, self.m)) + ")"

    def __iter__(self):
        return iter(self.m)

    def __len__(self):
        return len(self.m)

    def all_odd(self) -> bool:
        return all(mi % 2 for mi in self.m)


def digits(x: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def digit_map(p: int, e: int, m, x: int) -> int:
    """f_m(x) = sum_i m_{e-i} x_i p^i mod p^e over the p-adic digits x_i of x."""
    m = tuple(m)
    if len(m) != e:
        raise KeySpaceError("multiplier length must equal e")
    xs = digits(int(x), p, e)
    return sum(m[e - i - 1] * xs[i] * p ** i for i in range(e)) % p ** e


def digit_map_table(p: int, e: int, m) -> np.ndarray:
    return np.array([digit_map(p, e, m, x) for x in range(p ** e)], dtype=np.int64)


def phi_map(H: AbelianGroup, m, literal: bool = False) -> np.ndarray:
    """The permutation phi_m of H as an image array.

    Default: y = 2x + t*p^e maps to 2 f(x) + t*p^e, i.e. f acts on the odd
    coordinate and the Z2 coordinate is kept.  ``literal=True`` instead maps
    2x -> 2 f(x) and 2x + 1 -> 2 f(x) + 1 (kept only for comparison).
    """
    p, e = group_params(H)
    m = tuple(m)
    if any(mi % 2 == 0 for mi in m):
        raise KeySpaceError(f"multiplier {m} has an even entry")
    if any(mi % p == 0 for mi in m):
        raise KeySpaceError(f"multiplier {m} has an entry divisible by {p}")
    n, q = H.order, p ** e
    f = digit_map_table(p, e, m)
    out = np.empty(n, dtype=np.int64)
    for y in range(n):
        if literal:
            x, t = y // 2, y % 2
            out[y] = (2 * f[x] + t) % n
        else:
            t = y % 2
            x = ((y - t * q) % n) // 2
            out[y] = (2 * f[x] + t * q) % n
    return out


def apply_map(perm: np.ndarray, S: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(int(perm[x]) for x in S))


def multipliers_for_key(p: int, e: int, k: PrimaryKey) -> Iterator[GeneralizedMultiplier]:
    """All generalized multipliers in Z**(k), one per class of m_i mod p^i,
    each entry taken as an odd representative in [1, 2p^i)."""
    _check_pe(p, e)
    if (k.p, k.e) != (p, e):
        raise KeySpaceError("key does not match (p, e)")
    units = [[u for u in range(1, p ** i) if u % p] for i in range(1, e + 1)]

    def rec(i: int, prefix: list[int]):
        if i > e:
            yield GeneralizedMultiplier(tuple(u if u % 2 else u + p ** (j + 1) for j, u in enumerate(prefix)))
            return
        for u in units[i - 1]:
            if i >= 2:
                mod = p ** (i - 1 - k.k[i - 1])
                if (u - prefix[-1]) % mod:
                    continue
            yield from rec(i + 1, prefix + [u])

    yield from rec(1, [])


def in_key_multipliers(p: int, e: int, k: PrimaryKey, m) -> bool:
    m = tuple(m)
    if len(m) != e or any(mi % p == 0 for mi in m):
        return False
    return all((m[i - 1] - m[i - 2]) % p ** (i - 1 - k.k[i - 1]) == 0 for i in range(2, e + 1))


def class_p_level(H: AbelianGroup, X: Iterable[int]) -> int:
    """i with |<X>|_p = p^i."""
    p, _ = group_params(H)
    n = H.order
    g = 0
    for x in X:
        g = gcd(g, int(x))
    return p_level(n, g if g else 0, p) if g else 0


def prop57_violations(p: int, e: int, literal: bool = False) -> list[tuple]:
    """For every key k, odd m in Z**(k) and class X of the key partition,
    check phi_m(X) = m_i * X where p^i is the p-part of |<X>|."""
    H = AbelianGroup((2 * p ** e,))
    n = H.order
    out = []
    for k in key_lattice(p, e):
        classes = key_partition(H, k)
        for m in multipliers_for_key(p, e, k):
            phi = phi_map(H, m.m, literal=literal)
            for X in classes:
                i = class_p_level(H, X)
                mult = m.m[i - 1] if i >= 1 else 1
                want = tuple(sorted((mult * x) % n for x in X))
                if apply_map(phi, X) != want:
                    out.append((k, m, X))
    return out
