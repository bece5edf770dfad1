"""S-systems over cyclic p-groups (p odd) and an exhaustive S-ring oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .groups import AbelianGroup, GroupError, is_prime, mult_order
from .sring import SRing, make_sring, verify_sring

SSYSTEM_CAP = 3 ** 7
BRUTE_FORCE_CAP = 10


class SSystemError(GroupError):
    pass


@dataclass(frozen=True)
class SSystem:
    p: int
    e: int
    d: tuple[int, ...]
    pi: tuple[tuple[int, ...], ...]

    def __str__(self):
        blocks = ",".join("{" + ",".join(map(str, I)) + "}" for I in self.pi)
        return f"({','.join(map(str, self.d))};{{{blocks}}})"


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def p_prime_part(n: int, p: int) -> int:
    return n // p_part(n, p)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def discrete_partition(e: int) -> tuple[tuple[int, ...], ...]:
    return tuple((i,) for i in range(1, e + 1))


def interval_partitions(e: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All interval partitions of {1..e}, one per composition of e."""
    for cuts in itertools.product((False, True), repeat=e - 1):
        blocks, start = [], 1
        for i, cut in enumerate(cuts, start=1):
            if cut:
                blocks.append(tuple(range(start, i + 1)))
                start = i + 1
        blocks.append(tuple(range(start, e + 1)))
        yield tuple(blocks)


def _check_prime(p: int):
    if p % 2 == 0 or not is_prime(p):
        raise SSystemError(f"p={p} must be an odd prime")


@dataclass
class SSystemCheck:
    ok: bool
    condition: Optional[int] = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def validate_ssystem(s: SSystem, as_printed: bool = False) -> SSystemCheck:
    """Conditions: (0) shape, divisibility, interval partition; then (1)-(3).

    Condition (4) is an addition: if {i} is a singleton block and
    (d_i)_p = p^j with 1 <= j < i - 1, then j and j + 1 lie in different
    blocks.  The K_i-orbits on layer i have radical of order p^j, so the
    elements of order <= p^j must form a union of basic sets; without (4) the
    partition for e.g. (2,6,6;{{1,2},{3}}) over Z27 fails the product axiom.
    ``as_printed=True`` skips (4).
    """
    p, e = s.p, s.e
    _check_prime(p)
    if e < 1 or len(s.d) != e:
        return SSystemCheck(False, 0, "need e >= 1 and one divisor per layer")
    for i, di in enumerate(s.d, start=1):
        if di < 1 or (p ** (i - 1) * (p - 1)) % di:
            return SSystemCheck(False, 0, f"d_{i}={di} does not divide {p ** (i - 1) * (p - 1)}")
    if s.pi not in set(interval_partitions(e)):
        return SSystemCheck(False, 0, "not an interval partition of [e]")
    for I in s.pi:
        if len(I) > 1:
            for i in I:
                if s.d[i - 1] != p ** (i - 1) * (p - 1):
                    return SSystemCheck(False, 1, f"d_{i} must be {p ** (i - 1) * (p - 1)} on block {I}")
    for i in range(2, e + 1):
        a, b = s.d[i - 2], s.d[i - 1]
        if p_part(a, p) > p_part(b, p):
            return SSystemCheck(False, 2, f"(d_{i - 1})_p > (d_{i})_p")
        if p_part(b, p) < p ** (i - 1) and p_prime_part(a, p) != p_prime_part(b, p):
            return SSystemCheck(False, 3, f"(d_{i - 1})_p' != (d_{i})_p' while (d_{i})_p < p^{i - 1}")
    if not as_printed:
        block_of = {i: I for I in s.pi for i in I}
        for I in s.pi:
            if len(I) > 1:
                continue
            i = I[0]
            j = _log_p(p_part(s.d[i - 1], p), p)
            if 1 <= j < i - 1 and block_of[j] == block_of[j + 1]:
                return SSystemCheck(False, 4, f"(d_{i})_p = p^{j} but layers {j} and {j + 1} share a block")
    return SSystemCheck(True)


def _log_p(q: int, p: int) -> int:
    j = 0
    while q > 1:
        q //= p
        j += 1
    return j


def smallest_primitive_root(n: int) -> int:
    """Least generator of the unit group mod n = p^i (p odd)."""
    if n <= 2:
        return 1
    phi = sum(1 for k in range(1, n) if np.gcd(k, n) == 1)
    for g in range(2, n):
        if np.gcd(g, n) == 1 and mult_order(g, n) == phi:
            return g
    raise SSystemError(f"no primitive root mod {n}")


def _cyclic_pe(G: AbelianGroup, p: int, e: int):
    if not G.is_cyclic() or G.order != p ** e or len(G.factors) != 1:
        raise SSystemError(f"{G.name} is not written as Z_{p ** e}")


def build_ssystem_partition(G: AbelianGroup, s: SSystem) -> SRing:
    """The partition Delta: identity, merged layers for long blocks, and
    K_i-orbits on the layer of elements of order p^i for singleton blocks."""
    check = validate_ssystem(s)
    if not check:
        raise SSystemError(f"invalid S-system {s}: condition {check.condition}: {check.detail}")
    p, e = s.p, s.e
    _cyclic_pe(G, p, e)
    n = p ** e
    classes = [[0]]
    for I in s.pi:
        if len(I) > 1:
            classes.append([x for i in I for x in layer(p, e, i)])
            continue
        i = I[0]
        mod = p ** i
        g = smallest_primitive_root(mod)
        k = pow(g, (p ** (i - 1) * (p - 1)) // s.d[i - 1], mod)
        seen = set()
        for x in layer(p, e, i):
            if x in seen:
                continue
            orb, y = [], x
            while y not in seen:
                seen.add(y)
                orb.append(y)
                y = (y * k) % n
            classes.append(orb)
    return make_sring(G, classes)


def layer(p: int, e: int, i: int) -> list[int]:
    """Elements of Z_{p^e} of order exactly p^i."""
    step = p ** (e - i)
    return [x for x in range(step, p ** e, step) if x % (step * p)]


def enumerate_ssystems(p: int, e: int, cap: int = SSYSTEM_CAP, as_printed: bool = False) -> list[SSystem]:
    _check_prime(p)
    if e < 1:
        raise SSystemError("e must be >= 1")
    if p ** e > cap:
        raise SSystemError(f"p^e = {p ** e} exceeds the cap {cap}")
    choices = [divisors(p ** (i - 1) * (p - 1)) for i in range(1, e + 1)]
    out = set()
    for d in itertools.product(*choices):
        for pi in interval_partitions(e):
            s = SSystem(p, e, tuple(d), pi)
            if validate_ssystem(s, as_printed):
                out.add(s)
    return sorted(out, key=lambda s: (s.d, s.pi))


def ssystem_rings(G: AbelianGroup) -> dict[SRing, list[SSystem]]:
    """Map each S-ring built from an S-system over Z_{p^e} to the systems producing it."""
    n = G.order
    p = next((q for q in range(3, n + 1) if n % q == 0), None)
    if p is None or not is_prime(p):
        raise SSystemError(f"{G.name} is not a cyclic group of odd prime-power order")
    e = 0
    m = n
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise SSystemError(f"{G.name} is not a cyclic p-group")
    out: dict[SRing, list[SSystem]] = {}
    for s in enumerate_ssystems(p, e):
        out.setdefault(build_ssystem_partition(G, s), []).append(s)
    return out


def brute_force_srings(G: AbelianGroup, cap: int = BRUTE_FORCE_CAP) -> list[SRing]:
    """Every S-ring over G, by backtracking over set partitions of G minus the
    identity.  Partial assignments are pruned when the induced map
    class(x) -> class(-x) stops being a well-defined involution."""
    n = G.order
    if n > cap:
        raise SSystemError(f"|G| = {n} exceeds the brute-force cap {cap}")
    if n == 1:
        return [make_sring(G, [[0]])]
    neg = [int(v) for v in G.neg_table]
    assign = [-1] * n
    assign[0] = 0
    inv_of: dict[int, int] = {0: 0}
    results = []

    def place(x: int, nclasses: int):
        if x == n:
            classes: dict[int, list[int]] = {}
            for y, c in enumerate(assign):
                classes.setdefault(c, []).append(y)
            P = list(classes.values())
            if verify_sring(G, P).ok:
                results.append(make_sring(G, P))
            return
        y = neg[x]
        for c in range(1, nclasses + 1):
            assign[x] = c
            added = []
            ok = True
            if y <= x:
                cy = assign[y]
                for a, b in ((c, cy), (cy, c)):
                    if a in inv_of:
                        if inv_of[a] != b:
                            ok = False
                            break
                    else:
                        inv_of[a] = b
                        added.append(a)
            if ok:
                place(x + 1, max(nclasses, c + 1))
            for a in added:
                del inv_of[a]
        assign[x] = -1

    place(1, 1)
    return sorted(results, key=lambda A: A.classes)


def partition_key(A: SRing) -> tuple:
    return A.classes
