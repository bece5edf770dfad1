"""Instance generation: inverse-closed connection sets as bit masks.

The inverse classes of G (pairs {x, -x} and involutions, identity excluded)
are listed by least element; bit j of a mask selects class j.
"""

from __future__ import annotations

import random
from functools import lru_cache
from math import gcd
from typing import Callable, Iterator, Optional

from .cayley import build_cayley, graph_properties, make_connection_set
from .groups import AbelianGroup


@lru_cache(maxsize=64)
def inverse_classes(G: AbelianGroup) -> tuple[tuple[int, ...], ...]:
    seen = set()
    out = []
    for x in range(1, G.order):
        if x in seen:
            continue
        y = G.neg(x)
        cls = tuple(sorted({x, y}))
        seen.update(cls)
        out.append(cls)
    return tuple(out)


def num_masks(G: AbelianGroup) -> int:
    return 1 << len(inverse_classes(G))


def set_from_mask(G: AbelianGroup, mask: int) -> tuple[int, ...]:
    out = []
    for j, cls in enumerate(inverse_classes(G)):
        if mask >> j & 1:
            out.extend(cls)
    return tuple(sorted(out))


def mask_from_set(G: AbelianGroup, S) -> int:
    S = set(int(x) for x in S)
    mask = 0
    for j, cls in enumerate(inverse_classes(G)):
        if cls[0] in S:
            mask |= 1 << j
    return mask


def all_sets(G: AbelianGroup) -> Iterator[tuple[int, ...]]:
    for mask in range(num_masks(G)):
        yield set_from_mask(G, mask)


def properties(G: AbelianGroup, S) -> tuple[bool, bool]:
    props = graph_properties(build_cayley(G, make_connection_set(G, S)))
    return props.connected, props.bipartite


def in_scope(G: AbelianGroup, S) -> bool:
    connected, bipartite = properties(G, S)
    return connected and not bipartite


def connected(G: AbelianGroup, S) -> bool:
    return properties(G, S)[0]


def sample_sets(G: AbelianGroup, k: int, seed: int,
                accept: Optional[Callable[[AbelianGroup, tuple], bool]] = None) -> list[tuple[int, ...]]:
    """k distinct accepted sets, drawing masks uniformly without replacement
    from a seeded generator (in draw order)."""
    rng = random.Random(seed)
    total = num_masks(G)
    drawn = set()
    out = []
    while len(out) < k and len(drawn) < total:
        mask = rng.randrange(total)
        if mask in drawn:
            continue
        drawn.add(mask)
        S = set_from_mask(G, mask)
        if accept is None or accept(G, S):
            out.append(S)
    return out


def unit_orbit_representative(G: AbelianGroup, S) -> tuple[int, ...]:
    """Least image of S under multiplication by units (for --dedupe)."""
    n = G.exponent
    best = None
    for m in range(1, max(n, 2)):
        if gcd(m, n) != 1:
            continue
        img = tuple(sorted(G.scale(m, S)))
        if best is None or img < best:
            best = img
    return best


def dedupe_by_units(G: AbelianGroup, sets) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for S in sets:
        rep = unit_orbit_representative(G, S)
        if rep not in seen:
            seen.add(rep)
            out.append(S)
    return out


def wilson_type_sets(H: AbelianGroup, p: int, e: int, k: int, seed: int) -> list[tuple[int, ...]]:
    """Random connected non-bipartite S over Z_{2p^e} whose even part is a
    union of cosets of the order-p subgroup (instances with a radical in H_0)."""
    rng = random.Random(seed)
    n = H.order
    step = n // p  # generator of the order-p subgroup (an even residue)
    evens = [x for x in range(2, n, 2)]
    odds = [x for x in range(1, n, 2) if x != p ** e]
    out, seen = [], set()
    tries = 0
    while len(out) < k and tries < 100 * k:
        tries += 1
        reps = {min((x + j * step) % n for j in range(p)) for x in evens if rng.random() < 0.3}
        even_part = {(x + j * step) % n for x in reps for j in range(p)} - {0}
        even_part |= {(-x) % n for x in even_part}
        even_part = {x for x in even_part if all((x + j * step) % n in even_part for j in range(p))}
        odd_part = set()
        for x in odds:
            if x <= n - x and rng.random() < 0.3:
                odd_part |= {x, n - x}
        if rng.random() < 0.5:
            odd_part.add(p ** e)
        S = tuple(sorted(even_part | odd_part))
        if S in seen or not S:
            continue
        seen.add(S)
        if in_scope(H, S):
            out.append(S)
    return out


def twisted_sets(H: AbelianGroup, p: int, e: int, k: int, seed: int) -> list[tuple[int, ...]]:
    """Random S = T u (m T + b) with m an odd unit and T a union of
    <m^2, -1>-orbits inside H_0 minus 0.  Then S + b = m S, so Cay(H,S) and
    Cay(H,S+b) are isomorphic (instances of the second instability condition)."""
    rng = random.Random(seed)
    n, b = H.order, p ** e
    units = [m for m in range(1, n, 2) if gcd(m, n) == 1]
    out, seen = [], set()
    tries = 0
    while len(out) < k and tries < 100 * k:
        tries += 1
        m = rng.choice(units)
        mults = {1}
        frontier = [1]
        while frontier:
            nxt = []
            for u in frontier:
                for g in (m * m % n, n - 1):
                    v = u * g % n
                    if v not in mults:
                        mults.add(v)
                        nxt.append(v)
            frontier = nxt
        orbits, done = [], set()
        for x in range(2, n, 2):
            if x not in done:
                orb = {u * x % n for u in mults}
                done |= orb
                orbits.append(orb)
        T = set()
        for orb in orbits:
            if rng.random() < 0.4:
                T |= orb
        if not T:
            continue
        S = tuple(sorted(T | {(m * t + b) % n for t in T}))
        if S in seen:
            continue
        seen.add(S)
        if in_scope(H, S):
            out.append(S)
    return out


def structured_unstable_sets(H: AbelianGroup, p: int, e: int, k: int, seed: int) -> list[tuple[int, ...]]:
    """About half Wilson-type and half twisted instances, deduplicated."""
    a = wilson_type_sets(H, p, e, k // 2, seed) if e > 1 else []
    b = twisted_sets(H, p, e, k - len(a), seed + 1)
    seen, out = set(), []
    for S in a + b:
        if S not in seen:
            seen.add(S)
            out.append(S)
    return out


def equal_degree_pairs(G: AbelianGroup) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ordered pairs of connection sets of equal size."""
    by_size: dict[int, list[tuple[int, ...]]] = {}
    for S in all_sets(G):
        by_size.setdefault(len(S), []).append(S)
    for size in sorted(by_size):
        for S in by_size[size]:
            for S2 in by_size[size]:
                yield S, S2
