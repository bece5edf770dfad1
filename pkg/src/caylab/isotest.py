"""Isomorphism of circulants of order 2p^e: key plus generalized-multiplier
criterion, and a search-based oracle."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .autsearch import find_isomorphism
from .cayley import ConnectionSet, Graph, build_cayley, make_connection_set
from .groups import AbelianGroup
from .keys import (
    GeneralizedMultiplier,
    PrimaryKey,
    group_params,
    key_of_set,
    multipliers_for_key,
    phi_map,
)


@dataclass
class IsoResult:
    isomorphic: bool
    witness_multiplier: Optional[GeneralizedMultiplier] = None
    bijection: Optional[np.ndarray] = None
    key_S: Optional[PrimaryKey] = None
    key_S2: Optional[PrimaryKey] = None

    def __bool__(self):
        return self.isomorphic

    def to_dict(self) -> dict:
        out = {"isomorphic": self.isomorphic}
        if self.witness_multiplier is not None:
            out["witness_multiplier"] = list(self.witness_multiplier.m)
        out["keys"] = [str(self.key_S) if self.key_S else None, str(self.key_S2) if self.key_S2 else None]
        return out


@lru_cache(maxsize=4096)
def _phi_cached(n: int, m: tuple[int, ...], literal: bool) -> np.ndarray:
    out = phi_map(AbelianGroup((n,)), m, literal=literal)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=256)
def _multipliers(p: int, e: int, k: PrimaryKey) -> tuple[GeneralizedMultiplier, ...]:
    return tuple(multipliers_for_key(p, e, k))


def _as_set(H: AbelianGroup, S) -> ConnectionSet:
    return S if isinstance(S, ConnectionSet) else make_connection_set(H, S)


def muzychuk_iso(H: AbelianGroup, S, S2, literal: bool = False) -> IsoResult:
    """Cay(H,S) ~ Cay(H,S2) iff S and S2 have the same key k and some
    multiplier m in Z**(k) has phi_m(S) = S2.  Multipliers are scanned in
    canonical order and the first witness is returned."""
    p, e = group_params(H)
    S, S2 = _as_set(H, S), _as_set(H, S2)
    if len(S) != len(S2):
        k1 = key_of_set(H, S.elements) if len(S) else None
        k2 = key_of_set(H, S2.elements) if len(S2) else None
        return IsoResult(False, key_S=k1, key_S2=k2)
    if not len(S):
        return IsoResult(True, GeneralizedMultiplier((1,) * e))
    k1, k2 = key_of_set(H, S.elements), key_of_set(H, S2.elements)
    if k1 != k2:
        return IsoResult(False, key_S=k1, key_S2=k2)
    target = S2.elements
    src = np.array(S.elements, dtype=np.int64)
    for m in _multipliers(p, e, k1):
        img = _phi_cached(H.order, m.m, literal)[src]
        if tuple(sorted(img.tolist())) == target:
            return IsoResult(True, m, key_S=k1, key_S2=k2)
    return IsoResult(False, key_S=k1, key_S2=k2)


def is_isomorphism(g1: Graph, g2: Graph, perm) -> bool:
    """Edge-by-edge check that perm (an image array) maps g1 onto g2."""
    perm = np.asarray(perm, dtype=np.int64)
    if g1.n != g2.n or perm.shape != (g1.n,):
        return False
    if not np.array_equal(np.sort(perm), np.arange(g1.n)):
        return False
    return bool(np.array_equal(g2.adj[np.ix_(perm, perm)], g1.adj))


def brute_force_iso(g1: Graph, g2: Graph) -> Optional[np.ndarray]:
    """An explicit isomorphism g1 -> g2 (verified) or None."""
    perm = find_isomorphism(g1, g2)
    if perm is None:
        return None
    if not is_isomorphism(g1, g2, perm):  # pragma: no cover - search only returns verified leaves
        raise AssertionError("search returned a non-isomorphism")
    return perm


def circulant_iso_oracle(H: AbelianGroup, S, S2) -> IsoResult:
    S, S2 = _as_set(H, S), _as_set(H, S2)
    perm = brute_force_iso(build_cayley(H, S), build_cayley(H, S2))
    return IsoResult(perm is not None, bijection=perm)


def phi_is_graph_isomorphism(H: AbelianGroup, S, m: Iterable[int]) -> bool:
    """phi_m maps Cay(H,S) onto Cay(H, phi_m(S)) (edge check)."""
    S = _as_set(H, S)
    phi = phi_map(H, tuple(m))
    S2 = make_connection_set(H, [int(phi[x]) for x in S])
    return is_isomorphism(build_cayley(H, S), build_cayley(H, S2), phi)


@dataclass
class PairOutcome:
    S: tuple[int, ...]
    S2: tuple[int, ...]
    criterion: bool
    oracle: bool
    witness_ok: bool = True

    @property
    def agree(self) -> bool:
        return self.criterion == self.oracle and self.witness_ok


def iso_agreement(H: AbelianGroup, pairs) -> list[PairOutcome]:
    """Run the multiplier criterion and the search oracle on each pair,
    re-verifying every witness.  Graphs are built once per distinct set."""
    graphs: dict[tuple[int, ...], Graph] = {}

    def graph(S):
        if S not in graphs:
            graphs[S] = build_cayley(H, make_connection_set(H, S))
        return graphs[S]

    out = []
    for S, S2 in pairs:
        S, S2 = tuple(S), tuple(S2)
        res = muzychuk_iso(H, S, S2)
        g1, g2 = graph(S), graph(S2)
        perm = brute_force_iso(g1, g2)
        ok = True
        if res.witness_multiplier is not None:
            img = _phi_cached(H.order, res.witness_multiplier.m, False)
            ok = tuple(sorted(int(img[x]) for x in S)) == S2
        if perm is not None:
            ok = ok and is_isomorphism(g1, g2, perm)
        out.append(PairOutcome(S, S2, res.isomorphic, perm is not None, ok))
    return out


def sampled_pairs(H: AbelianGroup, k: int, seed: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """k seeded ordered pairs of equal-size connection sets.

    A third are independent random sets of one size, a third are (S, phi_m(S))
    for a random multiplier (usually outside Z**(key of S), so the images need
    not be isomorphic) and a third are (S, S+b) when S+b is a connection set.
    """
    import random

    from .corpus import inverse_classes, set_from_mask

    p, e = group_params(H)
    rng = random.Random(seed)
    n, b = H.order, p ** e
    r = len(inverse_classes(H))
    out = []
    seen = set()
    while len(out) < k:
        kind = len(out) % 3
        S = set_from_mask(H, rng.randrange(1, 1 << r))
        if kind == 0:
            size = len(S)
            for _ in range(1000):
                S2 = set_from_mask(H, rng.randrange(1, 1 << r))
                if len(S2) == size:
                    break
            else:
                continue
        elif kind == 1:
            units = [[u for u in range(1, 2 * p ** i, 2) if u % p] for i in range(1, e + 1)]
            m = tuple(rng.choice(us) for us in units)
            phi = _phi_cached(n, m, False)
            S2 = tuple(sorted(int(phi[x]) for x in S))
            if any((n - x) % n not in S2 for x in S2):
                continue  # phi_m is not additive, so the image may not be inverse-closed
        else:
            if b in S:
                continue
            S2 = tuple(sorted((x + b) % n for x in S))
        if (S, S2) in seen:
            continue
        seen.add((S, S2))
        out.append((S, S2))
    return out
