"""Connection sets, Cayley graphs and the canonical double cover."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .groups import AbelianGroup, GroupError, make_group


class ConnectionSetError(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class ConnectionSet:
    group: AbelianGroup
    elements: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, ConnectionSet) and self.group == other.group and self.elements == other.elements

    def __hash__(self):
        return hash((self.group, self.elements))

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return bool(self.mask[x])

    @cached_property
    def mask(self) -> np.ndarray:
        return self.group.mask(self.elements)

    def __repr__(self):
        return f"ConnectionSet({self.group.name}, {list(self.elements)})"


def make_connection_set(G: AbelianGroup, elems: Iterable[int]) -> ConnectionSet:
    elems = sorted(set(int(x) for x in elems))
    for x in elems:
        if not 0 <= x < G.order:
            raise ConnectionSetError(f"element {x} not in {G.name}")
    if 0 in elems:
        raise ConnectionSetError("identity in connection set")
    members = set(elems)
    for x in elems:
        if G.neg(x) not in members:
            raise ConnectionSetError(f"connection set not inverse-closed: {x} present, {G.neg(x)} missing")
    return ConnectionSet(G, tuple(elems))


class Graph:
    """Simple undirected graph on vertices 0..n-1 backed by a dense 0/1 matrix.

    ``indptr``/``indices`` give the CSR neighbour lists used by the jitted
    refinement kernel; ``rows`` gives per-vertex neighbourhood bitsets.
    """

    def __init__(self, adj: np.ndarray):
        adj = np.asarray(adj, dtype=np.uint8)
        n = adj.shape[0]
        if adj.shape != (n, n):
            raise ValueError("adjacency matrix must be square")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix must be symmetric")
        if adj.diagonal().any():
            raise ValueError("self-loops are not allowed")
        adj.setflags(write=False)
        self.adj = adj
        self.n = n

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = np.zeros((n, n), dtype=np.uint8)
        for u, v in edges:
            adj[u, v] = adj[v, u] = 1
        return cls(adj)

    @cached_property
    def indptr(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.adj.sum(axis=1, dtype=np.int64))))

    @cached_property
    def indices(self) -> np.ndarray:
        return np.nonzero(self.adj)[1].astype(np.int64)

    @cached_property
    def rows(self) -> list[int]:
        weights = 1 << np.arange(self.n, dtype=object)
        return [int((row.astype(object) * weights).sum()) for row in self.adj]

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1, dtype=np.int64)

    def num_edges(self) -> int:
        return int(self.adj.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self.adj))
        return list(zip(us.tolist(), vs.tolist()))

    def is_automorphism(self, perm) -> bool:
        perm = np.asarray(perm)
        return bool(np.array_equal(self.adj[np.ix_(perm, perm)], self.adj))

    def __eq__(self, other):
        return isinstance(other, Graph) and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash(self.adj.tobytes())

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges()})"


def build_cayley(G: AbelianGroup, S: ConnectionSet) -> Graph:
    adj = np.zeros((G.order, G.order), dtype=np.uint8)
    x = np.arange(G.order)
    for s in S:
        adj[x, G.add_table[:, s]] = 1
    return Graph(adj)


def double_cover_group(H: AbelianGroup) -> AbelianGroup:
    """G = H x Z2; the element (h, t) has index 2h + t, so a = 1 and H = evens."""
    return AbelianGroup(H.factors + (2,))


def lift(h: int, t: int = 1) -> int:
    return 2 * int(h) + t


def double_cover(H: AbelianGroup, S: ConnectionSet):
    """Return (G, Cay(G, S x {1})) with G = H x Z2."""
    G = double_cover_group(H)
    Sa = make_connection_set(G, [lift(s) for s in S])
    return G, build_cayley(G, Sa)


def canonical_double_cover(graph: Graph) -> Graph:
    """Gamma x K2 built directly: (u,0) ~ (v,1) for every edge uv, vertex (v,i) -> 2v+i."""
    n = graph.n
    adj = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    us, vs = np.nonzero(graph.adj)
    adj[2 * us, 2 * vs + 1] = 1
    adj[2 * vs + 1, 2 * us] = 1
    return Graph(adj)


class GraphProperties(NamedTuple):
    connected: bool
    bipartite: bool


def graph_properties(graph: Graph) -> GraphProperties:
    n = graph.n
    color = np.full(n, -1, dtype=np.int64)
    bipartite = True
    components = 0
    for root in range(n):
        if color[root] >= 0:
            continue
        components += 1
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in graph.neighbors(u):
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    bipartite = False
    return GraphProperties(components <= 1, bipartite)


def find_twins(graph: Graph):
    """Some pair u < v with equal open neighbourhoods, or None."""
    seen = {}
    for v, row in enumerate(graph.rows):
        if row in seen:
            return seen[row], v
        seen[row] = v
    return None


def cayley_twin_shifts(G: AbelianGroup, S: ConnectionSet) -> list[int]:
    """Non-identity g with S + g = S; x and x+g are then twins."""
    members = S.mask
    out = []
    for g in range(1, G.order):
        if all(members[G.add(s, g)] for s in S):
            out.append(g)
    return out


def cyclic(n: int) -> AbelianGroup:
    return make_group([n])
