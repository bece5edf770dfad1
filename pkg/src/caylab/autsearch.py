"""Individualization-refinement search for automorphisms and isomorphisms.

The first path of the search tree individualizes the least vertex of the
first non-singleton cell at each level.  Going back up that path, every other
vertex w of the target cell at level i that is not yet known to share an orbit
with the chosen vertex v_i is tried: the subtree below w is searched for a
leaf matching the first leaf.  Nodes whose refinement trace differs from the
first-path node at the same depth are pruned.  The product of the resulting
orbit lengths is |Aut|, and (first path, generators found) is a BSGS.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .cayley import Graph
from .permgroup import PermGroup

AUT_VERTEX_CAP = 128


class SearchCapError(ValueError):
    pass


class _Node:
    __slots__ = ("lab", "pos", "cell", "csize", "ncells", "trace")

    def copy(self):
        other = _Node()
        other.lab = self.lab.copy()
        other.pos = self.pos.copy()
        other.cell = self.cell.copy()
        other.csize = self.csize.copy()
        other.ncells = self.ncells
        other.trace = self.trace
        return other

    @property
    def shape(self):
        return self.cell[self.lab]

    def target_cell(self) -> int:
        sizes = self.csize[self.cell[self.lab]]
        return int(self.cell[self.lab[int(np.flatnonzero(sizes > 1)[0])]])

    def cell_members(self, c: int) -> np.ndarray:
        return self.lab[c:c + self.csize[c]]


def _root(graph: Graph, colors, use_jit) -> _Node:
    n = graph.n
    colors = np.zeros(n, dtype=np.int64) if colors is None else np.asarray(colors, dtype=np.int64)
    lab = np.lexsort((np.arange(n), colors)).astype(np.int64)
    node = _Node()
    node.lab = lab
    node.pos = np.empty(n, dtype=np.int64)
    node.pos[lab] = np.arange(n)
    node.cell = np.empty(n, dtype=np.int64)
    node.csize = np.zeros(n, dtype=np.int64)
    sc = colors[lab]
    starts = np.flatnonzero(np.concatenate(([True], sc[1:] != sc[:-1]))) if n else np.array([], dtype=np.int64)
    ends = np.concatenate((starts[1:], [n]))
    for s, e in zip(starts, ends):
        node.cell[lab[s:e]] = s
        node.csize[s] = e - s
    ncells = len(starts)
    node.ncells, node.trace = _kernels.refine(graph, node.lab, node.pos, node.cell, node.csize,
                                              starts.astype(np.int64), ncells, use_jit)
    return node


def _child(graph: Graph, node: _Node, v: int, use_jit) -> _Node:
    ch = node.copy()
    c = int(ch.cell[v])
    p = int(ch.pos[v])
    size = int(ch.csize[c])
    u = int(ch.lab[c])
    ch.lab[c], ch.lab[p] = v, u
    ch.pos[v], ch.pos[u] = c, p
    ch.csize[c] = 1
    ch.csize[c + 1] = size - 1
    ch.cell[ch.lab[c + 1:c + size]] = c + 1
    ch.ncells, ch.trace = _kernels.refine(graph, ch.lab, ch.pos, ch.cell, ch.csize,
                                          np.array([c], dtype=np.int64), node.ncells + 1, use_jit)
    return ch


def _same(node: _Node, ref: _Node) -> bool:
    return (node.ncells == ref.ncells and node.trace == ref.trace
            and np.array_equal(node.shape, ref.shape))


class _FirstPath:
    def __init__(self, graph: Graph, colors, use_jit):
        self.graph = graph
        self.use_jit = use_jit
        node = _root(graph, colors, use_jit)
        self.nodes = [node]
        self.targets: list[int] = []
        self.chosen: list[int] = []
        while node.ncells < graph.n:
            c = node.target_cell()
            v = int(node.cell_members(c).min())
            self.targets.append(c)
            self.chosen.append(v)
            node = _child(graph, node, v, use_jit)
            self.nodes.append(node)
        self.leaf = node.lab.copy()

    def search(self, graph: Graph, node: _Node, depth: int, accept):
        """Depth-first search below ``node`` (aligned with first-path depth) for an accepted leaf map."""
        if not _same(node, self.nodes[depth]):
            return None
        if node.ncells == graph.n:
            perm = np.empty(graph.n, dtype=np.int64)
            perm[self.leaf] = node.lab
            return perm if accept(perm) else None
        c = self.targets[depth]
        for u in sorted(node.cell_members(c).tolist()):
            found = self.search(graph, _child(graph, node, u, self.use_jit), depth + 1, accept)
            if found is not None:
                return found
        return None


@dataclass
class AutResult:
    degree: int
    base: list[int]
    generators: list[np.ndarray]
    orbit_lengths: list[int]
    order: int = field(init=False)

    def __post_init__(self):
        out = 1
        for k in self.orbit_lengths:
            out *= k
        self.order = out

    def group(self) -> PermGroup:
        return PermGroup.from_bsgs(self.degree, self.generators, self.base)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union_perm(self, perm):
        for x, y in enumerate(perm.tolist()):
            rx, ry = self.find(x), self.find(y)
            if rx != ry:
                if self.size[rx] < self.size[ry]:
                    rx, ry = ry, rx
                self.parent[ry] = rx
                self.size[rx] += self.size[ry]


def automorphism_search(graph: Graph, colors=None, use_jit=None, cap: int = AUT_VERTEX_CAP) -> AutResult:
    """Generators and exact order of the colour-preserving automorphism group."""
    if graph.n > cap:
        raise SearchCapError(f"{graph.n} vertices exceeds the automorphism search cap {cap}")
    if graph.n == 0:
        return AutResult(0, [], [], [])
    fp = _FirstPath(graph, colors, use_jit)
    adj = graph.adj

    def accept(perm):
        return np.array_equal(adj[np.ix_(perm, perm)], adj)

    uf = _UnionFind(graph.n)
    gens: list[np.ndarray] = []
    lengths = [0] * len(fp.chosen)
    for lvl in reversed(range(len(fp.chosen))):
        node, c, v = fp.nodes[lvl], fp.targets[lvl], fp.chosen[lvl]
        for w in sorted(node.cell_members(c).tolist()):
            if uf.find(w) == uf.find(v):
                continue
            perm = fp.search(graph, _child(graph, node, w, use_jit), lvl + 1, accept)
            if perm is not None:
                gens.append(perm)
                uf.union_perm(perm)
        lengths[lvl] = uf.size[uf.find(v)]
    return AutResult(graph.n, list(fp.chosen), gens, lengths)


def automorphism_generators(graph: Graph, colors=None, use_jit=None) -> PermGroup:
    return automorphism_search(graph, colors, use_jit).group()


def find_isomorphism(g1: Graph, g2: Graph, use_jit=None, cap: int = AUT_VERTEX_CAP):
    """An isomorphism g1 -> g2 as an image array, or None."""
    if g1.n > cap or g2.n > cap:
        raise SearchCapError("vertex cap exceeded")
    if g1.n != g2.n or g1.num_edges() != g2.num_edges():
        return None
    if not np.array_equal(np.sort(g1.degrees()), np.sort(g2.degrees())):
        return None
    if g1.n == 0:
        return np.zeros(0, dtype=np.int64)
    fp = _FirstPath(g1, None, use_jit)
    a1, a2 = g1.adj, g2.adj

    def accept(perm):
        return np.array_equal(a2[np.ix_(perm, perm)], a1)

    return fp.search(g2, _root(g2, None, use_jit), 0, accept)
