"""Hot loops for partition refinement.

Two interchangeable implementations of equitable refinement live here: a
numba ``@njit`` kernel working on CSR adjacency and a pure-numpy path working
on the dense adjacency matrix.  Both produce bit-identical partitions and
trace hashes.  Set ``CAYLAB_NO_JIT=1`` to force the numpy path (numba is also
skipped automatically when it cannot be imported).
"""

from __future__ import annotations

import os

import numpy as np

HASH_MASK = (1 << 40) - 1
HASH_MULT = 1000003

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_JIT = HAVE_NUMBA and os.environ.get("CAYLAB_NO_JIT", "").strip() not in ("1", "true", "yes")


def _mix_py(h, v):
    return (h * HASH_MULT + int(v) + 1) & HASH_MASK


def refine_numpy(adj, lab, pos, cell, csize, queue0, ncells):
    """Refine the partition (lab, pos, cell, csize) to the coarsest equitable one.

    Arrays are modified in place.  ``queue0`` lists the cell starts used as
    initial splitters.  Returns ``(ncells, trace_hash)``.
    """
    n = lab.shape[0]
    inq = np.zeros(n, dtype=bool)
    queue = []
    for c in queue0:
        c = int(c)
        if not inq[c]:
            inq[c] = True
            queue.append(c)
    head = 0
    h = 0
    while head < len(queue) and ncells < n:
        w = queue[head]
        head += 1
        inq[w] = False
        wsize = int(csize[w])
        count = adj[lab[w:w + wsize]].sum(axis=0, dtype=np.int64)
        tcells = np.unique(cell[count > 0])
        h = _mix_py(h, w)
        for c in tcells:
            c = int(c)
            sz = int(csize[c])
            if sz == 1:
                continue
            seg = lab[c:c + sz]
            keys = count[seg]
            if (keys == keys[0]).all():
                h = _mix_py(h, keys[0])
                continue
            order = np.argsort(keys, kind="stable")
            seg = seg[order]
            keys = keys[order]
            lab[c:c + sz] = seg
            pos[seg] = np.arange(c, c + sz)
            h = _mix_py(h, c)
            was_inq = bool(inq[c])
            cuts = np.flatnonzero(np.diff(keys)) + 1
            bounds = np.concatenate(([0], cuts, [sz]))
            best, bestsize = c, 0
            starts = []
            for q, r in zip(bounds[:-1], bounds[1:]):
                fs, fl = c + int(q), int(r - q)
                csize[fs] = fl
                cell[lab[fs:fs + fl]] = fs
                h = _mix_py(h, keys[q])
                h = _mix_py(h, fl)
                if fl > bestsize:
                    best, bestsize = fs, fl
                starts.append(fs)
            ncells += len(starts) - 1
            for fs in starts:
                skip = fs == c if was_inq else fs == best
                if not skip and not inq[fs]:
                    inq[fs] = True
                    queue.append(fs)
    return ncells, h


if HAVE_NUMBA:

    @njit(cache=True)
    def _mix_jit(h, v):
        return (h * 1000003 + v + 1) & 1099511627775

    @njit(cache=True)
    def refine_jit(indptr, indices, lab, pos, cell, csize, queue0, ncells):
        n = lab.shape[0]
        count = np.zeros(n, np.int64)
        touched = np.empty(n, np.int64)
        cflag = np.zeros(n, np.bool_)
        tcells = np.empty(n, np.int64)
        inq = np.zeros(n, np.bool_)
        cap = n + 1
        queue = np.empty(cap, np.int64)
        qh = 0
        qt = 0
        for i in range(queue0.shape[0]):
            c = queue0[i]
            if not inq[c]:
                inq[c] = True
                queue[qt] = c
                qt = (qt + 1) % cap
        h = 0
        while qh != qt and ncells < n:
            w = queue[qh]
            qh = (qh + 1) % cap
            inq[w] = False
            wsize = csize[w]
            nt = 0
            for p in range(w, w + wsize):
                u = lab[p]
                for e in range(indptr[u], indptr[u + 1]):
                    v = indices[e]
                    if count[v] == 0:
                        touched[nt] = v
                        nt += 1
                    count[v] += 1
            nc = 0
            for t in range(nt):
                c = cell[touched[t]]
                if not cflag[c]:
                    cflag[c] = True
                    tcells[nc] = c
                    nc += 1
            tc = np.sort(tcells[:nc])
            h = _mix_jit(h, w)
            for ci in range(nc):
                c = tc[ci]
                cflag[c] = False
                sz = csize[c]
                if sz == 1:
                    continue
                keys = np.empty(sz, np.int64)
                for q in range(sz):
                    keys[q] = count[lab[c + q]]
                uniform = True
                for q in range(1, sz):
                    if keys[q] != keys[0]:
                        uniform = False
                        break
                if uniform:
                    h = _mix_jit(h, keys[0])
                    continue
                order = np.argsort(keys, kind="mergesort")
                seg = lab[c:c + sz].copy()
                for q in range(sz):
                    v = seg[order[q]]
                    lab[c + q] = v
                    pos[v] = c + q
                h = _mix_jit(h, c)
                was_inq = inq[c]
                best = c
                bestsize = 0
                nfr = 0
                q = 0
                while q < sz:
                    k = keys[order[q]]
                    r = q
                    while r < sz and keys[order[r]] == k:
                        r += 1
                    fs = c + q
                    fl = r - q
                    csize[fs] = fl
                    for t in range(fs, fs + fl):
                        cell[lab[t]] = fs
                    h = _mix_jit(h, k)
                    h = _mix_jit(h, fl)
                    if fl > bestsize:
                        bestsize = fl
                        best = fs
                    nfr += 1
                    q = r
                ncells += nfr - 1
                fs = c
                while fs < c + sz:
                    if was_inq:
                        skip = fs == c
                    else:
                        skip = fs == best
                    if not skip and not inq[fs]:
                        inq[fs] = True
                        queue[qt] = fs
                        qt = (qt + 1) % cap
                    fs += csize[fs]
            for t in range(nt):
                count[touched[t]] = 0
        return ncells, h

else:  # pragma: no cover
    refine_jit = None


def refine(graph, lab, pos, cell, csize, queue0, ncells, use_jit=None):
    """Dispatch to the jitted or numpy refinement kernel."""
    if use_jit is None:
        use_jit = USE_JIT
    if use_jit:
        nc, h = refine_jit(graph.indptr, graph.indices, lab, pos, cell, csize,
                           np.asarray(queue0, dtype=np.int64), ncells)
        return int(nc), int(h)
    return refine_numpy(graph.adj, lab, pos, cell, csize, queue0, ncells)
