"""Compare the numba refinement kernel with the pure-numpy fallback.

Times automorphism search on canonical double covers of seeded circulants and
checks that both paths report the same group orders.

    python3 benchmarks/bench_refine.py --orders 18 50 54 62 --count 20
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from caylab import _kernels
from caylab.autsearch import automorphism_search
from caylab.cayley import double_cover, make_connection_set
from caylab.corpus import in_scope, sample_sets
from caylab.groups import make_group


def covers(n: int, count: int, seed: int):
    H = make_group([n])
    for S in sample_sets(H, count, seed, accept=in_scope):
        yield double_cover(H, make_connection_set(H, S))[1]


def run(graphs, use_jit: bool) -> tuple[float, list[int]]:
    t0 = time.perf_counter()
    orders = [automorphism_search(g, use_jit=use_jit).group().order() for g in graphs]
    return time.perf_counter() - t0, orders


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--orders", type=int, nargs="+", default=[18, 50, 54, 62], help="circulant orders (double cover must fit the search cap)")
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not importable; only the numpy path is available", file=sys.stderr)
        return 1
    if os.environ.get("CAYLAB_NO_JIT"):
        print("note: CAYLAB_NO_JIT is set but both paths are selected explicitly here", file=sys.stderr)

    print(f"{'n':>5} {'graphs':>6} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for n in args.orders:
        graphs = list(covers(n, args.count, args.seed))
        run(graphs[:1], True)  # compile outside the timed region
        t_jit, o_jit = run(graphs, True)
        t_np, o_np = run(graphs, False)
        if o_jit != o_np:
            print(f"order mismatch at n={n}", file=sys.stderr)
            return 1
        print(f"{n:>5} {len(graphs):>6} {t_jit:>9.3f} {t_np:>9.3f} {t_np / t_jit:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
