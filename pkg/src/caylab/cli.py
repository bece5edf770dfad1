"""Command-line front end: ``caylab {analyze,enumerate,iso,verify,srings}``.

Exit codes: 0 success, 1 an audit or agreement check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional, Sequence

from .cayley import ConnectionSetError, make_connection_set
from .corpus import all_sets, dedupe_by_units, equal_degree_pairs, in_scope, sample_sets, structured_unstable_sets
from .groups import AbelianGroup, GroupError, make_group, parse_group, split_2pe
from .isotest import iso_agreement, muzychuk_iso, sampled_pairs
from .keys import prop57_violations
from .poschel import brute_force_srings, ssystem_rings, BRUTE_FORCE_CAP
from .sring import verify_sring
from .stability import analyze, audit_instance

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID = 0, 1, 2

THEOREM_CHECKS = {
    "main1": ("main1", "axioms"),
    "main2": ("main2",),
    "wm": ("wm",),
    "main3": ("main3", "shape"),
    "main4": ("main4",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def parse_set(text: str) -> list[int]:
    text = text.strip().strip("{}[]")
    if not text:
        return []
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"cannot parse set {text!r}") from exc


def default_jobs() -> int:
    raw = os.environ.get("CAYLAB_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Order-preserving map; results are identical for every worker count."""
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    chunk = max(1, len(items) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


# -- workers (module level so they pickle) ----------------------------------


def _analyze_job(args) -> str:
    factors, S = args
    return analyze(AbelianGroup(tuple(factors)), S).to_json()


def _audit_job(args):
    factors, S, checks = args
    H = AbelianGroup(tuple(factors))
    rep, v = audit_instance(H, S, checks)
    return [f"{x.theorem}\t{x.group}\t{list(x.set)}\t{x.detail}" for x in v]


# -- subcommands --------------------------------------------------------------


def _instances(G: AbelianGroup, args) -> list[tuple[int, ...]]:
    if args.sample:
        sets = sample_sets(G, args.sample, args.seed, accept=in_scope)
    else:
        sets = [S for S in all_sets(G) if in_scope(G, S)]
    if getattr(args, "dedupe", False):
        sets = dedupe_by_units(G, sets)
    return sets


def cmd_analyze(args, out) -> int:
    G = parse_group(args.group)
    S = make_connection_set(G, parse_set(args.set))
    rep = analyze(G, S)
    out.write(rep.to_json() + "\n")
    return EXIT_OK if rep.agreement in (True, None) else EXIT_VIOLATION


def cmd_enumerate(args, out) -> int:
    G = parse_group(args.group)
    sets = _instances(G, args)
    lines = parallel_map(_analyze_job, [(G.factors, S) for S in sets], args.jobs)
    stable = unstable = agree = 0
    for line in lines:
        out.write(line + "\n")
        rec = json.loads(line)
        stable += rec["stable"] is True
        unstable += rec["stable"] is False
        agree += rec.get("agreement") is True
    n = len(lines)
    out.write(f"# group={G.name} instances={n} stable={stable} unstable={unstable} agreement={agree}/{n}\n")
    return EXIT_OK if agree == n else EXIT_VIOLATION


def cmd_iso(args, out) -> int:
    H = make_group([args.n])
    if split_2pe(args.n) is None:
        raise GroupError(f"n={args.n} is not 2p^e with p an odd prime")
    S = make_connection_set(H, parse_set(args.set))
    S2 = make_connection_set(H, parse_set(args.set2))
    res = muzychuk_iso(H, S, S2, literal=args.debug_literal_phi)
    rec = res.to_dict()
    code = EXIT_OK
    if args.check:
        oracle = iso_agreement(H, [(S.elements, S2.elements)])[0]
        rec["oracle_isomorphic"] = oracle.oracle
        if not oracle.agree:
            code = EXIT_VIOLATION
    out.write(json.dumps(rec, separators=(",", ":")) + "\n")
    return code


def _cyclic_prime_power(G: AbelianGroup) -> Optional[tuple[int, int]]:
    if len(G.factors) != 1 or G.order % 2 == 0 or G.order < 3:
        return None
    n = G.order
    p = next(q for q in range(3, n + 1) if n % q == 0)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return (p, e) if n == 1 else None


def cmd_verify(args, out) -> int:
    G = parse_group(args.group)
    th = args.theorem
    lines: list[str] = []
    if th in THEOREM_CHECKS:
        if th in ("main2", "wm") and G.order % 2 == 0:
            raise GroupError(f"{th} needs a group of odd order")
        if th == "main3" and not (G.is_cyclic() and G.order % 4 == 2 and G.order > 2):
            raise GroupError("main3 needs a cyclic group of order 2n with n > 1 odd")
        if th == "main4" and (split_2pe(G.order) is None or len(G.factors) != 1):
            raise GroupError("main4 needs Z_(2p^e)")
        sets = _instances(G, args)
        checks = THEOREM_CHECKS[th]
        results = parallel_map(_audit_job, [(G.factors, S, checks) for S in sets], args.jobs)
        for r in results:
            lines.extend(r)
        n = len(sets)
    elif th == "poschel":
        pe = _cyclic_prime_power(G)
        if pe is None:
            raise GroupError("poschel needs Z_(p^e) with p an odd prime")
        built = ssystem_rings(G)
        for ring, systems in built.items():
            v = verify_sring(G, ring)
            if not v.ok:
                lines.append(f"poschel\t{G.name}\t{systems[0]}\taxiom {v.axiom}: {v.detail}")
        if G.order <= BRUTE_FORCE_CAP:
            brute = set(brute_force_srings(G))
            for ring in sorted(brute - set(built), key=lambda A: A.classes):
                lines.append(f"poschel\t{G.name}\tmissing from S-systems\t{list(map(list, ring.classes))}")
            for ring in sorted(set(built) - brute, key=lambda A: A.classes):
                lines.append(f"poschel\t{G.name}\tnot found by brute force\t{list(map(list, ring.classes))}")
        n = len(built)
    elif th == "muzychuk":
        if split_2pe(G.order) is None or len(G.factors) != 1:
            raise GroupError("muzychuk needs Z_(2p^e)")
        pairs = sampled_pairs(G, args.sample, args.seed) if args.sample else list(equal_degree_pairs(G))
        for o in iso_agreement(G, pairs):
            if not o.agree:
                lines.append(f"muzychuk\t{G.name}\t{list(o.S)} {list(o.S2)}\tcriterion={o.criterion} oracle={o.oracle}")
        n = len(pairs)
    elif th == "prop5_7":
        pe = split_2pe(G.order)
        if pe is None or len(G.factors) != 1:
            raise GroupError("prop5_7 needs Z_(2p^e)")
        v = prop57_violations(*pe, literal=args.debug_literal_phi)
        lines = [f"prop5_7\t{G.name}\tkey={k} m={m}\t{list(X)}" for k, m, X in v]
        n = 1
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(th)
    for line in lines:
        out.write(line + "\n")
    out.write(f"{len(lines)} violations / {n} instances\n")
    return EXIT_VIOLATION if lines else EXIT_OK


def cmd_srings(args, out) -> int:
    G = parse_group(args.group)
    pe = _cyclic_prime_power(G)
    if pe is not None:
        rings = ssystem_rings(G)
        for i, (ring, systems) in enumerate(sorted(rings.items(), key=lambda kv: kv[0].classes)):
            params = " ".join(str(s) for s in systems)
            out.write(f"# S-ring {i + 1} rank={ring.rank} systems={params}\n{ring.dump()}\n\n")
        out.write(f"# {len(rings)} S-rings over {G.name}\n")
        return EXIT_OK
    if G.order > BRUTE_FORCE_CAP:
        raise GroupError(f"{G.name}: exhaustive S-ring enumeration is limited to order {BRUTE_FORCE_CAP}")
    rings = brute_force_srings(G)
    for i, ring in enumerate(rings):
        out.write(f"# S-ring {i + 1} rank={ring.rank}\n{ring.dump()}\n\n")
    out.write(f"# {len(rings)} S-rings over {G.name}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="caylab", description="Stability of Cayley graphs on abelian groups via Schur rings.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, sample=True):
        p.add_argument("--group", required=True, help="e.g. Z18 or 3x3")
        if sample:
            p.add_argument("--sample", type=int, default=0, help="number of seeded samples (0 = exhaustive)")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--jobs", type=int, default=default_jobs(), help="worker processes (env CAYLAB_JOBS)")
            p.add_argument("--dedupe", action="store_true", help="keep one set per orbit under unit multipliers")
        p.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("analyze", help="stability report for one connection set")
    common(p, sample=False)
    p.add_argument("--set", required=True, help="comma-separated elements")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("enumerate", help="reports for all (or sampled) connected non-bipartite sets")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("iso", help="isomorphism of two circulants of order 2p^e")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--set2", required=True)
    p.add_argument("--check", action="store_true", help="also run the search oracle")
    p.add_argument("--debug-literal-phi", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("verify", help="run a theorem audit")
    p.add_argument("--theorem", required=True,
                   choices=["main1", "main2", "main3", "main4", "wm", "poschel", "muzychuk", "prop5_7"])
    common(p)
    p.add_argument("--debug-literal-phi", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("srings", help="list all S-rings over a small group")
    common(p, sample=False)
    p.set_defaults(func=cmd_srings)
    return ap


def run_cli(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be >= 1")
        if getattr(args, "sample", 0) < 0:
            raise UsageError("--sample must be >= 0")
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                return args.func(args, fh)
        return args.func(args, stdout)
    except (UsageError, ConnectionSetError, GroupError) as exc:
        print(f"caylab: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
