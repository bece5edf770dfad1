"""Stability ground truth, the S-ring witness, the 2p^e criterion and audits."""

from __future__ import annotations

import json

import numpy as np
import pytest

from caylab.cayley import build_cayley, find_twins, make_connection_set
from caylab.corpus import all_sets, in_scope, structured_unstable_sets, twisted_sets, wilson_type_sets
from caylab.groups import GroupError, make_group
from caylab.stability import (
    ScopeError,
    analyze,
    audit_instance,
    audit_theorems,
    brute_stability,
    criterion_2pe,
    sring_witness,
    t_shapes,
)

from oracles import cayley_nx, double_cover_nx, nauty_aut_order

Z18 = make_group([18])
WILSON = [2, 4, 8, 9, 10, 14, 16]


def test_brute_examples():
    r = brute_stability(make_group([3]), [1, 2])
    assert (r.aut_order, r.dc_aut_order, r.stable) == (6, 12, True)
    r = brute_stability(make_group([6]), [1, 2, 3, 4, 5])
    assert (r.aut_order, r.dc_aut_order, r.stable) == (720, 1440, True)
    r = brute_stability(Z18, WILSON)
    # orders frozen from nauty generators + sympy Schreier-Sims
    assert (r.aut_order, r.dc_aut_order, r.stable) == (2592, 1119744, False)


def test_frozen_orders_match_oracle():
    ref = cayley_nx((18,), WILSON)
    assert nauty_aut_order(ref) == 2592
    assert nauty_aut_order(double_cover_nx(ref)) == 1119744


def test_scope_errors():
    with pytest.raises(ScopeError):
        brute_stability(Z18, [2, 16])  # disconnected
    with pytest.raises(ScopeError):
        brute_stability(Z18, [1, 17])  # bipartite
    with pytest.raises(ScopeError):
        criterion_2pe(Z18, [2, 16])
    rep = analyze(Z18, [2, 16])
    assert not rep.in_scope and rep.agreement is None
    assert rep.to_dict()["scope"].startswith("out of scope")


def test_witness_examples():
    A, orb = sring_witness(make_group([3]), [1, 2])
    assert orb == (1,)
    _, orb = sring_witness(make_group([9]), [1, 2, 4, 5, 7, 8])
    assert len(orb) > 1 and 1 in orb
    A, orb = sring_witness(Z18, WILSON)
    assert len(orb) > 1
    G = A.group
    assert A.is_aset(range(0, G.order, 2))
    assert A.is_aset([2 * s + 1 for s in WILSON])


def test_criterion_examples():
    c = criterion_2pe(Z18, WILSON)
    assert c.cond1 and c.witness_h == 6 and c.unstable
    c = criterion_2pe(make_group([6]), [1, 2, 3, 4, 5])
    assert not c.cond1 and not c.cond2 and not c.unstable
    Z10 = make_group([10])
    c = criterion_2pe(Z10, [2, 4, 5, 6, 8])
    assert not c.unstable and brute_stability(Z10, [2, 4, 5, 6, 8]).stable
    with pytest.raises(GroupError):
        criterion_2pe(make_group([30]), [1, 29])


def test_report_json():
    rec = json.loads(analyze(Z18, WILSON).to_json())
    assert rec["group"] == "Z18" and rec["set"] == WILSON
    assert rec["aut_order"] == "2592" and rec["dc_aut_order"] == "1119744"
    assert rec["stable"] is False and rec["agreement"] is True
    assert rec["criterion"] == {"applicable": True, "cond1": {"holds": True, "witness_h": 6}, "cond2": {"holds": False}}
    assert 1 in rec["orbit_of_a"]
    non_cyclic = json.loads(analyze(make_group([3, 3]), [1, 2, 3, 6]).to_json())
    assert non_cyclic["criterion"] == {"applicable": False}


@pytest.mark.parametrize("factors", [(5,), (7,), (9,), (10,), (3, 3), (2, 5), (12,)])
def test_stability_matches_nauty_oracle(factors):
    H = make_group(factors)
    for S in all_sets(H):
        if not in_scope(H, S):
            continue
        rep = analyze(H, S)
        ref = cayley_nx(factors, S)
        a, d = nauty_aut_order(ref), nauty_aut_order(double_cover_nx(ref))
        assert (rep.aut_order, rep.dc_aut_order) == (a, d)
        assert rep.stable == (d == 2 * a)
        assert rep.agreement


@pytest.mark.parametrize("n", [9, 10, 12, 14, 15, 18])
def test_twins_imply_instability(n):
    H = make_group([n])
    for S in all_sets(H):
        if in_scope(H, S) and find_twins(build_cayley(H, make_connection_set(H, S))) is not None:
            assert not analyze(H, S, witness=False).stable


@pytest.mark.parametrize("n,p,e", [(18, 3, 2), (50, 5, 2), (54, 3, 3)])
def test_coset_radical_forces_instability(n, p, e):
    """Replacing the even part of S by a union of cosets of the order-p subgroup gives an unstable graph."""
    H = make_group([n])
    rng = np.random.default_rng(n)
    step = n // p
    checked = 0
    for _ in range(60):
        S = {x for x in range(1, n) if rng.random() < 0.3}
        S |= {n - x for x in S}
        even = {x for x in S if x % 2 == 0 and x % step}
        even = {(x + j * step) % n for x in even for j in range(p)}
        if not even:
            continue
        T = sorted({x for x in S if x % 2} | even)
        if not in_scope(H, T):
            continue
        rep = analyze(H, T)
        assert not rep.stable and rep.criterion.cond1 and rep.agreement
        checked += 1
    assert checked > 10


@pytest.mark.parametrize("n,p,e", [(18, 3, 2), (50, 5, 2), (54, 3, 3)])
def test_structured_instances_are_unstable(n, p, e):
    H = make_group([n])
    for S in wilson_type_sets(H, p, e, 10, seed=1):
        rep = analyze(H, S)
        assert not rep.stable and rep.criterion.cond1
    for S in twisted_sets(H, p, e, 10, seed=1):
        rep = analyze(H, S)
        assert not rep.stable and rep.agreement
    assert structured_unstable_sets(H, p, e, 10, seed=3)


def test_audit_examples_are_clean():
    Z9 = make_group([9])
    K = make_group([3, 3])
    for H in (Z18, Z9, K):
        instances = [(H, S) for S in all_sets(H) if in_scope(H, S)]
        violations, count = audit_theorems(instances)
        assert violations == [] and count == len(instances)


def test_audit_reports_consistent_orders():
    rep, v = audit_instance(Z18, WILSON)
    assert v == [] and rep.dc_aut_order >= 2 * rep.aut_order


def test_t_shapes():
    shapes = t_shapes(9)
    # La with L trivial is {a}; La u Lab with L trivial is {a, ab}
    assert (1,) in shapes
    assert (1, 19) in shapes
    assert all(1 in T for T in shapes)
