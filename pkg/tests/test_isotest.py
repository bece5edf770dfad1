"""Circulant isomorphism for order 2p^e: multiplier criterion versus search."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caylab.cayley import build_cayley, make_connection_set
from caylab.corpus import num_masks, set_from_mask
from caylab.groups import make_group
from caylab.isotest import (
    brute_force_iso,
    circulant_iso_oracle,
    is_isomorphism,
    iso_agreement,
    muzychuk_iso,
    phi_is_graph_isomorphism,
    sampled_pairs,
)
from caylab.keys import KeySpaceError, apply_map, key_of_set, multipliers_for_key, phi_map

from oracles import cayley_nx, nauty_isomorphic

Z18 = make_group([18])


def cay(H, S):
    return build_cayley(H, make_connection_set(H, S))


def test_examples():
    res = muzychuk_iso(Z18, [1, 17], [5, 13])
    assert res.isomorphic
    assert apply_map(phi_map(Z18, res.witness_multiplier.m), [1, 17]) == (5, 13)
    # (5,5) is also a witness
    assert apply_map(phi_map(Z18, (5, 5)), [1, 17]) == (5, 13)
    same = muzychuk_iso(Z18, [2, 4, 8, 9, 10, 14, 16], [2, 4, 8, 9, 10, 14, 16])
    assert same.isomorphic and same.witness_multiplier.m == (1, 1)
    res = muzychuk_iso(Z18, [1, 17], [2, 16])
    assert not res.isomorphic
    assert res.key_S.k == res.key_S2.k == (0, 0)


def test_result_dict():
    d = muzychuk_iso(Z18, [1, 17], [5, 13]).to_dict()
    assert d["isomorphic"] is True and d["keys"] == ["(0,0)", "(0,0)"]
    assert len(d["witness_multiplier"]) == 2


def test_wrong_order_rejected():
    with pytest.raises(KeySpaceError):
        muzychuk_iso(make_group([30]), [1, 29], [7, 23])


def test_brute_force_examples():
    perm = brute_force_iso(cay(Z18, [1, 17]), cay(Z18, [5, 13]))
    assert perm is not None and is_isomorphism(cay(Z18, [1, 17]), cay(Z18, [5, 13]), perm)
    Z3 = make_group([3])
    assert brute_force_iso(cay(Z3, [1, 2]), cay(Z3, [1, 2])) is not None
    assert brute_force_iso(cay(Z18, [1, 17]), cay(Z18, [2, 16])) is None
    assert circulant_iso_oracle(Z18, [1, 17], [7, 11]).isomorphic


def test_is_isomorphism_rejects_bad_maps():
    g = cay(Z18, [1, 17])
    assert not is_isomorphism(g, g, np.zeros(18, dtype=np.int64))
    assert not is_isomorphism(g, g, np.arange(17))
    shift = (np.arange(18) * 2) % 18
    assert not is_isomorphism(g, g, shift)


@pytest.mark.parametrize("n", [18, 50, 54])
def test_agreement_on_sampled_pairs(n):
    H = make_group([n])
    pairs = sampled_pairs(H, 60, seed=n)
    outcomes = iso_agreement(H, pairs)
    assert all(o.agree for o in outcomes)
    assert any(o.oracle for o in outcomes) and any(not o.oracle for o in outcomes)


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_criterion_matches_nauty_z18(data):
    r = num_masks(Z18)
    S = set_from_mask(Z18, data.draw(st.integers(1, r - 1)))
    if data.draw(st.booleans()):
        m = data.draw(st.sampled_from([1, 5, 7, 11, 13, 17]))
        S2 = tuple(sorted(m * x % 18 for x in S))
    else:
        S2 = set_from_mask(Z18, data.draw(st.integers(1, r - 1)))
    if len(S2) != len(S):
        return
    ref = nauty_isomorphic(cayley_nx((18,), S), cayley_nx((18,), S2))
    assert muzychuk_iso(Z18, S, S2).isomorphic == ref


def test_sampled_pairs_deterministic():
    H = make_group([50])
    assert sampled_pairs(H, 30, seed=1) == sampled_pairs(H, 30, seed=1)
    assert sampled_pairs(H, 30, seed=1) != sampled_pairs(H, 30, seed=2)
    for S, S2 in sampled_pairs(H, 30, seed=1):
        assert len(S) == len(S2)
        make_connection_set(H, S2)


@pytest.mark.parametrize("n", [18, 50, 54])
def test_in_key_phi_is_a_graph_isomorphism(n):
    H = make_group([n])
    p, e = {18: (3, 2), 50: (5, 2), 54: (3, 3)}[n]
    rng = np.random.default_rng(n)
    for _ in range(25):
        S = set_from_mask(H, int(rng.integers(1, num_masks(H))))
        ms = list(multipliers_for_key(p, e, key_of_set(H, S)))
        for m in [ms[i] for i in rng.choice(len(ms), size=min(4, len(ms)), replace=False)]:
            assert phi_is_graph_isomorphism(H, S, m.m)
