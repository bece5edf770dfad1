"""Group arithmetic, subgroups, quotients, checked against coordinate oracles."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caylab.groups import (
    GroupError,
    all_subgroups,
    invariant_factors,
    is_subgroup,
    join,
    make_group,
    meet,
    mult_order,
    parse_group,
    quotient_group,
    split_2pe,
    subgroup_from_members,
    subgroup_generated,
    subgroup_structure,
    unique_subgroup_of_order,
)

from oracles import add as oracle_add
from oracles import coords_elements, naive_subgroups

factor_lists = st.lists(st.integers(2, 6), min_size=1, max_size=3)


def test_parse_group_forms():
    assert parse_group("Z18").factors == (18,)
    assert parse_group("z9").factors == (9,)
    assert parse_group("3x3").factors == (3, 3)
    assert parse_group("Z3x9").factors == (3, 9)
    assert parse_group("Z18").name == "Z18"
    assert parse_group("3x3").name == "3x3"


@pytest.mark.parametrize("bad", ["", "Zx", "Z1", "3x1", "Z-4", "abc"])
def test_parse_group_rejects(bad):
    with pytest.raises(GroupError):
        parse_group(bad)


def test_order_cap():
    with pytest.raises(GroupError):
        make_group([1 << 21])


def test_mixed_radix_indexing():
    G = make_group([3, 4])
    assert G.coords(0) == (0, 0)
    assert G.coords(5) == (1, 1)
    assert G.index((2, 3)) == 11
    assert list(map(G.coords, range(12))) == coords_elements((3, 4))


@settings(max_examples=40, deadline=None)
@given(factor_lists, st.data())
def test_addition_matches_coordinates(factors, data):
    G = make_group(factors)
    x = data.draw(st.integers(0, G.order - 1))
    y = data.draw(st.integers(0, G.order - 1))
    assert G.add(x, y) == oracle_add(tuple(factors), x, y)
    assert G.add(x, G.neg(x)) == 0
    assert G.sub(G.add(x, y), y) == x
    assert G.mul(3, x) == G.add(x, G.add(x, x))


@settings(max_examples=30, deadline=None)
@given(factor_lists)
def test_element_orders_and_exponent(factors):
    G = make_group(factors)
    for g in range(G.order):
        k = 1
        x = g
        while x != 0:
            x = G.add(x, g)
            k += 1
        assert G.orders[g] == k
    assert G.exponent == math.lcm(*factors)


@pytest.mark.parametrize("factors", [(12,), (2, 4), (3, 3), (2, 2, 2), (9,), (2, 6)])
def test_all_subgroups_match_closure_oracle(factors):
    G = make_group(factors)
    ours = {H.members for H in all_subgroups(G)}
    assert ours == naive_subgroups(factors)


def test_subgroup_lattice_ops():
    G = make_group([12])
    A = subgroup_generated(G, [4])
    B = subgroup_generated(G, [6])
    assert A.members == (0, 4, 8)
    assert join(A, B).members == (0, 2, 4, 6, 8, 10)
    assert meet(A, B).members == (0,)
    assert A <= join(A, B) and not A <= B
    assert unique_subgroup_of_order(G, 4).members == (0, 3, 6, 9)
    assert is_subgroup(G, [0, 6]) and not is_subgroup(G, [0, 5])
    with pytest.raises(GroupError):
        subgroup_from_members(G, [0, 5], check=True)


def test_invariant_factors():
    assert invariant_factors([2, 3]) == [6]
    assert invariant_factors([4, 6]) == [2, 12]
    assert invariant_factors([3, 3]) == [3, 3]


small_factor_lists = st.lists(st.integers(2, 6), min_size=1, max_size=3).filter(lambda f: math.prod(f) <= 72)


@settings(max_examples=40, deadline=None)
@given(small_factor_lists, st.data())
def test_quotient_projection_is_homomorphism(factors, data):
    G = make_group(factors)
    subs = all_subgroups(G)
    L = subs[data.draw(st.integers(0, len(subs) - 1))]
    Q, proj = quotient_group(G, L)
    assert Q.order * L.order == G.order
    # fibres are exactly the cosets of L
    table = G.add_table
    for g in range(G.order):
        coset = sorted(table[g, list(L.members)].tolist())
        assert sorted(np.flatnonzero(proj == proj[g]).tolist()) == coset
    for _ in range(10):
        x = data.draw(st.integers(0, G.order - 1))
        y = data.draw(st.integers(0, G.order - 1))
        assert proj[G.add(x, y)] == Q.add(int(proj[x]), int(proj[y]))


@settings(max_examples=40, deadline=None)
@given(small_factor_lists, st.data())
def test_subgroup_structure_embedding(factors, data):
    G = make_group(factors)
    subs = all_subgroups(G)
    S = subs[data.draw(st.integers(0, len(subs) - 1))]
    K, embed = subgroup_structure(S)
    assert sorted(embed.tolist()) == list(S.members)
    for x in range(K.order):
        for y in range(K.order):
            assert embed[K.add(x, y)] == G.add(int(embed[x]), int(embed[y]))


def test_number_helpers():
    assert split_2pe(18) == (3, 2)
    assert split_2pe(54) == (3, 3)
    assert split_2pe(50) == (5, 2)
    assert split_2pe(30) is None
    assert split_2pe(36) is None
    assert split_2pe(9) is None
    assert mult_order(2, 9) == 6
    with pytest.raises(GroupError):
        mult_order(3, 9)
