"""Schreier-Sims against sympy's permutation groups and known orders."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from caylab.permgroup import PermGroup, inverse, is_identity, mul, orbit_partition


def cyc(n, *cycle):
    p = np.arange(n)
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        p[a] = b
    return p


def test_symmetric_group_order():
    for n in range(2, 8):
        P = PermGroup(n, [cyc(n, 0, 1), cyc(n, *range(n))])
        assert P.order() == math.factorial(n)


def test_dihedral_and_cyclic():
    n = 9
    rot = cyc(n, *range(n))
    ref = np.array([(-i) % n for i in range(n)])
    assert PermGroup(n, [rot]).order() == 9
    assert PermGroup(n, [rot, ref]).order() == 18
    assert PermGroup(n, []).order() == 1


def test_mul_convention():
    p = np.array([1, 2, 0])
    q = np.array([0, 2, 1])
    r = mul(p, q)  # apply p, then q
    assert [int(r[x]) for x in range(3)] == [int(q[p[x]]) for x in range(3)]
    assert is_identity(mul(p, inverse(p)))


@st.composite
def generator_sets(draw):
    n = draw(st.integers(2, 9))
    k = draw(st.integers(1, 3))
    gens = [np.array(draw(st.permutations(range(n)))) for _ in range(k)]
    return n, gens


@settings(max_examples=60, deadline=None)
@given(generator_sets())
def test_order_matches_sympy(case):
    n, gens = case
    P = PermGroup(n, gens)
    ref = PermutationGroup([Permutation(g.tolist()) for g in gens])
    assert P.order() == ref.order()
    assert sorted(map(sorted, P.orbits())) == sorted(sorted(o) for o in ref.orbits())


@settings(max_examples=60, deadline=None)
@given(generator_sets(), st.data())
def test_membership_matches_sympy(case, data):
    n, gens = case
    P = PermGroup(n, gens)
    ref = PermutationGroup([Permutation(g.tolist()) for g in gens])
    g = np.array(data.draw(st.permutations(range(n))))
    assert P.contains(g) == ref.contains(Permutation(g.tolist()))
    for s in gens:
        assert s in P


@settings(max_examples=40, deadline=None)
@given(generator_sets(), st.data())
def test_stabilizer_matches_sympy(case, data):
    n, gens = case
    P = PermGroup(n, gens)
    v = data.draw(st.integers(0, n - 1))
    ref = PermutationGroup([Permutation(g.tolist()) for g in gens]).stabilizer(v)
    Pv = P.stabilizer(v)
    assert Pv.order() == ref.order()
    assert Pv.order() * len(P.orbit(v)) == P.order()


def test_from_bsgs_matches_schreier_sims():
    n = 6
    gens = [cyc(n, 0, 1), cyc(n, *range(n))]
    P = PermGroup(n, gens)
    Q = PermGroup.from_bsgs(n, P.strong, P.base)
    assert Q.order() == 720
    assert all(s in Q for s in gens)


def test_orbit_partition():
    assert orbit_partition(5, [cyc(5, 0, 2), cyc(5, 3, 4)]) == [(0, 2), (1,), (3, 4)]


def test_rejects_bad_generator():
    with pytest.raises(ValueError):
        PermGroup(3, [np.array([0, 0, 1])])
