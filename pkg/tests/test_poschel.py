"""S-systems over cyclic p-groups against the brute-force S-ring enumeration."""

from __future__ import annotations

import pytest

from caylab.groups import make_group
from caylab.keys import PrimaryKey, key_lattice, key_partition
from caylab.poschel import (
    SSystem,
    SSystemError,
    brute_force_srings,
    build_ssystem_partition,
    discrete_partition,
    enumerate_ssystems,
    interval_partitions,
    layer,
    smallest_primitive_root,
    ssystem_rings,
    validate_ssystem,
)
from caylab.sring import verify_sring

from oracles import naive_is_sring


def test_validate_examples():
    assert validate_ssystem(SSystem(3, 2, (2, 6), ((1, 2),))).ok
    v = validate_ssystem(SSystem(3, 2, (2, 1), discrete_partition(2)))
    assert not v.ok and v.condition == 3
    assert validate_ssystem(SSystem(3, 2, (1, 3), discrete_partition(2))).ok


def test_validate_condition_1_and_shape():
    assert validate_ssystem(SSystem(3, 2, (1, 6), ((1, 2),))).condition == 1
    assert validate_ssystem(SSystem(3, 2, (4, 6), discrete_partition(2))).condition == 0
    assert validate_ssystem(SSystem(3, 2, (2, 6), ((1,), (1, 2)))).condition == 0
    with pytest.raises(SSystemError):
        validate_ssystem(SSystem(4, 1, (1,), discrete_partition(1)))


def test_build_examples():
    Z9 = make_group([9])
    assert build_ssystem_partition(Z9, SSystem(3, 2, (2, 6), ((1, 2),))).classes == ((0,), tuple(range(1, 9)))
    assert build_ssystem_partition(Z9, SSystem(3, 2, (1, 3), discrete_partition(2))).classes == (
        (0,), (1, 4, 7), (2, 5, 8), (3,), (6,))
    Z3 = make_group([3])
    assert build_ssystem_partition(Z3, SSystem(3, 1, (1,), discrete_partition(1))).rank == 3
    with pytest.raises(SSystemError):
        build_ssystem_partition(Z9, SSystem(3, 2, (2, 1), discrete_partition(2)))


def test_interval_partitions():
    assert list(interval_partitions(1)) == [((1,),)]
    assert len(list(interval_partitions(4))) == 8
    assert layer(3, 2, 1) == [3, 6]
    assert smallest_primitive_root(9) == 2
    assert smallest_primitive_root(25) == 2
    assert smallest_primitive_root(7) == 3


@pytest.mark.parametrize("p,e,count", [(3, 1, 2), (5, 1, 3), (7, 1, 4)])
def test_enumeration_counts_prime(p, e, count):
    assert len(enumerate_ssystems(p, e)) == count


def test_enumeration_cap():
    with pytest.raises(SSystemError):
        enumerate_ssystems(3, 8)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_ssystems_give_exactly_all_srings(n):
    G = make_group([n])
    built = set(ssystem_rings(G))
    brute = set(brute_force_srings(G))
    assert built == brute


@pytest.mark.parametrize("n,count", [(3, 2), (5, 3), (7, 4), (9, 7), (10, 10)])
def test_brute_force_counts(n, count):
    # frozen from the exhaustive enumeration, re-checked against the group-ring oracle below
    assert len(brute_force_srings(make_group([n]))) == count


def test_brute_force_finds_every_sring_z6():
    """Independent check at Z6: filter all partitions with the naive oracle."""
    from itertools import product

    G = make_group([6])
    naive = set()
    for labels in product(range(5), repeat=5):
        classes = {}
        for x, l in zip(range(1, 6), labels):
            classes.setdefault(l, []).append(x)
        P = [[0]] + list(classes.values())
        if naive_is_sring((6,), P):
            naive.add(tuple(sorted(tuple(sorted(c)) for c in P)))
    ours = {A.classes for A in brute_force_srings(G)}
    assert ours == naive


@pytest.mark.parametrize("p,e", [(3, 2), (3, 3), (5, 2), (7, 2)])
def test_built_rings_are_srings(p, e):
    G = make_group([p ** e])
    for ring in ssystem_rings(G):
        assert verify_sring(G, ring).ok


def test_counts_at_higher_exponent():
    assert len(enumerate_ssystems(3, 3)) == 25
    assert len(ssystem_rings(make_group([27]))) == 25
    assert len(ssystem_rings(make_group([25]))) == 13
    assert len(enumerate_ssystems(3, 4, cap=81)) == 92


def test_printed_conditions_admit_a_non_sring():
    s = SSystem(3, 3, (2, 6, 6), ((1, 2), (3,)))
    assert validate_ssystem(s, as_printed=True).ok
    v = validate_ssystem(s)
    assert not v.ok and v.condition == 4
    assert len(enumerate_ssystems(3, 3, as_printed=True)) == 26
    # build the partition by hand: the product axiom fails
    Z27 = make_group([27])
    K3 = [1, 8, 10, 17, 19, 26]
    classes = [[0], [x for x in range(3, 27, 3)]]
    seen = set()
    for x in layer(3, 3, 3):
        if x not in seen:
            orb = sorted({x * k % 27 for k in K3})
            seen.update(orb)
            classes.append(orb)
    assert not verify_sring(Z27, classes).ok
    assert not naive_is_sring((27,), classes)


@pytest.mark.parametrize("p,e", [(3, 3), (5, 3), (3, 4)])
def test_every_valid_system_gives_an_sring(p, e):
    G = make_group([p ** e])
    for s in enumerate_ssystems(p, e, cap=p ** e):
        assert verify_sring(G, build_ssystem_partition(G, s)).ok


@pytest.mark.parametrize("n", [25, 27])
def test_circulant_transitivity_modules_are_ssystem_rings(n):
    from caylab.autsearch import automorphism_search
    from caylab.cayley import build_cayley, make_connection_set
    from caylab.corpus import all_sets
    from caylab.sring import transitivity_module

    G = make_group([n])
    rings = set(ssystem_rings(G))
    for S in all_sets(G):
        P = automorphism_search(build_cayley(G, make_connection_set(G, S))).group()
        assert transitivity_module(G, P) in rings


@pytest.mark.parametrize("p,e", [(3, 2), (3, 3)])
def test_key_partition_inside_h0_is_an_ssystem_ring(p, e):
    n = p ** e
    H = make_group([2 * n])
    Zn = make_group([n])
    for k in key_lattice(p, e):
        inside = sorted(tuple(sorted(x // 2 for x in c)) for c in key_partition(H, k) if c[0] % 2 == 0
                        and all(x % 2 == 0 for x in c))
        s = SSystem(p, e, tuple(p ** ki for ki in k.k), discrete_partition(e))
        assert validate_ssystem(s).ok
        # x -> 2x is an isomorphism Z_{p^e} -> H_0; the S-system ring is invariant under units
        assert sorted(build_ssystem_partition(Zn, s).classes) == inside


def test_key_type_rejects():
    from caylab.keys import KeySpaceError

    with pytest.raises(KeySpaceError):
        PrimaryKey(3, 2, (1, 1))
