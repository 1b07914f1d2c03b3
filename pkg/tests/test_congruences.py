import itertools
import random

import numpy as np
import pytest

from rookmonoids import (
    PartialInjection,
    Partition,
    PermGroup,
    ResourceLimitError,
    all_congruences_naive,
    congruence_closure,
    congruence_lattice,
    enumerate_universe,
    is_congruence,
    join,
    lattice_to_dot,
    normal_subgroups,
    partition_from_json,
    perm_inv,
    perm_mul,
    symmetric_group,
)
from rookmonoids.congruences import (
    _class_groups,
    _closure_ids,
    _closure_reference,
    _is_congruence_ids,
    _seed_order,
    _set_partitions,
)


def lattice_keys(parts):
    return [p.key for p in parts]


def test_partition_canonical_form(or4):
    ids = np.arange(len(or4)) % 3
    p = Partition(or4, ids)
    q = Partition.from_classes(or4, p.classes())
    assert p == q and p.key == q.key
    assert p.num_classes == 3
    assert p.relates(0, 3) and not p.relates(0, 1)
    classes = p.classes()
    assert [min(c) for c in classes] == sorted(min(c) for c in classes)


def test_partition_identity_and_universal(or4):
    ident = Partition.identity(or4)
    univ = Partition.universal(or4)
    assert ident.num_classes == len(or4)
    assert univ.num_classes == 1
    assert is_congruence(or4, ident)
    assert is_congruence(or4, univ)


def test_is_congruence_rejects_a_bad_merge(or4):
    ids = np.arange(len(or4))
    ids[1] = 0
    assert not is_congruence(or4, Partition(or4, ids))


def test_congruence_closure_of_nothing_is_identity(or4):
    assert congruence_closure(or4, []) == Partition.identity(or4)


def test_congruence_closure_swallows_lower_ranks(or4):
    eps13 = or4.idempotent_index((1, 3))
    part = congruence_closure(or4, [(0, eps13)])
    zero_class = set(part.class_of(0))
    assert {i for i in range(len(or4)) if or4.ranks[i] <= 1} <= zero_class
    assert is_congruence(or4, part)


def test_congruence_closure_of_unit_pair_fills_a_half_rank_ideal(or4):
    d1 = or4.element_index(PartialInjection(4, (2, 1, 4, 3)))
    part = congruence_closure(or4, [(1, d1)])
    zero_class = set(part.class_of(0))
    half = [
        {i for i in range(len(or4)) if or4.ranks[i] < 2 or or4.mtypes[i] == t}
        for t in ("I", "II")
    ]
    assert any(ideal <= zero_class for ideal in half)


def test_congruence_closure_is_idempotent(or4):
    rng = random.Random(5)
    for _ in range(40):
        seeds = [
            (rng.randrange(len(or4)), rng.randrange(len(or4)))
            for _ in range(rng.randint(1, 3))
        ]
        part = congruence_closure(or4, seeds)
        assert is_congruence(or4, part)
        again = congruence_closure(or4, [
            (c[0], other) for c in part.classes() for other in c[1:]
        ])
        assert again == part


def test_fast_closure_agrees_with_reference(or2, sr2, or4):
    for universe in (or2, sr2, or4):
        table = universe.multiplication_table()
        listed = table.tolist()
        rng = random.Random(len(universe))
        pair_pool = list(itertools.combinations(range(len(universe)), 2))
        for seeds in rng.sample(pair_pool, min(60, len(pair_pool))):
            fast = _closure_ids(table, [seeds])
            slow = _closure_reference(listed, [seeds])
            assert np.array_equal(fast, slow)


def test_registry_accelerated_closures_match_reference(sr2, or4):
    """Replay the lattice enumerator's accelerated seed loop and check every
    principal congruence against the plain reference closure."""
    for universe in (sr2, or4):
        table = universe.multiplication_table()
        table_t = np.ascontiguousarray(table.T)
        listed = table.tolist()
        iu, ju = _seed_order(universe)
        known, registry, results, by_key = {}, [], [], {}
        for i, j in zip(iu.tolist(), ju.tolist()):
            ids = _closure_ids(table, [(i, j)], known, registry, table_t)
            key = ids.tobytes()
            idx = by_key.get(key)
            if idx is None:
                idx = len(results)
                results.append(ids)
                registry.append(_class_groups(ids))
                by_key[key] = idx
            known[(i, j)] = idx
            assert np.array_equal(ids, _closure_reference(listed, [(i, j)]))


def test_lattice_of_toy_two_element_monoid():
    table = np.array([[0, 0], [0, 1]], dtype=np.int32)
    found = {
        ids.tobytes()
        for ids in _set_partitions(2)
        if _is_congruence_ids(table, ids)
    }
    assert len(found) == 2


def test_set_partition_generator_counts():
    # Bell numbers 1, 1, 2, 5, 15, 52, 203, 877
    for size, bell in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203), (7, 877)]:
        assert sum(1 for _ in _set_partitions(size)) == bell


def test_lattice_matches_naive_filter_at_degree_2(or2, sr2):
    assert lattice_keys(congruence_lattice(or2)) == lattice_keys(all_congruences_naive(or2))
    assert lattice_keys(congruence_lattice(sr2)) == lattice_keys(all_congruences_naive(sr2))
    assert len(congruence_lattice(or2)) == 7
    assert len(congruence_lattice(sr2)) == 4


def test_lattice_or4(or4):
    lattice = congruence_lattice(or4)
    assert len(lattice) == 17
    assert all(is_congruence(or4, p) for p in lattice)
    assert Partition.identity(or4) in lattice
    assert Partition.universal(or4) in lattice
    # canonical order: finest first, coarsest last
    assert lattice[0].num_classes == len(or4)
    assert lattice[-1].num_classes == 1


def test_lattice_is_join_closed(or4):
    lattice = congruence_lattice(or4)
    keys = set(lattice_keys(lattice))
    for p, q in itertools.combinations(lattice, 2):
        assert join(p, q).key in keys


def test_lattice_independent_of_threads(or4, sr4):
    for universe in (or4, sr4):
        one = lattice_keys(congruence_lattice(universe, threads=1))
        two = lattice_keys(congruence_lattice(universe, threads=2))
        assert one == two


def test_lattice_budget(or6):
    with pytest.raises(ResourceLimitError):
        congruence_lattice(or6, max_elements=100)


def test_join_laws(or4):
    lattice = congruence_lattice(or4)
    ident = Partition.identity(or4)
    univ = Partition.universal(or4)
    rng = random.Random(1)
    for _ in range(30):
        p, q = rng.choice(lattice), rng.choice(lattice)
        assert join(p, ident) == p
        assert join(p, univ) == univ
        assert join(p, p) == p
        assert join(p, q) == join(q, p)
    with pytest.raises(ValueError):
        join(Partition.identity(or4), Partition.identity(enumerate_universe("OR", 2)))


def test_join_refinement(or4):
    lattice = congruence_lattice(or4)
    for p in lattice:
        for q in lattice:
            j = join(p, q)
            assert p.refines(j) and q.refines(j)


def test_lattice_dot_renders_covers(or2):
    lattice = congruence_lattice(or2)
    dot = lattice_to_dot(lattice)
    assert dot.startswith("digraph")
    assert dot.count("->") >= len(lattice) - 1


def test_partition_json_round_trip(or4):
    part = congruence_closure(or4, [(0, 2)])
    payload = part.to_json()
    assert payload["universe"] == {"family": "OR", "n": 4}
    assert partition_from_json(or4, payload) == part
    with pytest.raises(ValueError):
        partition_from_json(or4, {"universe": {"family": "SR", "n": 4}, "classes": []})


# -- permutation groups ------------------------------------------------------

def test_perm_group_validation():
    with pytest.raises(ValueError):
        PermGroup(2, [(1, 2), (2, 2)])
    with pytest.raises(ValueError):
        PermGroup(2, [(2, 1)])  # no identity
    with pytest.raises(ValueError):
        PermGroup(3, [(1, 2, 3), (2, 3, 1)])  # not closed
    assert len(PermGroup(3, [(1, 2, 3), (2, 3, 1), (3, 1, 2)])) == 3


def test_perm_arithmetic():
    p, q = (2, 3, 1), (2, 1, 3)
    assert perm_mul(p, q) == (3, 2, 1)
    assert perm_mul(q, p) == (1, 3, 2)
    assert perm_mul(p, perm_inv(p)) == (1, 2, 3)


def test_symmetric_group_sizes():
    for k, size in [(0, 1), (1, 1), (2, 2), (3, 6), (4, 24)]:
        assert len(symmetric_group(k)) == size


def test_normal_subgroups_of_small_symmetric_groups():
    assert [len(s) for s in normal_subgroups(symmetric_group(2))] == [1, 2]
    assert [len(s) for s in normal_subgroups(symmetric_group(3))] == [1, 3, 6]
    s4 = normal_subgroups(symmetric_group(4))
    assert [len(s) for s in s4] == [1, 4, 12, 24]
    klein = [s for s in s4 if len(s) == 4][0]
    assert all(perm_mul(p, p) == (1, 2, 3, 4) for p in klein)


def test_normal_subgroups_of_the_klein_unit_group(or4):
    group = PermGroup(4, or4.unit_permutations())
    subs = normal_subgroups(group)
    assert [len(s) for s in subs] == [1, 2, 2, 2, 4]


def test_normal_subgroups_are_normal(sr4):
    w = PermGroup(4, sr4.unit_permutations())
    assert len(w) == 8
    subs = normal_subgroups(w)
    assert [len(s) for s in subs] == [1, 2, 4, 4, 4, 8]
    for sub in subs:
        assert w.is_normal(sub)


def test_normal_subgroup_budget():
    with pytest.raises(ResourceLimitError):
        normal_subgroups(symmetric_group(4), max_order=10)


def test_conjugacy_classes_partition_the_group():
    g = symmetric_group(4)
    classes = g.conjugacy_classes()
    assert sorted(len(c) for c in classes) == [1, 3, 6, 6, 8]
    assert set().union(*classes) == set(g.elements)


# -- the forcing properties behind the classification ------------------------

def ideal_members(universe, kind, t=None):
    m = universe.n // 2
    if kind == "I":
        return {
            i for i in range(len(universe))
            if universe.ranks[i] < m or universe.mtypes[i] == t
        }
    raise ValueError(kind)


def test_related_pairs_of_unequal_rank_force_ideals_into_the_class(or4):
    """Over every congruence: if two related elements have different ranks,
    the class swallows the whole ideal generated by the larger one."""
    m = 2
    for part in congruence_lattice(or4):
        for block in part.classes():
            ranks = {int(or4.ranks[i]) for i in block}
            if len(ranks) <= 1:
                continue
            top = max(ranks)
            members = set(block)
            if top != m:
                assert {i for i in range(len(or4)) if or4.ranks[i] <= top} <= members
            else:
                halves = [ideal_members(or4, "I", t) for t in ("I", "II")]
                assert any(h <= members for h in halves)


def test_non_singleton_classes_force_lower_ideals_into_the_zero_class(or4):
    for part in congruence_lattice(or4):
        zero_class = set(part.class_of(0))
        for block in part.classes():
            if len(block) <= 1:
                continue
            for i in block:
                k = int(or4.ranks[i])
                if k <= 2:
                    assert {
                        j for j in range(len(or4)) if or4.ranks[j] <= k - 1
                    } <= zero_class
                else:
                    halves = [ideal_members(or4, "I", t) for t in ("I", "II")]
                    assert any(h <= zero_class for h in halves)


def test_small_zero_class_forces_singletons_above(or4):
    for part in congruence_lattice(or4):
        zero_class = set(part.class_of(0))
        for k in range(0, 2):
            if zero_class == {i for i in range(len(or4)) if or4.ranks[i] <= k}:
                for block in part.classes():
                    if any(int(or4.ranks[i]) > k + 1 for i in block):
                        assert len(block) == 1
