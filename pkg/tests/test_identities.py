import math
from fractions import Fraction

import pytest
from oracles import sign_by_inversions, subfactorial

from treeminor import BudgetExceeded
from treeminor.identities import (
    ROOT,
    DerangementNetwork,
    MarkedWalk,
    PlaneTree,
    all_plane_trees,
    bead_bijection_witness,
    bead_set_r,
    binomial_identity_check,
    binomial_identity_sides,
    check_interlacing,
    cycle_notation,
    derangement_network_paths,
    derangements,
    example_plane_tree,
    in_set_l,
    mark_cycle,
    marked_dfs,
    signed_derangement_sum,
    sink,
    source,
    step,
)
from treeminor.tree import from_prufer


def root_is_mixed(pt):
    kids = pt.kids(pt.root)
    return any(y in pt.ascending for y in kids) and any(y not in pt.ascending for y in kids)


class TestMarkedDfs:
    def test_example_walk_and_cycle(self):
        w = marked_dfs(example_plane_tree())
        assert w.render() == "* 1 (3) 1 4 (8) (4) (7) 4 (9) 4 (1) * 2 (6) (2) (5) 2 *"
        assert len(w.tokens) == 2 * 10 - 1
        assert cycle_notation(mark_cycle(w), 3) == (3, 8, 4, 7, 9, 1, 6, 2, 5)

    def test_single_leaf(self):
        pt = PlaneTree({ROOT: (1,)}, frozenset())
        assert marked_dfs(pt).tokens == ((ROOT, False), (1, True), (ROOT, False))

    def test_plane_order_is_enforced(self):
        with pytest.raises(ValueError):
            PlaneTree({ROOT: (1, 2)}, frozenset({2}))

    def test_from_tree_uses_canonical_order(self):
        t = from_prufer([3, 3, 3])
        pt = PlaneTree.from_tree(t, 3, {4, 1})
        assert pt.kids(ROOT) == (1, 4, 2, 5)

    def test_walk_shape_on_all_small_trees(self):
        for pt in all_plane_trees(6):
            w = marked_dfs(pt)
            count = len(pt.nodes)
            assert len(w.tokens) == 2 * count - 1
            assert sorted(w.marks()) == sorted(pt.nodes - {ROOT})
            if count > 1:
                assert len(cycle_notation(mark_cycle(w), w.marks()[0])) == count - 1


class TestInterlacing:
    def test_example(self):
        pt = example_plane_tree()
        assert check_interlacing(pt, marked_dfs(pt))

    def test_swapped_marks_fail(self):
        pt = example_plane_tree()
        tokens = list(marked_dfs(pt).tokens)
        a, b = 2, 5  # (3) and (8)
        tokens[a], tokens[b] = tokens[b], tokens[a]
        assert not check_interlacing(pt, MarkedWalk(tuple(tokens)))

    def test_moved_mark_fails(self):
        pt = example_plane_tree()
        tokens = list(marked_dfs(pt).tokens)
        # mark the first copy of 4 instead of the second
        tokens[4], tokens[6] = (4, True), (4, False)
        assert not check_interlacing(pt, MarkedWalk(tuple(tokens)))

    def test_holds_exactly_when_root_children_are_not_mixed(self):
        # With ascending and descending children at the root, the unmarked
        # root sits between the last ascending and first descending mark and
        # the walk crosses two arcs there.
        seen = {True: 0, False: 0}
        for pt in all_plane_trees(7):
            mixed = root_is_mixed(pt)
            assert check_interlacing(pt, marked_dfs(pt)) is not mixed
            seen[mixed] += 1
        assert seen[True] > 0 and seen[False] > 0

    def test_smallest_mixed_root(self):
        pt = PlaneTree({ROOT: (1, 2)}, frozenset({1}))
        w = marked_dfs(pt)
        assert w.render() == "* (1) * (2) *"
        assert not check_interlacing(pt, w)

    def test_counts_of_plane_trees(self):
        assert [sum(1 for pt in all_plane_trees(k) if len(pt.nodes) == k) for k in range(1, 6)] == [1, 2, 7, 30, 143]


class TestDerangements:
    def test_examples(self):
        assert signed_derangement_sum(2) == -1
        assert signed_derangement_sum(3) == 2
        assert signed_derangement_sum(4) == -3

    @pytest.mark.parametrize("n", range(1, 10))
    def test_formula(self, n):
        assert signed_derangement_sum(n) == (-1) ** (n - 1) * (n - 1)

    def test_enumeration_against_oracle(self):
        for n in range(1, 8):
            got = list(derangements(n))
            assert len(got) == subfactorial(n)
            assert sum(sign_by_inversions(p) for p in got) == (-1) ** (n - 1) * (n - 1)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            signed_derangement_sum(11)


class TestNetwork:
    def test_structure(self):
        net = DerangementNetwork(3)
        assert len(net.sources) == len(net.sinks) == 3
        assert net.is_acyclic()
        arcs = set(net.arcs())
        assert (source(1), step(1, 2)) in arcs
        assert (step(1, 2), sink(2)) in arcs
        assert (step(2, 1), sink(1)) in arcs
        assert (step(1, 2), step(2, 3)) in arcs
        assert (step(3, 2), step(2, 1)) in arcs

    def test_n2(self):
        ((family, perm),) = derangement_network_paths(2)
        assert perm == (2, 1)
        assert family == ((source(1), step(1, 2), sink(2)), (source(2), step(2, 1), sink(1)))

    @pytest.mark.parametrize("n", range(2, 8))
    def test_bijection_with_derangements(self, n):
        fams = derangement_network_paths(n)
        perms = [p for _, p in fams]
        assert len(perms) == len(set(perms)) == subfactorial(n)
        assert sorted(perms) == list(derangements(n))
        assert sum(sign_by_inversions(p) for p in perms) == (-1) ** (n - 1) * (n - 1)

    def test_family_counts(self):
        assert [len(derangement_network_paths(n)) for n in range(2, 6)] == [1, 2, 9, 44]

    def test_range(self):
        with pytest.raises(ValueError):
            derangement_network_paths(8)


class TestBeads:
    def test_identity_examples(self):
        assert binomial_identity_sides(4) == (0, 0)
        assert binomial_identity_sides(2) == (-2, -2)
        assert binomial_identity_sides(0) == (1, 1)
        assert binomial_identity_sides(1) == (0, 0)

    @pytest.mark.parametrize("n", range(0, 31))
    def test_identity(self, n):
        assert binomial_identity_check(n)

    def test_identity_against_fractions(self):
        for n in range(0, 31):
            lhs = sum(math.comb(n, k) * (k - 1) * (n - k - 1) for k in range(n + 1))
            assert lhs == Fraction(2) ** (n - 2) * n * (n - 1) - 2**n * (n - 1)

    def test_witness_examples(self):
        assert bead_bijection_witness(4) == (48, 6, 42)
        assert bead_bijection_witness(2) == (2, 0, 2)  # only BW and WB
        assert bead_bijection_witness(3)[:2] == (12, 0)

    @pytest.mark.parametrize("n", range(2, 13))
    def test_cardinalities_reconcile(self, n):
        size_r, size_l, rest = bead_bijection_witness(n)
        assert size_l == size_r - rest

    def test_set_l_membership(self):
        beads = bead_set_r(3)
        assert not any(in_set_l(b) for b in beads)
        assert in_set_l(((True, False, True, False), 2, 3))
        assert not in_set_l(((True, False, True, False), 0, 3))

    def test_range(self):
        with pytest.raises(ValueError):
            bead_bijection_witness(13)


def test_every_plane_tree_is_valid():
    total = 0
    for pt in all_plane_trees(6):
        for x, kids in pt.children.items():
            flags = [y in pt.ascending for y in kids]
            assert flags == sorted(flags, reverse=True)
        total += 1
    assert total == 1 + 2 + 7 + 30 + 143 + 728
