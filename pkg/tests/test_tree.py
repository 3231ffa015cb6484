import itertools

import pytest
from oracles import floyd_warshall, prufer_decode

from treeminor import NotATree, ValueOutOfRange, VertexOutOfRange
from treeminor.errors import InvalidSubset
from treeminor.tree import (
    Tree,
    derive_seed,
    distance_matrix,
    format_tree_text,
    from_edge_list,
    from_prufer,
    induces_subtree,
    parse_tree_text,
    path_tree,
    principal_submatrix,
    random_tree,
    random_tree_with_subtree,
    star_tree,
    to_prufer,
)

P3 = path_tree(3)
P4 = path_tree(4)
K13 = star_tree(4)


class TestConstruction:
    def test_path(self):
        t = from_edge_list(3, [(1, 2), (2, 3)])
        assert t == P3
        assert t.adjacency[2] == (1, 3)

    def test_star(self):
        t = from_edge_list(4, [(1, 4), (2, 4), (3, 4)])
        assert t == K13
        assert t.degree(4) == 3

    def test_edge_order_and_orientation_are_normalized(self):
        assert from_edge_list(3, [(3, 2), (2, 1)]) == P3

    @pytest.mark.parametrize(
        "n, edges",
        [
            (4, [(1, 2), (3, 4)]),
            (3, [(1, 2), (2, 3), (1, 3)]),
            (4, [(1, 2), (2, 1), (3, 4)]),
            (2, [(1, 1)]),
            (0, []),
        ],
    )
    def test_rejects_non_trees(self, n, edges):
        with pytest.raises(NotATree):
            from_edge_list(n, edges)

    def test_rejects_out_of_range_vertex(self):
        with pytest.raises(VertexOutOfRange):
            from_edge_list(3, [(1, 2), (2, 4)])

    def test_single_vertex(self):
        t = from_edge_list(1, [])
        assert distance_matrix(t) == ((0,),)


class TestPrufer:
    def test_examples(self):
        assert from_prufer([]) == path_tree(2)
        assert from_prufer([4, 4]) == K13
        assert from_prufer([2, 3]) == P4
        assert to_prufer(path_tree(2)) == []
        assert to_prufer(K13) == [4, 4]
        assert to_prufer(P4) == [2, 3]

    def test_out_of_range(self):
        with pytest.raises(ValueOutOfRange):
            from_prufer([5, 1])

    @pytest.mark.parametrize("n", range(2, 8))
    def test_exhaustive_round_trip(self, n):
        seen = set()
        for seq in itertools.product(range(1, n + 1), repeat=n - 2):
            t = from_prufer(seq)
            assert list(t.edges) == prufer_decode(list(seq))
            assert to_prufer(t) == list(seq)
            seen.add(t.edges)
        assert len(seen) == n ** (n - 2)


class TestDistances:
    def test_examples(self):
        assert distance_matrix(P3) == ((0, 1, 2), (1, 0, 1), (2, 1, 0))
        d = distance_matrix(K13)
        for i in range(3):
            assert d[i][3] == 1
            for j in range(3):
                assert d[i][j] == (0 if i == j else 2)

    @pytest.mark.parametrize("seed", range(20))
    def test_against_floyd_warshall(self, seed):
        n = 2 + seed % 11
        t = random_tree(n, derive_seed(7, seed))
        ref = floyd_warshall(n, t.edges)
        assert distance_matrix(t) == tuple(tuple(row[1:]) for row in ref[1:])

    @pytest.mark.parametrize("seed", range(20))
    def test_metric_properties(self, seed):
        t = random_tree(9, derive_seed(11, seed))
        d = t.distances
        for x in range(1, t.n + 1):
            assert d[x][x] == 0
            for y in range(1, t.n + 1):
                assert d[x][y] == d[y][x]
            for u, v in t.edges:
                assert abs(d[x][u] - d[x][v]) == 1

    def test_row_sums_are_smallest_at_path_center(self):
        for n in range(2, 12):
            d = distance_matrix(path_tree(n))
            sums = [sum(row) for row in d]
            centers = {(n - 1) // 2, n // 2}
            assert {i for i, s in enumerate(sums) if s == min(sums)} == centers

    def test_path_arcs_follow_the_path(self):
        t = from_prufer([3, 3, 5, 5])
        for u in range(1, t.n + 1):
            for v in range(1, t.n + 1):
                arcs = t.path_arcs(u, v)
                assert len(arcs) == t.distance(u, v)
                walk = t.path(u, v)
                assert arcs == tuple(zip(walk, walk[1:]))


class TestSubmatrix:
    def test_examples(self):
        assert principal_submatrix(distance_matrix(P3), [1, 3]) == ((0, 2), (2, 0))
        assert principal_submatrix(distance_matrix(P4), [4, 1]) == ((0, 3), (3, 0))
        d = distance_matrix(K13)
        assert principal_submatrix(d, range(1, 5)) == d

    def test_repeated_member(self):
        with pytest.raises(InvalidSubset):
            principal_submatrix(distance_matrix(P3), [1, 1])


class TestInducesSubtree:
    def test_examples(self):
        assert induces_subtree(P3, [1, 2])
        assert not induces_subtree(P3, [1, 3])
        assert not induces_subtree(K13, [1, 2, 3])
        assert induces_subtree(K13, [1, 2, 4])

    def test_matches_connectivity_oracle(self):
        for seq in itertools.product(range(1, 6), repeat=3):
            t = from_prufer(seq)
            for m in range(1, 6):
                for s in itertools.combinations(range(1, 6), m):
                    inner = [e for e in t.edges if set(e) <= set(s)]
                    assert induces_subtree(t, s) == (len(inner) == m - 1)


class TestRandom:
    def test_small_cases(self):
        assert random_tree(1, 123) == Tree(1, ())
        assert random_tree(2, 99) == path_tree(2)

    def test_deterministic(self):
        assert random_tree(12, 2024) == random_tree(12, 2024)
        assert derive_seed(42, 3) == derive_seed(42, 3)
        assert derive_seed(42, 3) != derive_seed(42, 4)

    def test_roughly_uniform_on_four_vertices(self):
        counts = {}
        for k in range(3200):
            t = random_tree(4, derive_seed(5, k))
            counts[t.edges] = counts.get(t.edges, 0) + 1
        assert len(counts) == 16
        assert min(counts.values()) > 120 and max(counts.values()) < 280

    def test_with_subtree(self):
        for k in range(30):
            t, s = random_tree_with_subtree(3 + k % 6, k % 5, derive_seed(9, k))
            assert t.n == len(s) + k % 5
            assert induces_subtree(t, s)


class TestTextFormat:
    def test_round_trip(self):
        t = from_prufer([3, 1, 3, 6])
        assert parse_tree_text(format_tree_text(t)) == t

    def test_comments_and_blanks(self):
        assert parse_tree_text("# path\n3\n\n1 2\n# mid\n2 3\n") == P3

    @pytest.mark.parametrize("text", ["", "3 4\n1 2\n", "3\n1 2 3\n", "3\n1 x\n", "3\n1 2\n"])
    def test_malformed(self, text):
        with pytest.raises(NotATree):
            parse_tree_text(text)
