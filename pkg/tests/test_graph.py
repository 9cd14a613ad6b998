"""Graph construction, parsing, and traversal primitives."""

from __future__ import annotations

import numpy as np
import pytest

from gcentral.errors import InputError
from gcentral.graph import (
    Graph,
    VertexSet,
    as_vertex_set,
    format_edge_list,
    is_connected,
    load_edge_list,
    multi_source_distances,
    parse_label_file,
    shortest_path_counts,
    weighted_degree,
)

from conftest import (
    complete_graph,
    cycle_graph,
    path_graph,
    random_connected_graph,
    star_graph,
)
import oracles


class TestLoadEdgeList:
    def test_two_edge_path(self):
        g = load_edge_list("0 1\n1 2")
        assert g.n == 3 and g.m == 2
        assert g.edges == ((0, 1), (1, 2))

    def test_novice_fixture_shape(self, novice):
        assert novice.n == 25 and novice.m == 28

    def test_expert_fixture_shape(self, expert):
        assert expert.n == 25 and expert.m == 27

    def test_self_loop_rejected(self):
        with pytest.raises(InputError, match="self-loop"):
            load_edge_list("0 0")

    def test_duplicate_edge_rejected(self):
        with pytest.raises(InputError, match="duplicate"):
            load_edge_list("0 1\n1 0")

    def test_malformed_line_reports_number(self):
        with pytest.raises(InputError, match="line 3"):
            load_edge_list("0 1\n1 2\nbroken")

    def test_non_positive_weight_rejected(self):
        with pytest.raises(InputError, match="non-positive"):
            load_edge_list("0 1 0.0", weighted=True)
        with pytest.raises(InputError, match="non-positive"):
            load_edge_list("0 1 -2", weighted=True)

    def test_weighted_requires_three_fields(self):
        with pytest.raises(InputError, match="line 1"):
            load_edge_list("0 1", weighted=True)

    def test_comments_and_blanks_ignored(self):
        g = load_edge_list("# header\n\n0 1  # trailing\n1 2\n")
        assert g.m == 2

    def test_string_ids_interned_first_seen(self):
        g = load_edge_list("b a\na c")
        assert g.labels == ("b", "a", "c")
        assert g.edges == ((0, 1), (1, 2))

    def test_label_file_overrides_interning(self):
        g = load_edge_list("b a\na c", labels=["a", "b", "c"])
        assert g.vertex_by_label("a") == 0
        assert g.edges == ((0, 1), (0, 2))

    def test_unknown_token_with_label_file(self):
        with pytest.raises(InputError, match="dragon"):
            load_edge_list("a dragon", labels=["a", "b"])

    def test_weights_parsed(self):
        g = load_edge_list("0 1 2.5\n1 2 0.5", weighted=True)
        assert g.weights == (2.5, 0.5)


class TestLabelFile:
    def test_parse(self):
        assert parse_label_file("0\talpha\n1\tbeta\n") == ["alpha", "beta"]

    def test_missing_index_rejected(self):
        with pytest.raises(InputError, match="missing"):
            parse_label_file("0\ta\n2\tc\n")

    def test_duplicate_index_rejected(self):
        with pytest.raises(InputError, match="duplicate"):
            parse_label_file("0\ta\n0\tb\n")

    def test_fixture_labels_alphabetical(self, concept_labels):
        assert concept_labels == sorted(concept_labels)
        assert concept_labels[18] == "livingthing"
        assert concept_labels[19] == "mammal"


class TestGraphInvariants:
    def test_rejects_out_of_range(self):
        with pytest.raises(InputError):
            Graph(2, [(0, 2)])

    def test_rejects_self_loop(self):
        with pytest.raises(InputError):
            Graph(2, [(1, 1)])

    def test_neighbors_symmetric(self):
        g = load_edge_list("0 1\n1 2")
        assert 1 in g.neighbors(0) and 0 in g.neighbors(1)

    def test_equality_and_hash(self):
        a = Graph(3, [(0, 1), (1, 2)])
        b = Graph(3, [(1, 2), (0, 1)])
        assert a == b and hash(a) == hash(b)

    def test_pickle_roundtrip(self):
        import pickle

        g = Graph(3, [(0, 1), (1, 2)], [1.0, 2.0], ["a", "b", "c"])
        h = pickle.loads(pickle.dumps(g))
        assert g == h and h.neighbors(1) == (0, 2)


class TestVertexSet:
    def test_canonicalization(self):
        vs = as_vertex_set([3, 1, 3, 2])
        assert vs.members == (1, 2, 3)

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            as_vertex_set([])

    def test_unsorted_rejected(self):
        with pytest.raises(InputError):
            VertexSet((2, 1))

    def test_complement(self):
        assert as_vertex_set([1]).complement(3) == (0, 2)

    def test_proper_check(self):
        g = path_graph(3)
        with pytest.raises(InputError):
            as_vertex_set([0, 1, 2]).check_proper(g)
        with pytest.raises(InputError):
            as_vertex_set([7]).check_proper(g)


class TestConnectivity:
    def test_path_connected(self):
        assert is_connected(path_graph(3))

    def test_two_disjoint_edges(self):
        assert not is_connected(Graph(4, [(0, 1), (2, 3)]))

    def test_novice_connected_vs_oracle(self, novice):
        assert is_connected(novice)
        assert len(oracles.reachable_from(novice, 0)) == novice.n

    def test_corpus_agrees_with_oracle(self):
        rng = np.random.Generator(np.random.PCG64(5))
        for _ in range(30):
            n = int(rng.integers(2, 12))
            g = random_connected_graph(rng, n)
            assert is_connected(g)
            assert len(oracles.reachable_from(g, 0)) == n


class TestMultiSourceDistances:
    def test_path_center(self):
        assert multi_source_distances(path_graph(3), [1]).dist == (1, 0, 1)

    def test_path_endpoints(self):
        assert multi_source_distances(path_graph(3), [0, 2]).dist == (0, 1, 0)

    def test_star_from_leaf(self):
        g = star_graph(4)
        field = multi_source_distances(g, [1])
        assert field.dist[0] == 1
        assert all(field.dist[v] == 2 for v in range(2, 5))

    def test_matches_min_over_pairwise_bfs(self, novice):
        rng = np.random.Generator(np.random.PCG64(7))
        apd = oracles.all_pairs_distances(novice)
        for _ in range(12):
            k = int(rng.integers(1, 6))
            members = sorted(int(v) for v in rng.choice(novice.n, size=k, replace=False))
            field = multi_source_distances(novice, members)
            for v in range(novice.n):
                assert field.dist[v] == min(apd[s][v] for s in members)

    def test_zero_iff_member(self):
        g = cycle_graph(6)
        field = multi_source_distances(g, [2, 4])
        for v in range(6):
            assert (field.dist[v] == 0) == (v in (2, 4))

    def test_edge_triangle_property(self):
        rng = np.random.Generator(np.random.PCG64(11))
        for _ in range(20):
            g = random_connected_graph(rng, int(rng.integers(3, 12)))
            members = [int(rng.integers(g.n))]
            field = multi_source_distances(g, members)
            for u, v in g.edges:
                assert abs(field.dist[u] - field.dist[v]) <= 1

    def test_singleton_agrees_with_bfs(self):
        rng = np.random.Generator(np.random.PCG64(13))
        for _ in range(15):
            g = random_connected_graph(rng, int(rng.integers(2, 10)))
            v = int(rng.integers(g.n))
            assert list(multi_source_distances(g, [v]).dist) == oracles.bfs_distances(g, v)


class TestShortestPathCounts:
    def test_four_cycle_two_paths(self):
        pc = shortest_path_counts(cycle_graph(4), 0)
        assert pc.sigma[2] == 2

    def test_path_counts_all_one(self):
        assert shortest_path_counts(path_graph(3), 0).sigma == (1, 1, 1)

    def test_complete_graph_single_paths(self):
        pc = shortest_path_counts(complete_graph(4), 0)
        assert all(pc.sigma[v] == 1 for v in range(1, 4))
        paths = oracles.enumerate_shortest_paths(complete_graph(4), 0, 3)
        assert len(paths) == 1

    def test_counts_match_path_enumeration(self):
        rng = np.random.Generator(np.random.PCG64(17))
        for _ in range(15):
            g = random_connected_graph(rng, int(rng.integers(3, 8)), extra_edge_prob=0.4)
            pc = shortest_path_counts(g, 0)
            for v in range(1, g.n):
                assert pc.sigma[v] == len(oracles.enumerate_shortest_paths(g, 0, v))

    def test_layer_recomputation_consistency(self):
        g = cycle_graph(8)
        pc = shortest_path_counts(g, 3)
        for v in range(g.n):
            if v == 3:
                assert pc.sigma[v] == 1
                continue
            total = sum(
                pc.sigma[u] for u in g.neighbors(v) if pc.dist[u] == pc.dist[v] - 1
            )
            assert pc.sigma[v] == total

    def test_source_invariants(self):
        pc = shortest_path_counts(path_graph(5), 2)
        assert pc.dist[2] == 0 and pc.sigma[2] == 1


class TestWeightedDegree:
    def test_star_center(self):
        assert weighted_degree(star_graph(3), 0) == 3

    def test_additivity(self):
        g = Graph(3, [(0, 1), (0, 2)], [2.5, 0.5])
        assert weighted_degree(g, 0) == 3.0

    def test_novice_livingthing(self, novice):
        assert weighted_degree(novice, novice.vertex_by_label("livingthing")) == 5

    def test_sum_equals_twice_total_weight(self):
        rng = np.random.Generator(np.random.PCG64(19))
        for _ in range(10):
            g = random_connected_graph(rng, int(rng.integers(2, 10)), weighted=True)
            total = sum(weighted_degree(g, v) for v in range(g.n))
            assert total == pytest.approx(2 * sum(g.weights), rel=1e-12)


class TestFormatEdgeList:
    def test_roundtrip_ids(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)], [1.0, 2.0, 1.0])
        text = format_edge_list(g)
        h = load_edge_list(text)
        assert g.edges == h.edges and g.weights == h.weights

    def test_roundtrip_labels(self, novice):
        text = format_edge_list(novice, use_labels=True)
        h = load_edge_list(text, labels=list(novice.labels))
        assert h.edges == novice.edges
