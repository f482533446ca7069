import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from orginfo.graph_core import (
    Graph,
    GraphError,
    add_random_edges,
    barabasi_albert,
    complement,
    degree_summary,
    erdos_renyi,
    graph_from_edgelist,
    graph_from_json,
    graph_to_json,
    is_connected,
    is_spanning_supergraph,
    make_special,
)
from orginfo.spectral import laplacian, sym_eig

from oracles import reachable_all, random_graph_weights


def assert_valid(g):
    w = g.weights
    assert np.array_equal(w, w.T)
    assert np.all(np.diag(w) == 0)
    assert np.all((w >= 0) & (w <= 1))


@st.composite
def binary_graphs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    w = np.zeros((n, n))
    w[np.triu_indices(n, 1)] = bits
    return Graph(n, w + w.T)


class TestJson:
    def test_single_edge(self):
        g = graph_from_json('{"n":2,"edges":[[0,1]]}')
        assert g.weights[0, 1] == 1.0 and g.weights[1, 0] == 1.0

    def test_empty(self):
        g = graph_from_json('{"n":3,"edges":[]}')
        assert degree_summary(g).d_max == 0

    def test_weights_parallel_to_edges(self):
        g = graph_from_json('{"n":3,"edges":[[0,1],[2,1]],"weights":[0.5,0.25]}')
        assert g.weights[1, 0] == 0.5 and g.weights[1, 2] == 0.25 and g.weights[0, 2] == 0

    @pytest.mark.parametrize(
        "text, match",
        [
            ('{"n":2,"edges":[[0,0]]}', "self-loop"),
            ('{"n":2,"edges":[[0,2]]}', "out of range"),
            ('{"n":2,"edges":[[0,1]],"weights":[1.5]}', r"outside \[0, 1\]"),
            ('{"n":3,"edges":[[0,1],[1,0]]}', "duplicate"),
            ('{"n":2,"edges":[[0,1]', "malformed"),
            ('{"edges":[]}', '"n"'),
            ('{"n":2,"edges":[[0,1]],"weights":[1,1]}', "parallel"),
            ('{"n":2,"edges":[[0,"1"]]}', "integers"),
        ],
    )
    def test_errors(self, text, match):
        with pytest.raises(GraphError, match=match):
            graph_from_json(text)

    @given(binary_graphs())
    def test_round_trip(self, g):
        assert graph_from_json(graph_to_json(g)) == g

    def test_round_trip_weighted(self):
        g = graph_from_json('{"n":3,"edges":[[0,2]],"weights":[0.3]}')
        assert json.loads(graph_to_json(g))["weights"] == [0.3]


class TestEdgeList:
    def test_parse_with_comments_and_weights(self):
        g = graph_from_edgelist("# header\n0 1\n1 2 0.5  # trailing\n\n", n=4)
        assert g.weights[0, 1] == 1.0 and g.weights[2, 1] == 0.5 and g.n == 4

    def test_bad_line(self):
        with pytest.raises(GraphError, match="line 1"):
            graph_from_edgelist("0 1 2 3\n", n=4)

    def test_duplicate(self):
        with pytest.raises(GraphError, match="duplicate"):
            graph_from_edgelist("0 1\n1 0\n", n=2)


class TestGraphType:
    def test_rejects_asymmetric(self):
        with pytest.raises(GraphError):
            Graph(2, np.array([[0, 1.0], [0.5, 0]]))

    def test_rejects_diagonal(self):
        with pytest.raises(GraphError):
            Graph(2, np.eye(2))

    def test_immutable(self):
        g = make_special("path", 3)
        with pytest.raises(ValueError):
            g.weights[0, 1] = 0.0


class TestSpecial:
    def test_star_degrees(self):
        assert degree_summary(make_special("star", 4)).degrees.tolist() == [3, 1, 1, 1]

    def test_two_cliques_block_diagonal(self):
        w = make_special("two_cliques", 5, m=2).weights
        expected = np.zeros((5, 5))
        expected[:2, :2] = 1
        expected[2:, 2:] = 1
        np.fill_diagonal(expected, 0)
        assert np.array_equal(w, expected)

    def test_ring3_is_complete(self):
        assert make_special("ring", 3) == make_special("complete", 3)

    def test_ring_adjacency(self):
        w = make_special("ring", 6).weights
        for i in range(6):
            assert w[i, (i + 1) % 6] == 1 and w[i, (i - 1) % 6] == 1
        assert degree_summary(make_special("ring", 6)).degrees.tolist() == [2] * 6

    def test_bipartite_degrees(self):
        assert degree_summary(make_special("complete_bipartite", 5, m=2)).degrees.tolist() == [3, 3, 2, 2, 2]

    def test_star_summary(self):
        s = degree_summary(make_special("star", 5))
        assert (s.d_max, s.d_min, s.edge_count) == (4, 1, 4)

    @pytest.mark.parametrize(
        "family, n, m",
        [("ring", 2, None), ("complete_bipartite", 5, 3), ("two_cliques", 4, 0), ("blob", 3, None), ("star", 0, None)],
    )
    def test_invalid(self, family, n, m):
        with pytest.raises(GraphError):
            make_special(family, n, m)

    @pytest.mark.parametrize("family", ["complete", "star", "ring", "path"])
    @pytest.mark.parametrize("n", [3, 4, 7])
    def test_valid(self, family, n):
        assert_valid(make_special(family, n))


class TestErdosRenyi:
    def test_p0_empty(self):
        assert degree_summary(erdos_renyi(10, 0.0, 1)).edge_count == 0

    def test_p1_complete(self):
        assert erdos_renyi(10, 1.0, 1) == make_special("complete", 10)

    def test_edge_count_window(self):
        # binomial(4950, 0.1): mean 495; the [300, 700] window is a ~9 sd event
        dist = stats.binom(4950, 0.1)
        assert dist.cdf(299) + dist.sf(700) < 1e-15
        count = degree_summary(erdos_renyi(100, 0.1, 42)).edge_count
        assert 300 <= count <= 700

    def test_mean_edge_count_over_seeds(self):
        counts = [degree_summary(erdos_renyi(100, 0.1, s)).edge_count for s in range(1000)]
        assert abs(np.mean(counts) - 495) <= 30

    def test_reproducible(self):
        assert erdos_renyi(30, 0.3, 99) == erdos_renyi(30, 0.3, 99)
        assert erdos_renyi(30, 0.3, 99) != erdos_renyi(30, 0.3, 100)

    def test_bad_p(self):
        with pytest.raises(GraphError):
            erdos_renyi(5, 1.2, 0)


class TestBarabasiAlbert:
    def test_no_room(self):
        with pytest.raises(GraphError):
            barabasi_albert(5, 4, 0)

    def test_zero_attach(self):
        with pytest.raises(GraphError):
            barabasi_albert(5, 0, 0)

    def test_tree_case(self):
        g = barabasi_albert(10, 1, 7)
        # seed clique K_2 contributes one edge, then 8 new nodes with one edge each
        assert degree_summary(g).edge_count == 1 + 8
        assert reachable_all(g.weights.tolist())

    @pytest.mark.parametrize("n, m", [(20, 2), (50, 3), (100, 5)])
    def test_edge_count_and_connected(self, n, m):
        g = barabasi_albert(n, m, 3)
        m0 = m + 1
        assert degree_summary(g).edge_count == m0 * (m0 - 1) // 2 + (n - m0) * m
        assert is_connected(g)
        assert_valid(g)

    def test_reproducible(self):
        assert barabasi_albert(40, 3, 5) == barabasi_albert(40, 3, 5)

    def test_hubs_heavier_than_er(self):
        n, m = 100, 3
        mean_degree = 2 * (6 + (n - 4) * m) / n
        p = mean_degree / (n - 1)
        ba = np.array([degree_summary(barabasi_albert(n, m, 9 + s)).d_max for s in range(100)])
        er = np.array([degree_summary(erdos_renyi(n, p, 9 + s)).d_max for s in range(100)])
        assert ba.min() >= 3 * 2
        assert np.median(ba) > np.quantile(er, 0.9)
        # right skew of the BA max-degree distribution
        assert np.mean(ba) > np.median(ba) or stats.skew(ba) > 0


class TestComplementAndConnectivity:
    def test_complement_complete(self):
        assert complement(make_special("complete", 4)) == Graph.empty(4)

    def test_complement_empty(self):
        assert complement(Graph.empty(3)) == make_special("complete", 3)

    def test_complement_star(self):
        c = complement(make_special("star", 4))
        expected = np.ones((4, 4))
        expected[0, :] = expected[:, 0] = 0
        np.fill_diagonal(expected, 0)
        assert np.array_equal(c.weights, expected)

    @given(binary_graphs())
    def test_double_complement(self, g):
        assert complement(complement(g)) == g

    def test_connected_examples(self):
        assert is_connected(make_special("star", 5))
        assert not is_connected(make_special("two_cliques", 5, m=2))
        assert is_connected(Graph.empty(1))

    @given(binary_graphs())
    def test_connected_matches_bfs(self, g):
        assert is_connected(g) == reachable_all(g.weights.tolist())

    def test_connected_matches_spectrum(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 13))
            g = Graph(n, random_graph_weights(rng, n, p=rng.uniform(0.05, 0.6)))
            lam2 = sym_eig(laplacian(g)).eigenvalues[1]
            assert is_connected(g) == (lam2 > 1e-8)


class TestSupergraph:
    def test_examples(self):
        k5, s5 = make_special("complete", 5), make_special("star", 5)
        assert is_spanning_supergraph(k5, s5)
        assert not is_spanning_supergraph(s5, k5)
        assert is_spanning_supergraph(s5, s5)

    def test_size_mismatch(self):
        with pytest.raises(GraphError):
            is_spanning_supergraph(Graph.empty(2), Graph.empty(3))

    def test_add_random_edges(self, rng):
        g = make_special("path", 6)
        h = add_random_edges(g, 4, rng)
        assert is_spanning_supergraph(h, g)
        assert degree_summary(h).edge_count == 5 + 4


@given(binary_graphs(min_n=2))
def test_degree_summary_invariants(g):
    s = degree_summary(g)
    assert s.d_min <= s.degrees.mean() + 1e-12 <= s.d_max + 2e-12
    assert np.allclose(s.degrees, g.weights.sum(axis=1))
