import random

import numpy as np
import pytest

from coopbandits.graphs import (
    UNREACHABLE,
    CommDigraph,
    Graph,
    ParamSet,
    alpha_upper_bound_connected,
    bfs_distances,
    bidirected_arcs,
    build_comm_digraph,
    clique_graph,
    cycle_graph,
    diameter,
    greedy_independent_set,
    independence_number,
    is_connected,
    parse_edge_list,
    parse_graph_spec,
    path_graph,
    power_graph,
    random_connected_graph,
    strip_orientation,
)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def alpha_brute_force(g):
    """Independent oracle: enumerate every vertex subset."""
    adj = g.adjacency()
    best = 0
    for mask in range(1 << g.n):
        members = [v for v in range(g.n) if mask >> v & 1]
        if all(u not in adj[v] for i, v in enumerate(members) for u in members[i + 1:]):
            best = max(best, len(members))
    return best


class TestDistances:
    def test_two_hops_on_path(self):
        dist = bfs_distances(path_graph(3))
        assert dist[0, 2] == 2

    def test_clique_all_pairs_one(self):
        dist = bfs_distances(clique_graph(4))
        off = dist[~np.eye(4, dtype=bool)]
        assert np.all(off == 1)

    def test_line6_distance_anchor(self):
        # agent at index 3 hears about index 1 two rounds late
        dist = bfs_distances(path_graph(6))
        assert dist[3, 1] == 2

    def test_symmetry_zero_diagonal_triangle(self):
        rng = random.Random(5)
        for _ in range(20):
            g = random_connected_graph(rng.randint(2, 10), 0.3, rng)
            dist = bfs_distances(g)
            assert np.array_equal(dist, dist.T)
            assert np.all(np.diag(dist) == 0)
            for u in range(g.n):
                for v in range(g.n):
                    for w in range(g.n):
                        assert dist[u, w] <= dist[u, v] + dist[v, w]

    def test_disconnected_uses_sentinel(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        dist = bfs_distances(g)
        assert dist[0, 2] == UNREACHABLE
        assert not is_connected(dist)


class TestPowerGraph:
    def test_power_one_is_identity(self):
        g = cycle_graph(7)
        assert power_graph(g, bfs_distances(g), 1).edges == g.edges

    def test_power_at_diameter_is_clique(self):
        g = path_graph(5)
        dist = bfs_distances(g)
        power = power_graph(g, dist, diameter(dist))
        assert power.edges == clique_graph(5).edges

    def test_path6_square_adds_distance_two_pairs(self):
        g = path_graph(6)
        power = power_graph(g, bfs_distances(g), 2)
        assert power.edges == g.edges | {(0, 2), (1, 3), (2, 4), (3, 5)}

    def test_power_zero_edgeless(self):
        g = clique_graph(4)
        assert power_graph(g, bfs_distances(g), 0).edges == frozenset()

    def test_nested_in_d(self):
        rng = random.Random(9)
        for _ in range(10):
            g = random_connected_graph(rng.randint(3, 10), 0.25, rng)
            dist = bfs_distances(g)
            for d in range(4):
                small = power_graph(g, dist, d).edges
                large = power_graph(g, dist, d + 1).edges
                assert small <= large


class TestDiameter:
    def test_known_values(self):
        assert diameter(bfs_distances(path_graph(6))) == 5
        assert diameter(bfs_distances(clique_graph(5))) == 1
        assert diameter(bfs_distances(cycle_graph(6))) == 3

    def test_disconnected_rejected(self):
        g = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(ValueError, match="disconnected"):
            diameter(bfs_distances(g))


class TestIndependenceNumber:
    def test_edgeless_is_n(self):
        assert independence_number(Graph(7, frozenset())) == 7

    def test_path6_and_its_square(self):
        g = path_graph(6)
        assert independence_number(g) == 3
        power = power_graph(g, bfs_distances(g), 2)
        assert independence_number(power) == 2
        assert alpha_brute_force(g) == 3
        assert alpha_brute_force(power) == 2

    def test_known_small_graphs(self):
        assert independence_number(clique_graph(6)) == 1
        assert independence_number(cycle_graph(5)) == 2
        assert independence_number(petersen()) == 4
        assert alpha_brute_force(petersen()) == 4

    def test_matches_brute_force_on_random_graphs(self):
        rng = random.Random(11)
        for _ in range(40):
            n = rng.randint(1, 9)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < 0.4]
            g = Graph.from_edges(n, edges)
            assert independence_number(g) == alpha_brute_force(g)

    def test_greedy_is_valid_and_below_exact(self):
        rng = random.Random(13)
        for _ in range(30):
            n = rng.randint(2, 10)
            g = random_connected_graph(n, 0.3, rng)
            chosen = greedy_independent_set(g)
            adj = g.adjacency()
            assert all(u not in adj[v] for i, v in enumerate(chosen)
                       for u in chosen[i + 1:])
            assert len(chosen) <= independence_number(g)
            assert independence_number(g, mode="greedy") == len(chosen)

    def test_cap_enforced(self):
        g = Graph(50, frozenset())
        with pytest.raises(ValueError, match="greedy"):
            independence_number(g)
        assert independence_number(g, cap=50) == 50

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            independence_number(path_graph(3), mode="bogus")


class TestAlphaUpperBound:
    def test_formula_values(self):
        assert alpha_upper_bound_connected(6, 2) == 3
        assert alpha_upper_bound_connected(10, 0) == 10
        assert alpha_upper_bound_connected(100, 18) == 10

    def test_chain_and_cap_on_random_connected(self):
        rng = random.Random(17)
        for _ in range(30):
            n = rng.randint(2, 12)
            g = random_connected_graph(n, 0.2, rng)
            dist = bfs_distances(g)
            dg = diameter(dist)
            alphas = [independence_number(power_graph(g, dist, d))
                      for d in range(dg + 1)]
            assert alphas[0] == n
            if dg >= 1:
                assert alphas[0] > alphas[1]
            for a, b in zip(alphas, alphas[1:]):
                assert a >= b
            assert alphas[-1] == 1
            for d, a in enumerate(alphas):
                assert a <= alpha_upper_bound_connected(n, d)


class TestCommDigraph:
    def test_uniform_params_match_bidirected_power(self):
        g = cycle_graph(7)
        dist = bfs_distances(g)
        for d in (0, 1, 2, 3):
            dg = build_comm_digraph(dist, ParamSet.uniform(7, d))
            assert dg.arcs == bidirected_arcs(power_graph(g, dist, d))

    def test_line_in_neighborhood_example(self):
        # delays/ttls chosen so agent 4 hears exactly agents 3, 4, 5
        g = path_graph(6)
        dist = bfs_distances(g)
        delays = [0, 0, 0, 0, 1, 0]
        ttls = [0, 0, 0, 2, 0, 1]
        dg = build_comm_digraph(dist, ParamSet(tuple(delays), tuple(ttls)))
        assert dg.in_neighbors(4) == {3, 4, 5}
        exhaustive = {
            (u, v)
            for v in range(6)
            for u in range(6)
            if dist[v, u] <= min(delays[v], ttls[u])
        }
        assert dg.arcs == frozenset(exhaustive)

    def test_zero_delay_hears_only_itself(self):
        g = clique_graph(4)
        dist = bfs_distances(g)
        params = ParamSet((0, 2, 2, 2), (2, 2, 2, 2))
        dg = build_comm_digraph(dist, params)
        assert dg.in_neighbors(0) == {0}

    def test_self_loops_required(self):
        with pytest.raises(ValueError, match="self-loops"):
            CommDigraph(2, frozenset({(0, 0)}))

    def test_unreachable_never_qualifies(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        dist = bfs_distances(g)
        dg = build_comm_digraph(dist, ParamSet.uniform(4, 5))
        assert dg.in_neighbors(0) == {0, 1}

    def test_strip_orientation(self):
        dg = CommDigraph(3, frozenset({(0, 0), (1, 1), (2, 2), (0, 1), (2, 1)}))
        shadow = strip_orientation(dg)
        assert shadow.edges == frozenset({(0, 1), (1, 2)})


class TestGeneratorsAndParsing:
    def test_spec_shapes(self):
        assert parse_graph_spec("path:4").edges == frozenset({(0, 1), (1, 2), (2, 3)})
        assert len(parse_graph_spec("cycle:5").edges) == 5
        assert len(parse_graph_spec("clique:5").edges) == 10
        star = parse_graph_spec("star:5")
        assert all(0 in e for e in star.edges) and star.n == 5
        grid = parse_graph_spec("grid:2x3")
        assert grid.n == 6 and len(grid.edges) == 7
        barbell = parse_graph_spec("barbell:4:3")
        assert barbell.n == 7
        assert (3, 4) in barbell.edges and (4, 5) in barbell.edges

    def test_er_deterministic_in_seed(self):
        a = parse_graph_spec("er:12:0.3:7")
        b = parse_graph_spec("er:12:0.3:7")
        c = parse_graph_spec("er:12:0.3:8")
        assert a.edges == b.edges
        assert a.edges != c.edges

    def test_bad_specs(self):
        for spec in ("blob:3", "path", "grid:2y3", "er:5:x:1"):
            with pytest.raises(ValueError):
                parse_graph_spec(spec)

    def test_edge_list_roundtrip(self):
        text = "# comment\nn 5\n0 1\n1 2\n"
        g = parse_edge_list(text)
        assert g.n == 5
        assert g.edges == frozenset({(0, 1), (1, 2)})

    def test_edge_list_infers_count(self):
        g = parse_edge_list("0 3\n1 2\n")
        assert g.n == 4

    def test_edge_list_errors(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_edge_list("0 1 2\n")
        with pytest.raises(ValueError, match="empty"):
            parse_edge_list("# nothing\n")
        with pytest.raises(ValueError, match="self-loop"):
            parse_edge_list("1 1\n")

    def test_graph_validation(self):
        with pytest.raises(ValueError, match="out of range"):
            Graph(2, frozenset({(0, 5)}))
        with pytest.raises(ValueError, match="self-loop"):
            Graph(2, frozenset({(1, 1)}))
        with pytest.raises(ValueError, match="normalized"):
            Graph(3, frozenset({(2, 1)}))

    def test_random_connected_is_connected(self):
        rng = random.Random(3)
        for _ in range(20):
            g = random_connected_graph(rng.randint(1, 12), 0.2, rng)
            assert is_connected(bfs_distances(g))
