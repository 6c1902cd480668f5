import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ctpvis.graph import (
    BlockageRealization,
    Graph,
    GraphError,
    InvalidPathError,
    VisibilityMap,
    edge_key,
    grid_edges,
    parse_graph,
    path_cost,
    path_edges,
    serialize_graph,
    shortest_path,
    undirected_id,
)
from oracles import brute_force_min_cost, random_graph, simple_path_costs


def line3():
    return Graph(3, [(0, 1, 1.0, 1.0), (1, 2, 1.0, 1.0)])


def grid3():
    return Graph(9, [(u, v, 1.0, 1.0) for u, v in grid_edges(3, 3)])


def test_line_shortest_path():
    assert shortest_path(line3(), 0, 2) == ((0, 1, 2), 2.0)


def test_grid_corner_to_corner_matches_enumeration():
    g = grid3()
    path, cost = shortest_path(g, 0, 8)
    assert cost == min(simple_path_costs(g, 0, 8)) == 4.0
    assert path[0] == 0 and path[-1] == 8 and len(path) == 5


def test_masked_bridge_disconnects():
    g = Graph(4, [(0, 1, 1, 1), (1, 2, 1, 1), (2, 3, 1, 1)])
    assert shortest_path(g, 0, 3, {edge_key(1, 2)}) is None


def test_src_equals_dst():
    assert shortest_path(line3(), 1, 1) == ((1,), 0.0)


def test_unknown_node_rejected():
    with pytest.raises(GraphError):
        shortest_path(line3(), 0, 7)


def test_tie_break_prefers_smaller_predecessor():
    # two equal-cost routes 0-1-3 and 0-2-3: node 3 is reached via 1
    g = Graph(4, [(0, 2, 1, 1), (0, 1, 1, 1), (2, 3, 1, 1), (1, 3, 1, 1)])
    assert shortest_path(g, 0, 3)[0] == (0, 1, 3)
    g2 = Graph(4, [(0, 1, 1, 1), (0, 2, 1, 1), (1, 3, 1, 1), (2, 3, 1, 1)])
    assert shortest_path(g2, 3, 0)[0] == (3, 1, 0)


def test_path_cost_examples():
    g = Graph(2, [(0, 1, 1.0, 4.0)])
    assert path_cost(g, [0]) == 0
    assert path_cost(Graph(2, [(0, 1, 3.0, 3.0)]), [0, 1]) == 3
    assert path_cost(g, [0, 1, 0]) == 5


def test_path_cost_rejects_non_adjacent():
    with pytest.raises(InvalidPathError):
        path_cost(line3(), [0, 2])


def test_undirected_id():
    g = line3()
    assert undirected_id(g, 0, 1) == undirected_id(g, 1, 0)
    assert undirected_id(g, 0, 1) != undirected_id(g, 1, 2)
    with pytest.raises(GraphError):
        undirected_id(g, 0, 0)
    with pytest.raises(GraphError):
        undirected_id(g, 0, 2)


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 0, 1, 1)],
        [(0, 1, 1, 1), (1, 0, 1, 1)],
        [(0, 1, 0.0, 1)],
        [(0, 1, 1, -2)],
        [(0, 1, math.inf, 1)],
        [(0, 5, 1, 1)],
    ],
)
def test_construction_errors(edges):
    with pytest.raises(GraphError):
        Graph(3, edges)


def test_symmetry_survives_edge_removal():
    g = grid3().without_edges([edge_key(0, 1)])
    assert not g.has_edge(0, 1) and not g.has_edge(1, 0)
    for u in g.nodes:
        for v in g.neighbors(u):
            assert g.has_edge(v, u)


def test_visibility_always_contains_incident_edges():
    g = grid3()
    vis = VisibilityMap(g, {4: [edge_key(0, 1)]})
    assert vis(4) == g.incident(4) | {edge_key(0, 1)}
    assert vis(0) == g.incident(0)
    with pytest.raises(GraphError):
        VisibilityMap(g, {0: [edge_key(0, 8)]})


def test_blockage_realization_bidirectional():
    g = line3()
    b = BlockageRealization(g, [(1, 0)])
    assert edge_key(0, 1) in b and len(b) == 1
    with pytest.raises(GraphError):
        BlockageRealization(g, [(0, 2)])


def test_serialization_round_trip_with_awkward_floats():
    g = Graph(3, [(0, 1, 0.1 + 0.2, 1 / 3), (1, 2, 1e-3, 7.0)], coords=[(0, 0, 0.0), (0, 1, 2.5), (0, 2, 1 / 7)])
    vis = VisibilityMap(g, {0: [edge_key(1, 2)]})
    text = serialize_graph(g, vis)
    g2, vis2 = parse_graph(text)
    assert g2 == g and vis2 == vis
    assert serialize_graph(g2, vis2) == text


@pytest.mark.parametrize("bad", ["edge 0 1 1 1", "nodes 2\nedge 0 1 x 1", "nodes 2\nfrob 1", "nodes 2\nvis 0 0+1"])
def test_parse_errors(bad):
    with pytest.raises(GraphError):
        parse_graph(bad)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 10))
def test_optimality_against_brute_force(seed, n):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, n, p_edge=0.45, integer_costs=bool(seed % 2))
    src, dst = (int(x) for x in rng.choice(n, 2, replace=False))
    masked = {k for k in g.edge_keys() if rng.random() < 0.2}
    found = shortest_path(g, src, dst, masked)
    best = brute_force_min_cost(g, src, dst, masked)
    if found is None:
        assert best == math.inf
    else:
        path, cost = found
        assert math.isclose(cost, best, rel_tol=0, abs_tol=1e-9)
        assert cost == path_cost(g, path)
        assert not set(path_edges(path)) & masked


@given(seed=st.integers(0, 2**32 - 1))
def test_determinism(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 9, 0.5)
    again = Graph(g.num_nodes, list(reversed(g.undirected_edges())))
    assert shortest_path(g, 0, 8) == shortest_path(g, 0, 8) == shortest_path(again, 0, 8)
