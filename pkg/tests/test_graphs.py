"""Graph representation, serialization, connectivity, period, isomorphism."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from corpora import T1, T2, T3, complete_digraph, random_sc_graph
from syncfactor import (
    DeskScaleExceeded,
    Graph,
    GraphFormatError,
    NotStronglyConnected,
    Path,
    UnsupportedInput,
    VertexPartition,
    brute_force_isomorphic,
    canonical_form,
    is_strongly_connected,
    period,
)


# ---------------------------------------------------------------- construction


def test_edge_ids_are_positional(w3):
    assert w3.num_edges == 6
    assert w3.source(3) == 1
    assert w3.target(3) == 2
    # parallel edges keep distinct ids
    assert w3.source(2) == w3.source(3) and w3.target(2) == w3.target(3)


def test_loops_and_duplicates_are_permitted():
    g = Graph(2, [(0, 0), (0, 1), (0, 1), (1, 1), (1, 0)])
    assert g.num_edges == 5
    assert g.out_degree(0) == 3


def test_out_of_range_edge_rejected():
    with pytest.raises(GraphFormatError):
        Graph(2, [(0, 1), (1, 5)])
    with pytest.raises(GraphFormatError):
        Graph(0, [(0, 0)])


def test_out_edges_in_edges(w3):
    assert list(w3.out_edges(1)) == [2, 3]
    assert list(w3.in_edges(2)) == [1, 2, 3]
    assert w3.in_degree(0) == 2
    assert set(w3.followers(0)) == {1, 2}


# ---------------------------------------------------------------- serialization


def test_read_graph_m2(m2):
    text = '{"num_vertices": 1, "edges": [[0, 0], [0, 0]]}'
    assert Graph.from_json(text) == m2


def test_read_graph_w3(w3):
    text = '{"num_vertices": 3, "edges": [[0,1],[0,2],[1,2],[1,2],[2,0],[2,0]]}'
    assert Graph.from_json(text) == w3


def test_read_graph_out_of_range_vertex():
    with pytest.raises(GraphFormatError, match="5"):
        Graph.from_json('{"num_vertices": 2, "edges": [[0, 1], [1, 5]]}')


def test_read_graph_malformed():
    with pytest.raises(GraphFormatError):
        Graph.from_json("not json")
    with pytest.raises(GraphFormatError):
        Graph.from_json('{"edges": []}')
    with pytest.raises(GraphFormatError):
        Graph.from_json('{"num_vertices": -1, "edges": []}')


def test_round_trip_is_identity(w3, t3):
    for g in (w3, t3, Graph(1, [])):
        assert Graph.from_json(g.to_json()) == g
        # and the serialized form itself is stable
        assert Graph.from_json(g.to_json()).to_json() == g.to_json()


def test_round_trip_preserves_edge_order():
    g = Graph(3, [(2, 0), (0, 1), (2, 0), (1, 2)])
    again = Graph.from_json(g.to_json())
    assert again.edges == g.edges
    assert json.loads(g.to_json())["edges"] == [[2, 0], [0, 1], [2, 0], [1, 2]]


# ---------------------------------------------------------------- connectivity


def test_strongly_connected_examples(k3, c2x2):
    assert is_strongly_connected(k3)
    assert is_strongly_connected(c2x2)
    assert not is_strongly_connected(Graph(2, [(0, 1)]))


def test_single_vertex_no_edges_is_strongly_connected():
    assert is_strongly_connected(Graph(1, []))


def test_vertexless_graph_rejected():
    with pytest.raises(GraphFormatError):
        Graph(0, [])


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_strongly_connected_matches_oracle(data):
    n = data.draw(st.integers(1, 6))
    num_edges = data.draw(st.integers(0, 12))
    edges = data.draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
            min_size=num_edges,
            max_size=num_edges,
        )
    )
    g = Graph(n, edges)
    assert is_strongly_connected(g) == oracles.oracle_strongly_connected(g)


# ---------------------------------------------------------------- period


def test_period_examples(w3, t3):
    three_cycle = Graph(3, [(0, 1), (1, 2), (2, 0)])
    assert period(three_cycle) == 3
    assert period(t3) == 2
    assert period(w3) == 1


def test_period_rejects_disconnected_and_edgeless():
    with pytest.raises(NotStronglyConnected):
        period(Graph(2, [(0, 1)]))
    with pytest.raises(GraphFormatError):
        period(Graph(1, []))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_period_matches_cycle_gcd_oracle(seed):
    import random

    g = random_sc_graph(random.Random(seed), max_vertices=6, max_edges=10)
    assert period(g) == oracles.oracle_period(g)


def test_period_divides_every_cycle_length(sc_universe_4_8):
    import networkx as nx

    for g in sc_universe_4_8[:400]:
        if g.num_edges == 0:
            continue
        p = period(g)
        nxg = nx.MultiDiGraph()
        nxg.add_nodes_from(range(g.num_vertices))
        nxg.add_edges_from(g.edges)
        for cycle in nx.simple_cycles(nxg):
            assert len(cycle) % p == 0


# ---------------------------------------------------------------- isomorphism


def test_isomorphism_examples(m2, c2x2):
    assert brute_force_isomorphic(T1, T1)
    assert not brute_force_isomorphic(T1, T2)
    assert not brute_force_isomorphic(m2, c2x2)


def test_isomorphism_sees_multiplicities():
    g = Graph(2, [(0, 1), (0, 1), (1, 0)])
    h = Graph(2, [(0, 1), (1, 0), (1, 0)])
    assert brute_force_isomorphic(g, h)  # swap the two vertices
    assert not brute_force_isomorphic(g, Graph(2, [(0, 1), (0, 1), (1, 1)]))


def test_isomorphism_bound_enforced():
    big = complete_digraph(9)
    with pytest.raises(DeskScaleExceeded):
        brute_force_isomorphic(big, big)


def test_canonical_form_respects_isomorphism(k3):
    relabeled = Graph(3, [(1, 2), (1, 0), (2, 1), (2, 0), (0, 1), (0, 2)])
    assert brute_force_isomorphic(k3, relabeled)
    assert canonical_form(k3) == canonical_form(relabeled)
    assert canonical_form(k3) != canonical_form(T1)


# ---------------------------------------------------------------- paths


def test_path_endpoints(w3):
    p = Path(w3, [0, 2, 4])  # 0 -> 1 -> 2 -> 0
    assert p.start == 0
    assert p.end == 0
    assert len(p) == 3


def test_path_rejects_non_adjacent(w3):
    with pytest.raises(GraphFormatError):
        Path(w3, [0, 0])  # edge 0 ends at 1, edge 0 starts at 0


def test_empty_path_needs_anchor(w3):
    p = Path(w3, [], anchor=2)
    assert p.start == 2 and p.end == 2
    with pytest.raises(GraphFormatError):
        Path(w3, [])


# ---------------------------------------------------------------- partitions


def test_vertex_partition_blocks(w3):
    part = VertexPartition(w3, [0, 1, 0])
    assert part.num_classes == 2
    assert part.block(0) == (0, 2)
    assert part.blocks() == [(0, 2), (1,)]


def test_vertex_partition_from_blocks(w3):
    part = VertexPartition.from_blocks(w3, [[1], [0, 2]])
    assert list(part.classes) == [1, 0, 1]


def test_vertex_partition_requires_contiguous_classes(w3):
    with pytest.raises(GraphFormatError):
        VertexPartition(w3, [0, 2, 0])  # class 1 skipped
