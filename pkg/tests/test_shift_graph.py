import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graph_for, sym
from repshift.groups import SymmetricGroup
from repshift.hnn import parse_system
from repshift.shift_graph import (
    EdgeCapExceeded,
    ShiftGraph,
    build_graph,
    default_edge_cap,
    prune,
    scc_decomposition,
    to_csv,
    to_dot,
)
from repshift.words import evaluate

KNOTS = ["unknot", "trefoil", "figure-eight", "5_2", "6_1"]


def nx_graph(graph):
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(graph.num_vertices))
    g.add_edges_from(zip(graph.src.tolist(), graph.dst.tolist()))
    return g


def nx_prune(g):
    g = g.copy()
    while True:
        dead = [v for v in g if g.in_degree(v) == 0 or g.out_degree(v) == 0]
        if not dead:
            return g
        g.remove_nodes_from(dead)


@pytest.mark.parametrize("knot", KNOTS)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_edges_are_all_assignments(catalog, knot, n):
    sys, G = catalog[knot], sym(n)
    graph = graph_for(knot, n, pruned=False)
    assert graph.num_edges == G.order ** sys.base_rank
    # every edge runs from its u-image to its v-image
    for e in range(0, graph.num_edges, 7):
        lab = graph.label(e)
        assert graph.vertex(graph.src[e]) == tuple(evaluate(w, lab, G) for w in sys.u_words)
        assert graph.vertex(graph.dst[e]) == tuple(evaluate(w, lab, G) for w in sys.v_words)


@pytest.mark.parametrize("knot", KNOTS)
def test_dense_and_loop_builds_agree(catalog, knot):
    a = build_graph(catalog[knot], sym(3), dense=True)
    b = build_graph(catalog[knot], sym(3), dense=False)
    for name in ("vertices", "labels", "src", "dst"):
        assert np.array_equal(getattr(a, name), getattr(b, name))


def test_vertices_sorted_and_distinct():
    graph = graph_for("5_2", 4, pruned=False)
    rows = [tuple(v) for v in graph.vertices.tolist()]
    assert rows == sorted(set(rows))
    labels = [tuple(l) for l in graph.labels.tolist()]
    assert labels == sorted(labels)


def test_unknot_graph():
    graph = graph_for("unknot", 3, pruned=False)
    assert graph.num_vertices == 1 and graph.num_edges == 1
    assert graph.vertex(0) == ()


def test_relators_filter_edges():
    sys = parse_system("name z2\nbase_rank 1\nrelators aa\nu a\nv a\n")
    G = SymmetricGroup(3)
    graph = build_graph(sys, G)
    # identity plus three transpositions, each a fixed vertex with a self-loop
    assert graph.num_edges == 4
    assert all(s == d for s, d in zip(graph.src, graph.dst))


@pytest.mark.parametrize("knot", KNOTS)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_prune_matches_networkx(knot, n):
    raw = graph_for(knot, n, pruned=False)
    pruned = graph_for(knot, n)
    ref = nx_prune(nx_graph(raw))
    assert pruned.num_vertices == ref.number_of_nodes()
    assert pruned.num_edges == ref.number_of_edges()
    kept = sorted(tuple(raw.vertices[v]) for v in ref.nodes)
    assert kept == [tuple(v) for v in pruned.vertices.tolist()]
    if pruned.num_vertices:
        assert pruned.in_degrees().min() > 0 and pruned.out_degrees().min() > 0


def test_prune_is_idempotent():
    once = graph_for("5_2", 4)
    twice = prune(once)
    assert np.array_equal(once.vertices, twice.vertices)
    assert np.array_equal(once.labels, twice.labels)


def test_prune_hand_graph():
    # 0 -> 1 -> 1 (loop), 1 -> 2 (sink), 3 -> 0 (source chain)
    g = prune(ShiftGraph.from_edges(4, [(0, 1), (1, 1), (1, 2), (3, 0)]))
    assert g.num_vertices == 1 and g.num_edges == 1
    assert prune(ShiftGraph.from_edges(3, [(0, 1), (1, 2)])).num_vertices == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=20))))
def test_prune_and_scc_random(data):
    n, edges = data
    graph = ShiftGraph.from_edges(n, edges)
    pruned = prune(graph)
    ref = nx_prune(nx_graph(graph))
    assert pruned.num_vertices == ref.number_of_nodes()
    assert pruned.num_edges == ref.number_of_edges()
    sccs = scc_decomposition(graph)
    want = sorted(tuple(sorted(c)) for c in nx.strongly_connected_components(nx_graph(graph)))
    assert sorted(c.vertices for c in sccs) == want
    assert [c.vertices[0] for c in sccs] == sorted(c.vertices[0] for c in sccs)


def test_scc_simple_cycle_flags():
    g = ShiftGraph.from_edges(5, [(0, 1), (1, 0), (2, 2), (3, 3), (3, 3), (3, 4)])
    flags = {c.vertices: (c.is_simple_cycle, c.has_cycle) for c in scc_decomposition(g)}
    assert flags == {(0, 1): (True, True), (2,): (True, True), (3,): (False, True), (4,): (False, False)}


def test_edge_cap(catalog, monkeypatch):
    with pytest.raises(EdgeCapExceeded) as info:
        build_graph(catalog["trefoil"], sym(4), edge_cap=100)
    assert info.value.required == 576
    monkeypatch.setenv("REPSHIFT_EDGE_CAP", "35")
    assert default_edge_cap() == 35
    with pytest.raises(EdgeCapExceeded):
        build_graph(catalog["trefoil"], sym(3))
    build_graph(catalog["trefoil"], sym(3), edge_cap=36)


def test_exports():
    graph = graph_for("trefoil", 2)
    dot = to_dot(graph)
    assert dot.startswith("digraph shift {")
    assert dot.count("->") == graph.num_edges
    assert 'label="a=(1 2) b=()"' in dot
    rows = [list(map(int, line.split(","))) for line in to_csv(graph).splitlines()]
    assert np.array_equal(np.array(rows), graph.adjacency().toarray())
    bare = to_dot(ShiftGraph.from_edges(1, [(0, 0)]))
    assert "v0 -> v0" in bare


def test_adjacency_counts_parallel_edges():
    g = ShiftGraph.from_adjacency([[2, 1], [0, 3]])
    assert g.num_edges == 6
    assert g.adjacency().toarray().tolist() == [[2, 1], [0, 3]]
