import pytest
from hypothesis import given, strategies as st

from loopforest.errors import MissingEdgeError, UnknownVertexError
from loopforest.graph import Cfg


def test_add_vertex_dense_ids():
    g = Cfg()
    assert g.add_vertex() == 0
    assert g.add_vertex() == 1
    assert g.add_vertex() == 2
    g3 = Cfg(3)
    assert g3.add_vertex() == 3


def test_add_vertex_distinct():
    g = Cfg()
    assert g.add_vertex() != g.add_vertex()


def test_insert_edge_updates_both_sides():
    g = Cfg(2)
    g.insert_edge_raw(0, 1)
    assert g.out_adj[0] == [1]
    assert g.in_adj[1] == [0]


def test_insert_parallel_edges():
    g = Cfg(2)
    g.insert_edge_raw(0, 1)
    g.insert_edge_raw(0, 1)
    assert g.multiplicity(0, 1) == 2
    assert g.predecessors(1) == [0, 0]


def test_insert_self_edge():
    g = Cfg(3)
    g.insert_edge_raw(2, 2)
    assert 2 in g.out_adj[2]
    assert 2 in g.in_adj[2]


def test_insert_unknown_vertex():
    g = Cfg(2)
    with pytest.raises(UnknownVertexError):
        g.insert_edge_raw(0, 5)


def test_delete_decrements_multiplicity():
    g = Cfg(2)
    g.insert_edge_raw(0, 1)
    g.insert_edge_raw(0, 1)
    g.delete_edge_raw(0, 1)
    assert g.multiplicity(0, 1) == 1
    g.delete_edge_raw(0, 1)
    assert not g.has_edge(0, 1)


def test_delete_absent_edge_leaves_graph_unchanged():
    g = Cfg(2)
    g.insert_edge_raw(0, 1)
    with pytest.raises(MissingEdgeError):
        g.delete_edge_raw(1, 0)
    assert g.m == 1
    g.check_consistency()


def test_predecessors():
    g = Cfg(4)
    assert g.predecessors(0) == []
    g.insert_edge_raw(1, 3)
    g.insert_edge_raw(2, 3)
    assert g.predecessors(3) == [1, 2]
    g.insert_edge_raw(1, 3)
    assert g.predecessors(3) == [1, 2, 1]
    with pytest.raises(UnknownVertexError):
        g.predecessors(9)


edge_scripts = st.lists(
    st.tuples(st.sampled_from(["+", "-"]), st.integers(0, 5), st.integers(0, 5)),
    max_size=60)


@given(edge_scripts)
def test_adjacency_stays_consistent(script):
    g = Cfg(6)
    for kind, u, v in script:
        if kind == "+":
            g.insert_edge_raw(u, v)
        else:
            try:
                g.delete_edge_raw(u, v)
            except MissingEdgeError:
                pass
    g.check_consistency()
    assert sum(len(a) for a in g.out_adj) == g.m


@given(edge_scripts)
def test_insert_then_delete_is_identity(script):
    g = Cfg(6)
    for _, u, v in script:
        g.insert_edge_raw(u, v)
    before = ([list(a) for a in g.out_adj], [list(a) for a in g.in_adj])
    g.insert_edge_raw(2, 4)
    g.delete_edge_raw(2, 4)
    assert ([list(a) for a in g.out_adj], [list(a) for a in g.in_adj]) == before
