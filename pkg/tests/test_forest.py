import pytest

from loopforest.dfst import NONE, DepthFirstTree
from loopforest.errors import IrreducibleError
from loopforest.forest import LoopNestingForest, LoopType
from loopforest.graph import Cfg
from loopforest.maintainer import LoopForestMaintainer
from loopforest.oracle import build_loop_forest


def maintained(n, edges, root=0):
    m = LoopForestMaintainer(Cfg(n, root))
    for u, v in edges:
        m.insert_edge(u, v)
    return m


def assert_matches_oracle(m):
    static = build_loop_forest(m.g, m.tree)
    assert m.forest.verify_against(static), \
        f"maintained:\n{m.forest.dump()}\noracle:\n{static.dump()}"


# -- find_loop_head -----------------------------------------------------------


def test_find_loop_head_no_header():
    m = maintained(3, [(0, 1), (1, 2)])
    assert m.forest.find_loop_head(m.tree, 2, 0) == 2


def test_find_loop_head_consistent_header_stops_immediately():
    # chain 0 -> 1 -> 2, loop (2, 1): headers[2] = 1, 1 is an ancestor of 1
    m = maintained(3, [(0, 1), (1, 2), (2, 1)])
    assert m.forest.headers[2] == 1
    assert m.forest.find_loop_head(m.tree, 2, 1) == 2


def test_find_loop_head_climbs_to_consistent_level():
    # nested: 1 heads the outer loop, 2 the inner; lifting a deep member
    # toward the outer header must stop at the inner header
    m = maintained(4, [(0, 1), (1, 2), (2, 3), (3, 2), (3, 1)])
    f = m.forest
    assert f.headers[3] == 2 and f.headers[2] == 1
    assert f.find_loop_head(m.tree, 3, 1) == 2


# -- insertion ----------------------------------------------------------------


def test_insert_self_loop_marks_self():
    m = maintained(2, [(0, 1)])
    m.insert_edge(1, 1)
    assert m.forest.types[1] is LoopType.SELF
    assert m.forest.counts == [1, 0]
    assert_matches_oracle(m)


def test_insert_self_loop_on_reducible_header_keeps_type():
    m = maintained(3, [(0, 1), (1, 2), (2, 1)])
    m.insert_edge(1, 1)
    assert m.forest.types[1] is LoopType.REDUCIBLE
    assert_matches_oracle(m)


def test_insert_back_edge_builds_loop():
    m = maintained(3, [(0, 1), (1, 2)])
    m.insert_edge(2, 1)
    f = m.forest
    assert f.types[1] is LoopType.REDUCIBLE
    assert f.headers[2] == 1
    assert f.headers[1] == NONE
    assert f.counts == [0, 1]
    assert_matches_oracle(m)


def test_insert_cross_into_loop_body_is_irreducible():
    # loop {1, 2} off the chain, plus a sibling 3; (3, 2) enters at a non-header
    m = maintained(4, [(0, 1), (1, 2), (2, 1), (0, 3)])
    with pytest.raises(IrreducibleError):
        m.insert_edge(3, 2)
    assert not m.g.has_edge(3, 2)
    assert_matches_oracle(m)


def test_insert_nested_loops():
    m = maintained(4, [(0, 1), (1, 2), (2, 3)])
    m.insert_edge(3, 2)
    m.insert_edge(3, 1)
    f = m.forest
    assert f.headers[3] == 2
    assert f.headers[2] == 1
    assert f.types[1] is LoopType.REDUCIBLE and f.types[2] is LoopType.REDUCIBLE
    assert f.counts == [0, 2]
    assert_matches_oracle(m)


def test_insert_forward_edge_into_loop_is_noop():
    m = maintained(4, [(0, 1), (1, 2), (2, 3), (3, 1)])
    before = m.forest.snapshot()
    m.insert_edge(1, 3)  # header into its own body
    assert m.forest.snapshot() == before
    assert_matches_oracle(m)


def test_insert_entry_below_header_absorbs_source():
    # 1 heads {1, 2, 3}; 4 hangs below 1 outside the body; (4, 3) pulls 4 in
    m = maintained(5, [(0, 1), (1, 2), (2, 3), (3, 1), (1, 4)])
    assert m.forest.headers == [NONE, NONE, 1, 1, NONE]
    m.insert_edge(4, 3)
    assert m.forest.headers[4] == 1
    assert_matches_oracle(m)


def test_insert_back_edge_into_outer_loop_lifts_inner():
    # inner loop {2, 3} inside outer {1, 2, 3}: inserting the outer back edge
    # after the inner exists must leave the inner chain intact
    m = maintained(4, [(0, 1), (1, 2), (2, 3), (3, 2)])
    m.insert_edge(3, 1)
    f = m.forest
    assert f.headers[3] == 2 and f.headers[2] == 1 and f.headers[1] == NONE
    assert_matches_oracle(m)


def test_parallel_back_edge_insert_changes_nothing():
    m = maintained(3, [(0, 1), (1, 2), (2, 1)])
    before = m.forest.snapshot()
    counters = m.insert_edge(2, 1)
    assert m.forest.snapshot() == before
    assert counters.k <= 4  # guard exit, no flood
    assert_matches_oracle(m)


def test_attachment_with_preexisting_back_edge():
    # 2 is detached but already carries (2, 1) and (1, 2) arrives later
    g = Cfg(3)
    m = LoopForestMaintainer(g)
    m.insert_edge(0, 1)
    m.insert_edge(2, 1)  # source detached: no loop effect yet
    assert m.forest.counts == [0, 0]
    m.insert_edge(1, 2)  # attaches 2; the old edge becomes a live back edge
    f = m.forest
    assert f.types[1] is LoopType.REDUCIBLE
    assert f.headers[2] == 1
    assert_matches_oracle(m)


def test_attachment_restores_self_loop_census():
    g = Cfg(3)
    m = LoopForestMaintainer(g)
    m.insert_edge(0, 1)
    g2 = m.g
    # detached vertex 2 with a self edge, then attach it
    m.insert_edge(2, 2)
    assert m.forest.types[2] is LoopType.NONHEADER  # detached: not counted
    m.insert_edge(1, 2)
    assert m.forest.types[2] is LoopType.SELF
    assert m.forest.counts == [1, 0]
    assert_matches_oracle(m)


# -- deletion -------------------------------------------------------------------


def test_delete_self_loop_downgrades():
    m = maintained(2, [(0, 1), (1, 1)])
    m.delete_edge(1, 1)
    assert m.forest.types[1] is LoopType.NONHEADER
    assert m.forest.counts == [0, 0]
    assert_matches_oracle(m)


def test_delete_one_of_two_parallel_self_loops_keeps_self():
    m = maintained(2, [(0, 1), (1, 1), (1, 1)])
    m.delete_edge(1, 1)
    assert m.forest.types[1] is LoopType.SELF
    assert_matches_oracle(m)


def test_delete_back_edge_dissolves_loop():
    m = maintained(3, [(0, 1), (1, 2), (2, 1)])
    m.delete_edge(2, 1)
    f = m.forest
    assert f.types[1] is LoopType.NONHEADER
    assert f.headers[2] == NONE
    assert f.counts == [0, 0]
    assert_matches_oracle(m)


def test_delete_back_edge_downgrades_to_self_when_self_edge_present():
    m = maintained(3, [(0, 1), (1, 1), (1, 2), (2, 1)])
    assert m.forest.types[1] is LoopType.REDUCIBLE
    m.delete_edge(2, 1)
    assert m.forest.types[1] is LoopType.SELF
    assert m.forest.counts == [1, 0]
    assert_matches_oracle(m)


def test_delete_forward_edge_is_noop():
    m = maintained(4, [(0, 1), (1, 2), (2, 3), (3, 1), (1, 3)])
    before = m.forest.snapshot()
    counters = m.delete_edge(1, 3)
    assert m.forest.snapshot() == before
    assert counters.k <= 3
    assert_matches_oracle(m)


def test_delete_one_of_two_parallel_back_edges_keeps_loop():
    m = maintained(3, [(0, 1), (1, 2), (2, 1), (2, 1)])
    m.delete_edge(2, 1)
    f = m.forest
    assert f.types[1] is LoopType.REDUCIBLE
    assert f.headers[2] == 1
    assert_matches_oracle(m)


def test_delete_inner_back_edge_reparents_to_outer():
    m = maintained(4, [(0, 1), (1, 2), (2, 3), (3, 2), (3, 1)])
    m.delete_edge(3, 2)
    f = m.forest
    assert f.types[2] is LoopType.NONHEADER
    assert f.headers[3] == 1 and f.headers[2] == 1
    assert_matches_oracle(m)


def test_delete_shrinks_membership():
    # body {1,2,3,4} via 1->2->3->4, (4,1); also (1,3) keeping 3 alive when
    # (2,3) goes; 2 must then leave the loop
    m = maintained(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 1), (1, 3)])
    assert m.forest.headers[2] == 1
    m.delete_edge(2, 3)
    f = m.forest
    assert f.headers[2] == NONE
    assert f.headers[3] == 1 and f.headers[4] == 1
    assert_matches_oracle(m)


def test_delete_back_cross_shrinks():
    # body {1,2,3,4}: 1->2->3, (3,1) back, 1->4, (4,3) back-cross sustaining 4
    m = maintained(5, [(0, 1), (1, 2), (2, 3), (3, 1), (1, 4), (4, 3)])
    assert m.forest.headers[4] == 1
    m.delete_edge(4, 3)
    f = m.forest
    assert f.headers[4] == NONE
    assert f.headers[2] == 1 and f.headers[3] == 1
    assert_matches_oracle(m)


def test_delete_tree_edge_detaches_loop():
    # detaching the cone kills the loop it carried
    m = maintained(4, [(0, 1), (1, 2), (2, 3), (3, 2)])
    m.delete_edge(1, 2)
    f = m.forest
    assert not m.tree.attached[2] and not m.tree.attached[3]
    assert f.headers == [NONE] * 4
    assert all(t is LoopType.NONHEADER for t in f.types)
    assert m.forest.counts == [0, 0]
    assert_matches_oracle(m)


def test_delete_into_detached_cone_expels_attached_member():
    # loop {0, 1, 2}: 0 -> 1 -> 2, (2, 0); deleting (1, 2) detaches 2 and
    # must also expel 1, whose membership path ran through the edge
    m = maintained(3, [(0, 1), (1, 2), (2, 0)])
    assert m.forest.headers[1] == 0
    m.delete_edge(1, 2)
    f = m.forest
    assert f.headers[1] == NONE
    assert f.types[0] is LoopType.NONHEADER
    assert_matches_oracle(m)


def test_counts_census_after_every_step():
    m = maintained(6, [(0, 1), (1, 2), (2, 3), (3, 1), (2, 2), (0, 4), (4, 5)])
    steps = [("+", 5, 4), ("+", 3, 2), ("-", 3, 1), ("-", 2, 2), ("-", 5, 4)]
    for kind, u, v in steps:
        if kind == "+":
            m.insert_edge(u, v)
        else:
            m.delete_edge(u, v)
        assert tuple(m.forest.counts) == m.forest.census()
        assert_matches_oracle(m)


# -- queries --------------------------------------------------------------------


def test_loop_body():
    m = maintained(5, [(0, 1), (1, 2), (2, 3), (3, 2), (3, 1), (0, 4)])
    f = m.forest
    assert f.loop_body(2) == {2, 3}
    assert f.loop_body(1) == {1, 2, 3}
    assert f.loop_body(1) >= f.loop_body(2)
    with pytest.raises(ValueError):
        f.loop_body(4)


def test_loop_body_rejects_self_typed():
    m = maintained(2, [(0, 1), (1, 1)])
    with pytest.raises(ValueError):
        m.forest.loop_body(1)


def test_verify_against_detects_corruption():
    m = maintained(3, [(0, 1), (1, 2), (2, 1)])
    static = build_loop_forest(m.g, m.tree)
    assert m.forest.verify_against(static)
    m.forest.headers[2] = NONE
    assert not m.forest.verify_against(static)


def test_dump_format():
    m = maintained(3, [(0, 1), (1, 2), (2, 1)])
    assert m.forest.dump() == "0 NONHEADER -\n1 REDUCIBLE -\n2 NONHEADER 1\n"


def test_dump_acyclic_all_nonheader():
    m = maintained(3, [(0, 1), (1, 2)])
    for line in m.forest.dump().splitlines():
        assert line.endswith("NONHEADER -")


def test_memoized_lifts_equivalent():
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 2), (4, 1), (1, 5), (5, 1)]
    plain = maintained(6, [])
    memo = maintained(6, [])
    memo.forest.memoize_lifts = True
    for u, v in edges:
        plain.insert_edge(u, v)
        memo.insert_edge(u, v)
        assert plain.forest.snapshot() == memo.forest.snapshot()
    plain.delete_edge(4, 2)
    memo.delete_edge(4, 2)
    assert plain.forest.snapshot() == memo.forest.snapshot()
    assert_matches_oracle(memo)


def test_back_edge_witness_invariant():
    m = maintained(6, [(0, 1), (1, 2), (2, 3), (3, 1), (3, 2), (0, 4), (4, 5), (5, 4)])
    f = m.forest
    for h in range(6):
        if f.types[h] is LoopType.REDUCIBLE:
            body = f.loop_body(h)
            assert any(m.tree.is_back_edge(z, h) and z in body
                       for z in m.g.in_adj[h])


def test_header_ancestry_invariant():
    m = maintained(6, [(0, 1), (1, 2), (2, 3), (3, 1), (3, 2), (1, 4), (4, 1), (0, 5)])
    f = m.forest
    for v in range(6):
        if f.headers[v] != NONE:
            assert m.tree.is_ancestor(f.headers[v], v)
