import random

import pytest

from loopforest.dominance import DominanceIndex
from loopforest.errors import DetachedVertexError, IrreducibleError, LatchedError
from loopforest.graph import Cfg
from loopforest.maintainer import LATCH, LoopForestMaintainer
from loopforest.oracle import (dominator_sets, iterative_dominators,
                               reducibility_test)


def maintained(n, edges):
    m = LoopForestMaintainer(Cfg(n))
    for u, v in edges:
        m.insert_edge(u, v)
    return m


def test_header_dominates_members():
    m = maintained(4, [(0, 1), (1, 2), (2, 3), (3, 1)])
    dom = DominanceIndex(m)
    assert dom.header_dominates(1, 2)
    assert dom.header_dominates(1, 3)
    assert dom.header_dominates(1, 1)
    assert not dom.header_dominates(1, 0)
    with pytest.raises(ValueError):
        dom.header_dominates(2, 3)  # 2 heads nothing


def test_dominates_fast_paths():
    m = maintained(5, [(0, 1), (1, 2), (2, 3), (3, 2), (3, 1), (0, 4)])
    dom = DominanceIndex(m)
    for v in range(5):
        r = dom.dominates(0, v)
        assert r.answer and r.source == "LnfFast"
    r = dom.dominates(2, 3)  # inner header to member
    assert r.answer and r.source == "LnfFast"
    r = dom.dominates(1, 2)  # nested headers on one chain
    assert r.answer and r.source == "LnfFast"


def test_dominates_fallback():
    m = maintained(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    dom = DominanceIndex(m)
    r = dom.dominates(1, 3)
    assert not r.answer and r.source == "Fallback"
    r2 = dom.dominates(1, 1)
    assert r2.answer


def test_dominates_errors_on_detached():
    m = maintained(3, [(0, 1)])
    dom = DominanceIndex(m)
    with pytest.raises(DetachedVertexError):
        dom.dominates(0, 2)


def test_materialize_equals_iterative():
    m = maintained(5, [(0, 1), (1, 2), (2, 1), (0, 3), (3, 4), (4, 3), (1, 3)])
    dom = DominanceIndex(m)
    assert dom.materialize().idom == iterative_dominators(m.g).idom


def test_materialize_cache_invalidation():
    m = maintained(3, [(0, 1)])
    dom = DominanceIndex(m)
    dom.materialize()
    dom.materialize()
    assert dom.materialize_count == 1
    m.insert_edge(1, 2)
    dom.materialize()
    assert dom.materialize_count == 2


def test_materialize_refused_when_latched():
    m = maintained(4, [(0, 1), (1, 2), (2, 1), (0, 3)])
    m.policy = LATCH
    dom = DominanceIndex(m)
    with pytest.raises(IrreducibleError):
        m.insert_edge(3, 2)
    with pytest.raises(LatchedError):
        dom.materialize()


def brute_dominates(sets, u, v):
    return bool(sets[v] & (1 << u))


def test_all_pairs_agreement_random():
    rng = random.Random(4242)
    for _ in range(40):
        n = rng.randrange(2, 12)
        m = LoopForestMaintainer(Cfg(n))
        for v in range(1, n):
            m.insert_edge(rng.randrange(v), v)
        for _ in range(rng.randrange(0, 6)):
            u, v = rng.randrange(n), rng.randrange(n)
            m.g.insert_edge_raw(u, v)
            ok = reducibility_test(m.g)
            m.g.delete_edge_raw(u, v)
            if ok:
                m.insert_edge(u, v)
        dom = DominanceIndex(m)
        sets = dominator_sets(m.g)
        for u in range(n):
            for v in range(n):
                result = dom.dominates(u, v)
                assert result.answer == brute_dominates(sets, u, v), \
                    f"dominates({u},{v}) disagrees with the set oracle"


def test_fast_path_soundness():
    # every LnfFast true answer must be confirmed by the set oracle
    rng = random.Random(777)
    for _ in range(30):
        n = rng.randrange(2, 10)
        m = LoopForestMaintainer(Cfg(n))
        for v in range(1, n):
            m.insert_edge(rng.randrange(v), v)
        for _ in range(3):
            u, v = rng.randrange(n), rng.randrange(n)
            m.g.insert_edge_raw(u, v)
            ok = reducibility_test(m.g)
            m.g.delete_edge_raw(u, v)
            if ok:
                m.insert_edge(u, v)
        dom = DominanceIndex(m)
        sets = dominator_sets(m.g)
        for u in range(n):
            for v in range(n):
                result = dom.dominates(u, v)
                if result.source == "LnfFast" and result.answer:
                    assert brute_dominates(sets, u, v)
