"""Dominance queries backed by the maintained loop forest.

Loop headers dominate their entire bodies, so header-to-member questions
(and header-to-header questions, which are chain ancestry) are answered
straight from the forest. Everything else falls back to a dominator tree
materialized on demand and cached until the next update. The materialized
tree is computed from the definition directly: d dominates v exactly when v
is unreachable from the root once d is removed. That keeps it an independent
path from the iterative-intersection oracle it is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dfst import NONE
from .errors import DetachedVertexError, LatchedError
from .forest import LoopType
from .maintainer import LoopForestMaintainer
from .oracle import DomTree


@dataclass(frozen=True)
class DomQueryResult:
    answer: bool
    source: str  # "LnfFast" or "Fallback"


class DominanceIndex:
    def __init__(self, maintainer: LoopForestMaintainer):
        self.maintainer = maintainer
        self._cached: DomTree | None = None
        self._cached_epoch = -1
        self.materialize_count = 0

    def header_dominates(self, h: int, v: int) -> bool:
        """True iff v belongs to h's loop body (h included); headers dominate
        their bodies, so membership answers dominance."""
        forest = self.maintainer.forest
        if forest.types[h] is not LoopType.REDUCIBLE:
            raise ValueError(f"vertex {h} does not head a reducible loop")
        return self._in_body(h, v)

    def _in_body(self, h: int, v: int) -> bool:
        headers = self.maintainer.forest.headers
        while v != NONE:
            if v == h:
                return True
            v = headers[v]
        return False

    def dominates(self, u: int, v: int) -> DomQueryResult:
        """Does u dominate v? Fast paths answer from the forest; anything
        they cannot settle walks the materialized dominator tree."""
        tree = self.maintainer.tree
        if not tree.attached[u] or not tree.attached[v]:
            raise DetachedVertexError("dominance queries need attached vertices")
        if u == v or u == self.maintainer.g.root:
            return DomQueryResult(True, "LnfFast")
        forest = self.maintainer.forest
        if forest.types[u] is LoopType.REDUCIBLE and self._in_body(u, v):
            return DomQueryResult(True, "LnfFast")
        dom = self.materialize()
        cur = v
        while cur != NONE:
            if cur == u:
                return DomQueryResult(True, "Fallback")
            cur = dom.idom[cur]
        return DomQueryResult(False, "Fallback")

    def materialize(self) -> DomTree:
        """Dominator tree for the current graph, cached per update epoch."""
        if self.maintainer.forest.irreducible:
            raise LatchedError("forest is latched; dominator queries refused")
        if self._cached is not None and self._cached_epoch == self.maintainer.epoch:
            return self._cached
        self._cached = _removal_dominators(self.maintainer)
        self._cached_epoch = self.maintainer.epoch
        self.materialize_count += 1
        return self._cached


def _removal_dominators(maintainer: LoopForestMaintainer) -> DomTree:
    """idom per vertex via removal reachability: d dominates v iff every
    root path to v passes d, i.e. v is unreachable in the graph minus d."""
    g = maintainer.g
    attached = maintainer.tree.attached
    n = g.n
    root = g.root
    dom_of: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        if attached[v]:
            dom_of[v].append(v)
            if v != root:
                dom_of[v].append(root)
    for d in range(n):
        if not attached[d] or d == root:
            continue
        seen = [False] * n
        seen[root] = True
        stack = [root]
        while stack:
            u = stack.pop()
            for w in g.out_adj[u]:
                if w != d and not seen[w]:
                    seen[w] = True
                    stack.append(w)
        for v in range(n):
            if attached[v] and v != d and not seen[v]:
                dom_of[v].append(d)
    idom = [NONE] * n
    for v in range(n):
        if not attached[v] or v == root:
            continue
        # the strict dominator with the largest dominator set is the closest
        best = root
        best_size = -1
        for d in dom_of[v]:
            if d != v and len(dom_of[d]) > best_size:
                best, best_size = d, len(dom_of[d])
        idom[v] = best
    return DomTree(idom)
